"""Weighted prime partitions: exact counts, circle-method quantities and asymptotics."""
__version__ = "0.1.0"
