import os


def worker_count() -> int:
    """Threads for pool-parallel loops; CIRCLE_PARTITIONS_THREADS caps it."""
    n = os.cpu_count() or 1
    cap = os.environ.get("CIRCLE_PARTITIONS_THREADS")
    if cap:
        try:
            n = min(n, max(1, int(cap)))
        except ValueError:
            pass
    return n
