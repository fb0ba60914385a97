"""Sieves, multiplicative tables, Dirichlet convolution powers and Ramanujan sums."""
from __future__ import annotations

import enum
import math
import struct
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path

import numpy as np

# Hard cap on table length; 2e8 entries of int64/float64 is already ~1.6 GB per table.
MAX_TABLE_SIZE = 200_000_000

_INT_SAFE = 2**62


class CapacityError(MemoryError):
    pass


class WeightKind(enum.Enum):
    PRIME_TUPLE = 0
    VON_MANGOLDT_POWER = 1
    CUSTOM = 2

    @classmethod
    def parse(cls, value) -> "WeightKind":
        if isinstance(value, cls):
            return value
        key = str(value).lower()
        aliases = {
            "pr": cls.PRIME_TUPLE,
            "prime": cls.PRIME_TUPLE,
            "prime_tuple": cls.PRIME_TUPLE,
            "lambda": cls.VON_MANGOLDT_POWER,
            "mangoldt": cls.VON_MANGOLDT_POWER,
            "von_mangoldt_power": cls.VON_MANGOLDT_POWER,
            "custom": cls.CUSTOM,
        }
        if key not in aliases:
            raise ValueError(f"unknown weight kind {value!r}")
        return aliases[key]


def _check_capacity(n_max: int) -> None:
    if n_max > MAX_TABLE_SIZE:
        raise CapacityError(f"n_max={n_max} exceeds the table budget of {MAX_TABLE_SIZE}")


def prime_sieve(n_max: int) -> np.ndarray:
    """Boolean array ``is_prime[0..n_max]``."""
    _check_capacity(n_max)
    is_prime = np.ones(n_max + 1, dtype=bool)
    is_prime[:2] = False
    for p in range(2, math.isqrt(n_max) + 1):
        if is_prime[p]:
            is_prime[p * p :: p] = False
    return is_prime


def primes_up_to(n_max: int) -> np.ndarray:
    return np.flatnonzero(prime_sieve(n_max))


@dataclass(frozen=True, eq=False)
class MultiplicativeTables:
    """Sieve-exact tables indexed 0..n_max (index 0 is a placeholder)."""

    n_max: int
    is_prime: np.ndarray
    mangoldt: np.ndarray
    mobius: np.ndarray
    totient: np.ndarray

    @cached_property
    def primes(self) -> np.ndarray:
        return np.flatnonzero(self.is_prime)


def build_tables(n_max: int) -> MultiplicativeTables:
    if n_max < 2:
        raise ValueError("n_max must be at least 2")
    _check_capacity(n_max)
    is_prime = prime_sieve(n_max)
    primes = np.flatnonzero(is_prime)

    mangoldt = np.zeros(n_max + 1)
    mobius = np.ones(n_max + 1, dtype=np.int8)
    mobius[0] = 0
    totient = np.arange(n_max + 1, dtype=np.int64)
    for p in primes.tolist():
        logp = math.log(p)
        pk = p
        while pk <= n_max:
            mangoldt[pk] = logp
            pk *= p
        mobius[p::p] *= -1
        if p * p <= n_max:
            mobius[p * p :: p * p] = 0
        totient[p::p] -= totient[p::p] // p
    for arr in (is_prime, mangoldt, mobius, totient):
        arr.setflags(write=False)
    return MultiplicativeTables(n_max, is_prime, mangoldt, mobius, totient)


def mobius_upto(n_max: int) -> np.ndarray:
    return build_tables(max(n_max, 2)).mobius[: n_max + 1]


@dataclass(frozen=True, eq=False)
class WeightTable:
    """Partition weights ``w_n`` for ``1 <= n <= n_max``.

    ``values`` has length ``n_max + 1`` with ``values[0] == 0``. Prime-tuple
    tables hold exact integers (int64, or Python ints in an object array once
    a value would leave the 62-bit safe range); von Mangoldt tables hold floats.
    """

    kind: WeightKind
    r: int
    n_max: int
    values: np.ndarray

    @property
    def is_integer(self) -> bool:
        return self.values.dtype != np.float64

    def __getitem__(self, n):
        return self.values[n]

    def as_float(self) -> np.ndarray:
        return self.values.astype(np.float64)

    def truncated(self, n_max: int) -> "WeightTable":
        if n_max > self.n_max:
            raise ValueError(f"table only reaches {self.n_max}, asked for {n_max}")
        return WeightTable(self.kind, self.r, n_max, self.values[: n_max + 1])

    @cached_property
    def support(self) -> np.ndarray:
        return np.flatnonzero(self.values != 0)

    @classmethod
    def from_values(cls, values, kind=WeightKind.CUSTOM, r: int = 1) -> "WeightTable":
        """Wrap ``values[0..n_max]`` (``values[0]`` is ignored and zeroed)."""
        arr = np.array(values)
        if arr.dtype.kind in "iub":
            arr = arr.astype(np.int64)
        elif arr.dtype != object:
            arr = arr.astype(np.float64)
        arr[0] = 0
        if np.any(arr < 0):
            raise ValueError("weights must be nonnegative")
        arr.setflags(write=False)
        return cls(WeightKind.parse(kind), r, len(arr) - 1, arr)

    def dump(self, path) -> None:
        write_weight_table(self, path)


def ones_weights(n_max: int) -> WeightTable:
    """All-ones weights: ordinary integer partitions."""
    return WeightTable.from_values(np.ones(n_max + 1, dtype=np.int64))


def _convolve_sparse(f: np.ndarray, g: np.ndarray, n_max: int) -> np.ndarray:
    """(f*g)(n) for n <= n_max, looping over the support of ``f``."""
    integer = f.dtype != np.float64 and g.dtype != np.float64
    if integer and f.dtype == np.int64 and g.dtype == np.int64:
        # Each output is a sum of at most d(n) <= n products.
        bound = int(np.abs(f).max(initial=0)) * int(np.abs(g).max(initial=0)) * n_max
        if bound >= _INT_SAFE:
            f, g = f.astype(object), g.astype(object)
    out = np.zeros(n_max + 1, dtype=f.dtype if f.dtype == g.dtype else np.float64)
    if out.dtype == object:
        out[:] = 0
    for d in np.flatnonzero(f[: n_max + 1]).tolist():
        if d == 0:
            continue
        m = n_max // d
        out[d::d][:m] += f[d] * g[1 : m + 1]
    return out


def dirichlet_convolve(a: WeightTable, b: WeightTable) -> WeightTable:
    """Dirichlet convolution of two weight tables on their common range."""
    n_max = min(a.n_max, b.n_max)
    f, g = a.values[: n_max + 1], b.values[: n_max + 1]
    if len(a.support) > len(b.support):
        f, g = g, f
    out = _convolve_sparse(f, g, n_max)
    out.setflags(write=False)
    kind = a.kind if a.kind == b.kind else WeightKind.CUSTOM
    return WeightTable(kind, a.r + b.r, n_max, out)


def dirichlet_power(kind, r: int, n_max: int, tables: MultiplicativeTables | None = None) -> WeightTable:
    """r-fold Dirichlet self-convolution of the prime indicator or of Lambda."""
    kind = WeightKind.parse(kind)
    if r < 1:
        raise ValueError("r must be positive")
    if kind is WeightKind.CUSTOM:
        raise ValueError("dirichlet_power needs PRIME_TUPLE or VON_MANGOLDT_POWER")
    if tables is None or tables.n_max < n_max:
        tables = build_tables(max(n_max, 2))
    if kind is WeightKind.PRIME_TUPLE:
        base = tables.is_prime[: n_max + 1].astype(np.int64)
    else:
        base = np.array(tables.mangoldt[: n_max + 1])
    current = base.copy()
    for _ in range(r - 1):
        current = _convolve_sparse(base, current, n_max)
    current.setflags(write=False)
    return WeightTable(kind, r, n_max, current)


def ramanujan_sum_direct(q: int, a: int) -> float:
    if q < 1:
        raise ValueError("q must be positive")
    ells = [ell for ell in range(1, q + 1) if math.gcd(ell, q) == 1]
    angles = [2 * math.pi * ((a * ell) % q) / q for ell in ells]
    re = math.fsum(math.cos(t) for t in angles)
    im = math.fsum(math.sin(t) for t in angles)
    if abs(im) > 1e-12 * max(1.0, math.sqrt(q)):
        raise ArithmeticError(f"imaginary part {im} of S*({q},{a}) did not vanish")
    return re


def _factorize(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def mobius(n: int) -> int:
    f = _factorize(n)
    if any(e > 1 for e in f.values()):
        return 0
    return -1 if len(f) % 2 else 1


def totient(n: int) -> int:
    out = n
    for p in _factorize(n):
        out -= out // p
    return out


def ramanujan_sum_closed(q: int, a: int) -> float:
    g = math.gcd(q, a)
    m = q // g
    return float(mobius(m) * totient(q) // totient(m))


# Direct summation up to this modulus, closed form above.
RAMANUJAN_DIRECT_LIMIT = 10_000


def ramanujan_sum(q: int, a: int) -> float:
    """S*(q, a): sum of e(a l / q) over 1 <= l <= q coprime to q."""
    if q <= RAMANUJAN_DIRECT_LIMIT:
        return ramanujan_sum_direct(q, a)
    return ramanujan_sum_closed(q, a)


def vaughan_sum(q: int, a: int, X: float) -> float:
    """Finite sum over j <= sqrt(X) of S*(q_j, a_j) / (j^2 phi(q_j))."""
    if math.gcd(a, q) != 1:
        raise ValueError(f"gcd({a}, {q}) != 1")
    if X < 4:
        raise ValueError("X must be at least 4")
    terms = []
    cache: dict[tuple[int, int], float] = {}
    for j in range(1, math.isqrt(int(X)) + 1):
        g = math.gcd(q, j)
        qj = q // g
        aj = (a * j // g) % qj
        key = (qj, aj)
        if key not in cache:
            cache[key] = ramanujan_sum(qj, aj) / totient(qj)
        terms.append(cache[key] / (j * j))
    return math.fsum(terms)


def vaughan_limit(q: int) -> float:
    """The X -> infinity value zeta(2) prod_{p|q}(-p) / q^2."""
    prod = 1
    for p in _factorize(q):
        prod *= -p
    return (math.pi**2 / 6) * prod / (q * q)


_MAGIC = b"WTBL1"
_HEADER = struct.Struct("<BIQ")


def write_weight_table(table: WeightTable, path) -> None:
    """Binary dump: magic, little-endian (kind u8, r u32, n_max u64), raw values."""
    values = table.values[1:]
    if table.kind is WeightKind.VON_MANGOLDT_POWER or values.dtype == np.float64:
        payload = values.astype("<f8").tobytes()
    else:
        if values.dtype == object and max(values, default=0) >= 2**63:
            raise OverflowError("weight values exceed int64; binary format cannot hold them")
        payload = values.astype("<i8").tobytes()
    with open(Path(path), "wb") as fh:
        fh.write(_MAGIC)
        fh.write(_HEADER.pack(table.kind.value, table.r, table.n_max))
        fh.write(payload)


def read_weight_table(path) -> WeightTable:
    data = Path(path).read_bytes()
    if data[: len(_MAGIC)] != _MAGIC:
        raise ValueError("not a WTBL1 file")
    kind_code, r, n_max = _HEADER.unpack_from(data, len(_MAGIC))
    kind = WeightKind(kind_code)
    body = data[len(_MAGIC) + _HEADER.size :]
    dtype = "<f8" if kind is WeightKind.VON_MANGOLDT_POWER else "<i8"
    values = np.frombuffer(body, dtype=dtype)
    if len(values) != n_max:
        raise ValueError(f"expected {n_max} values, found {len(values)}")
    out = np.zeros(n_max + 1, dtype=np.float64 if dtype == "<f8" else np.int64)
    out[1:] = values
    out.setflags(write=False)
    return WeightTable(kind, r, n_max, out)
