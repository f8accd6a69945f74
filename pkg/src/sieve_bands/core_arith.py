"""Exact elementary kernels: Mobius sieve, divisors, inverses, Dirichlet convolution.

Values live in :class:`ValueTable`, a dense run of function values on an
integer interval.  Integer-valued tables use ``int64`` storage so that
convolutions and band sums on them are exact; everything else is ``float64``.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass

import numpy as np

DEFAULT_MAX_TABLE = 2**27
MAX_TABLE_ENV = "SIEVE_BANDS_MAX_TABLE"


class DomainError(ValueError):
    """An argument lies outside the domain of an operation."""


class TableSizeError(ValueError):
    """A requested table would exceed the configured memory budget."""


class NoInverseError(ArithmeticError):
    def __init__(self, r: int, modulus: int):
        super().__init__(f"{r} has no inverse modulo {modulus} (gcd = {math.gcd(r, modulus)})")
        self.r = r
        self.modulus = modulus


def max_table_length() -> int:
    raw = os.environ.get(MAX_TABLE_ENV)
    if raw is None:
        return DEFAULT_MAX_TABLE
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"{MAX_TABLE_ENV} must be a positive integer, got {raw!r}") from None
    if value < 1:
        raise ValueError(f"{MAX_TABLE_ENV} must be a positive integer, got {raw!r}")
    return value


def check_table_length(length: int) -> None:
    limit = max_table_length()
    if length > limit:
        raise TableSizeError(f"table of length {length} exceeds the budget of {limit} entries")


@dataclass(frozen=True, eq=False)
class ValueTable:
    """Values of an arithmetic function on ``[lo, hi]``; ``values[i]`` is the value at ``lo + i``."""

    lo: int
    hi: int
    values: np.ndarray

    def __post_init__(self):
        if not 1 <= self.lo <= self.hi:
            raise DomainError(f"need 1 <= lo <= hi, got lo={self.lo}, hi={self.hi}")
        length = self.hi - self.lo + 1
        check_table_length(length)
        values = np.asarray(self.values)
        if values.ndim != 1 or values.shape[0] != length:
            raise ValueError(f"expected {length} values for [{self.lo}, {self.hi}], got shape {values.shape}")
        if values.dtype.kind in "biu":
            values = values.astype(np.int64, copy=True)
        elif values.dtype.kind == "f":
            values = values.astype(np.float64, copy=True)
            if not np.all(np.isfinite(values)):
                raise ValueError("table values must be finite")
        else:
            raise TypeError(f"unsupported value dtype {values.dtype}")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @classmethod
    def from_values(cls, lo: int, values) -> ValueTable:
        values = np.asarray(values)
        return cls(lo, lo + len(values) - 1, values)

    @property
    def integer(self) -> bool:
        """True when every entry is an exact integer (stored as int64)."""
        return self.values.dtype.kind == "i"

    def __len__(self) -> int:
        return self.hi - self.lo + 1

    def __eq__(self, other):
        if not isinstance(other, ValueTable):
            return NotImplemented
        return (
            self.lo == other.lo
            and self.hi == other.hi
            and self.integer == other.integer
            and bool(np.array_equal(self.values, other.values))
        )

    def __hash__(self):
        return hash((self.lo, self.hi, self.values.tobytes()))

    def at(self, n: int):
        """Value at ``n``; zero outside the table."""
        if n < self.lo or n > self.hi:
            return 0 if self.integer else 0.0
        return self.values[n - self.lo].item()

    def range(self) -> np.ndarray:
        return np.arange(self.lo, self.hi + 1, dtype=np.int64)

    def padded(self, X: int) -> np.ndarray:
        """Values on ``[1, X]`` with zeros outside the table (index ``n-1`` holds the value at n)."""
        out = np.zeros(X, dtype=self.values.dtype)
        lo, hi = self.lo, min(self.hi, X)
        if lo <= hi:
            out[lo - 1:hi] = self.values[: hi - lo + 1]
        return out

    def as_integer(self) -> ValueTable:
        """Integer-flagged copy; raises if any entry is not an exact integer."""
        if self.integer:
            return self
        rounded = np.rint(self.values)
        if not np.array_equal(rounded, self.values):
            raise ValueError("table has non-integer entries")
        return ValueTable(self.lo, self.hi, rounded.astype(np.int64))


def indicator_table(Q: int, X: int | None = None) -> ValueTable:
    """Indicator of ``[1, Q]`` stored on ``[1, X]`` (default ``X = Q``)."""
    X = Q if X is None else X
    if Q < 1 or X < 1:
        raise DomainError(f"need Q, X >= 1, got Q={Q}, X={X}")
    values = np.zeros(X, dtype=np.int64)
    values[: min(Q, X)] = 1
    return ValueTable(1, X, values)


def delta_table(X: int = 1) -> ValueTable:
    """The Dirichlet identity (1 at n=1, 0 elsewhere) on ``[1, X]``."""
    values = np.zeros(X, dtype=np.int64)
    values[0] = 1
    return ValueTable(1, X, values)


def constant_table(X: int, value: int = 1) -> ValueTable:
    return ValueTable(1, X, np.full(X, value, dtype=np.int64))


def _prime_list(limit: int) -> np.ndarray:
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    is_prime = np.ones(limit + 1, dtype=bool)
    is_prime[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if is_prime[p]:
            is_prime[p * p::p] = False
    return np.flatnonzero(is_prime)


def mobius_table(X: int) -> ValueTable:
    """mu(n) for n in ``[1, X]`` by an Eratosthenes-style sieve."""
    if X < 1:
        raise TableSizeError(f"Mobius table needs X >= 1, got {X}")
    check_table_length(X)
    # index n holds mu(n); index 0 is scratch
    mu = np.ones(X + 1, dtype=np.int64)
    for p in _prime_list(X).tolist():
        mu[p::p] *= -1
        if p * p <= X:
            mu[p * p::p * p] = 0
    return ValueTable(1, X, mu[1:])


def divisors(n: int) -> list[int]:
    """Divisors of ``n`` in ascending order, by trial division up to sqrt(n)."""
    if n < 1:
        raise DomainError(f"divisors needs n >= 1, got {n}")
    small, large = [], []
    for d in range(1, math.isqrt(n) + 1):
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
    return small + large[::-1]


def mod_inverse(r: int, modulus: int) -> int:
    """The inverse of ``r`` modulo ``modulus`` in ``[1, modulus-1]``.

    Raises NoInverseError when gcd(r, modulus) != 1.
    """
    if modulus < 2:
        raise DomainError(f"modulus must be >= 2, got {modulus}")
    try:
        # pow with exponent -1 runs the extended Euclidean algorithm
        return pow(r, -1, modulus)
    except ValueError:
        raise NoInverseError(r, modulus) from None


def dirichlet_convolve(a: ValueTable, b: ValueTable, X: int) -> ValueTable:
    """(a * b)(n) for n in ``[1, X]``, treating entries outside each table as zero.

    Enumerates pairs (d, t) with d*t <= X one d at a time, so the cost is
    O(sum_{d <= min(hi_a, X)} X/d).
    """
    if X < 1:
        raise DomainError(f"convolution range needs X >= 1, got {X}")
    check_table_length(X)
    integer = a.integer and b.integer
    dtype = np.int64 if integer else np.float64
    av = a.padded(min(a.hi, X)).astype(dtype, copy=False)
    bv = b.padded(min(b.hi, X)).astype(dtype, copy=False)
    out = np.zeros(X, dtype=dtype)
    for d in np.flatnonzero(av).tolist():
        d += 1
        tmax = min(len(bv), X // d)
        if tmax == 0:
            break
        # out[d*t - 1] for t = 1..tmax
        out[d - 1:d * tmax:d] += av[d - 1] * bv[:tmax]
    return ValueTable(1, X, out)


def nearest_int_distance(alpha: float) -> float:
    """Distance from ``alpha`` to the nearest integer, in [0, 1/2]."""
    frac = alpha - math.floor(alpha)
    return min(frac, 1.0 - frac)
