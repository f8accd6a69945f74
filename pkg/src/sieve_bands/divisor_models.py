"""Restricted and generalized divisor functions: tau_Q, tau_{Q,R}, d_k and tau_{Q,R} * mu.

Note on naming: tau_{Q,R} * mu is the Eratosthenes transform of tau_{Q,R} in
the f * mu sense; it is sometimes called the inverse transform.  Here it is
simply the convolution with mu.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from sieve_bands.bands import band_sum_table
from sieve_bands.core_arith import (
    DomainError,
    ValueTable,
    constant_table,
    dirichlet_convolve,
    indicator_table,
    mobius_table,
)
from sieve_bands.spectra import DEFAULT_EPS_GRID, RationalPoint, exp_sum_table


@dataclass(frozen=True)
class DivisorModel:
    kind: str  # tau_Q | tau_QR | d_k | tau_QR_mu
    params: dict
    table: ValueTable


def tau_Q_table(Q: int, X: int) -> ValueTable:
    return dirichlet_convolve(indicator_table(Q), constant_table(X), X)


def tau_QR_table(Q: int, R: int, X: int) -> ValueTable:
    """#{(d, t) : d t = n, d <= Q, t <= R} for n in [1, X]."""
    if min(Q, R, X) < 1:
        raise DomainError(f"need Q, R, X >= 1, got {Q}, {R}, {X}")
    return dirichlet_convolve(indicator_table(Q), indicator_table(R), X)


def d_k_table(k: int, X: int) -> ValueTable:
    """Number of ordered factorizations n = n_1 ... n_k, as the k-fold convolution of 1."""
    if k < 2:
        raise DomainError(f"d_k needs k >= 2, got {k}")
    ones = constant_table(X)
    table = ones
    for _ in range(k - 1):
        table = dirichlet_convolve(ones, table, X)
    return table


def tau_QR_mu_table(Q: int, R: int, X: int) -> ValueTable:
    return dirichlet_convolve(tau_QR_table(Q, R, X), mobius_table(X), X)


def model(kind: str, X: int, **params) -> DivisorModel:
    builders = {
        "tau_Q": lambda: tau_Q_table(params["Q"], X),
        "tau_QR": lambda: tau_QR_table(params["Q"], params["R"], X),
        "d_k": lambda: d_k_table(params["k"], X),
        "tau_QR_mu": lambda: tau_QR_mu_table(params["Q"], params["R"], X),
    }
    if kind not in builders:
        raise DomainError(f"unknown divisor model {kind!r}")
    return DivisorModel(kind, dict(params), builders[kind]())


def window_slice(table: ValueTable, lo: int, hi: int) -> ValueTable:
    if not table.lo <= lo <= hi <= table.hi:
        raise DomainError(f"window [{lo}, {hi}] not inside [{table.lo}, {table.hi}]")
    return ValueTable(lo, hi, table.values[lo - table.lo:hi - table.lo + 1])


def conjecture_quantity(
    Q: int, R: int, q: int, r: int, N: int, H: int, window: tuple[int, int] | None = None
) -> float:
    """sum_{a <= H} sum_{n = a r (mod q)} tau_{Q,R}(n) - H Q R / q over a window of n.

    The window defaults to (N, 2N]; pass ``window=(lo, hi)`` for another range.
    """
    if math.gcd(r, q) != 1:
        raise DomainError(f"r={r} is not coprime to q={q}")
    lo, hi = window if window is not None else (N + 1, 2 * N)
    table = window_slice(tau_QR_table(Q, R, hi), lo, hi)
    res = band_sum_table(table, q, r, 0, H)
    return res.band_total - H * Q * R / q


def tau_QR_mu_band(Q: int, R: int, q: int, r: int, b: int, N: int, H: int):
    """Band discrepancy of tau_{Q,R} * mu on (N, 2N] with the usual (H/q) main term."""
    if math.gcd(r, q) != 1:
        raise DomainError(f"r={r} is not coprime to q={q}")
    table = window_slice(tau_QR_mu_table(Q, R, 2 * N), N + 1, 2 * N)
    return band_sum_table(table, q, r, b, H)


def dk_expsum(k: int, N: int, q: int, a: int) -> complex:
    table = window_slice(d_k_table(k, 2 * N), N + 1, 2 * N)
    return exp_sum_table(table, RationalPoint.reduced(a, q))


def dk_expsum_constant(k: int, N: int, q: int, a: int, eps_grid=DEFAULT_EPS_GRID) -> dict[float, float]:
    """|sum_{n in (N, 2N]} d_k(n) e(n a/q)| / ((N q)^eps (N/q + q + N^(1 - 1/k)))."""
    if q < 2:
        raise DomainError(f"need q > 1, got {q}")
    if math.gcd(a, q) != 1:
        raise DomainError(f"a={a} is not coprime to q={q}")
    if k < 2:
        raise DomainError(f"d_k needs k >= 2, got {k}")
    size = abs(dk_expsum(k, N, q, a))
    return {eps: size / ((N * q) ** eps * (N / q + q + N ** (1 - 1 / k))) for eps in eps_grid}
