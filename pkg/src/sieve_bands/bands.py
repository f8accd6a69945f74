"""Band discrepancies T_f(q, r, b, N, H): direct counting and the additive-character expansion.

A band is the union over 1 <= a <= H of the classes n = a r + b (mod q),
restricted to n in (N, 2N].  The discrepancy subtracts the expected share
(H/q) * sum_{n in (N, 2N]} f(n).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from sieve_bands.core_arith import DomainError, ValueTable, divisors, mod_inverse
from sieve_bands.sieve_function import SieveSpec, eval_f_range
from sieve_bands.spectra import (
    DEFAULT_EPS_GRID,
    RationalPoint,
    combine_residues,
    reduced_points,
    residue_sums,
)

GEOMETRIC_GUARD = 1e-12


@dataclass(frozen=True)
class BandParams:
    q: int
    r: int
    b: int
    N: int
    H: int

    def __post_init__(self):
        for name in ("q", "N", "H"):
            if getattr(self, name) < 1:
                raise DomainError(f"{name} must be >= 1, got {getattr(self, name)}")
        if math.gcd(self.r, self.q) != 1:
            raise DomainError(f"r={self.r} is not coprime to q={self.q}")
        # the band depends on r and b only modulo q
        object.__setattr__(self, "r", self.r % self.q)
        object.__setattr__(self, "b", self.b % self.q)

    def warnings(self) -> list[str]:
        """Soft guards: the bounds assume H = o(q) and q = o(N)."""
        out = []
        if self.H >= self.q:
            out.append(f"H={self.H} >= q={self.q}: H=o(q) is violated, bands overlap")
        if self.q >= self.N:
            out.append(f"q={self.q} >= N={self.N}: q=o(N) is violated, bands are sporadic")
        return out


@dataclass(frozen=True)
class BandResult:
    T: float
    band_total: float
    main_term: float
    method: str
    # q*T as an exact integer when f is integer-valued (direct method only)
    scaled_T: int | None = None


def band_residues(q: int, r: int, b: int, H: int) -> np.ndarray:
    """Residues (a r + b) mod q for a = 1..H, in order of a."""
    a = np.arange(1, H + 1, dtype=np.int64)
    return (a * (r % q) + b % q) % q


def band_sum_table(table: ValueTable, q: int, r: int, b: int, H: int) -> BandResult:
    """Band discrepancy of an arbitrary table; the main term uses the table's total.

    Residues repeated when H > q count with multiplicity.
    """
    if q < 1 or H < 1:
        raise DomainError(f"need q, H >= 1, got q={q}, H={H}")
    sums = residue_sums(table, q)
    weights = np.bincount(band_residues(q, r, b, H), minlength=q)
    if table.integer:
        band_total = int(np.dot(weights, sums))
        total = int(sums.sum())
        scaled = q * band_total - H * total
        return BandResult(scaled / q, float(band_total), H * total / q, "direct", scaled)
    band_total = float(np.dot(weights.astype(np.float64), sums))
    total = float(sums.sum())
    main = H * total / q
    return BandResult(band_total - main, band_total, main, "direct")


def band_sum_direct(spec: SieveSpec, p: BandParams, table: ValueTable | None = None) -> BandResult:
    if table is None:
        table = eval_f_range(spec, p.N)
    return band_sum_table(table, p.q, p.r, p.b, p.H)


def geometric_sum(j: int, ell: int, H: int) -> complex:
    """sum_{a=1}^{H} e(j a / ell) in closed form, summed directly when j/ell is near an integer."""
    alpha = (j % ell) / ell
    frac = min(alpha, 1.0 - alpha)
    if frac < GEOMETRIC_GUARD:
        a = np.arange(1, H + 1)
        return complex(np.sum(np.exp(2j * math.pi * ((a * j) % ell) / ell)))
    z = cmath.exp(2j * math.pi * alpha)
    zH = cmath.exp(2j * math.pi * ((j * H) % ell) / ell)
    return z * (zH - 1) / (z - 1)


def _e(j: int, ell: int) -> complex:
    return cmath.exp(2j * math.pi * (j % ell) / ell)


def decomposition_terms(spec: SieveSpec, p: BandParams, table: ValueTable | None = None):
    """Yield (ell, j, term) with q T = sum of the terms, one per ell | q, ell > 1, j in Z*_ell."""
    if table is None:
        table = eval_f_range(spec, p.N)
    sums_q = residue_sums(table, p.q)
    for ell in divisors(p.q)[1:]:
        rbar = mod_inverse(p.r % ell, ell)
        # residue sums mod ell fold those mod q since ell | q
        sums = sums_q.reshape(p.q // ell, ell).sum(axis=0)
        for pt in reduced_points(ell):
            j = pt.j
            fhat = combine_residues(sums, RationalPoint.reduced(-j * rbar, ell))
            yield ell, j, fhat * _e(j * rbar * p.b, ell) * geometric_sum(j, ell, p.H)


def band_sum_decomposition(spec: SieveSpec, p: BandParams, table: ValueTable | None = None) -> BandResult:
    """T_f via the expansion over ell | q (ell > 1) and reduced j mod ell."""
    if p.q < 2:
        raise DomainError("the decomposition needs q >= 2")
    if table is None:
        table = eval_f_range(spec, p.N)
    total = 0j
    for _, _, term in decomposition_terms(spec, p, table):
        total += term
    T = total.real / p.q
    if table.integer:
        main = p.H * int(table.values.sum()) / p.q
    else:
        main = p.H * float(table.values.sum()) / p.q
    return BandResult(T, T + main, main, "decomposition")


def length_inertia_split(
    spec: SieveSpec, q: int, N: int, H: int, h: int, table: ValueTable | None = None
) -> tuple[BandResult, list[BandResult]]:
    """T_f(q, N, [H/h] h) and the shifted short-band pieces T_f(q, 1, (j-1) h, N, h)."""
    if h < 1:
        raise DomainError(f"h must be >= 1, got {h}")
    if h > H:
        raise DomainError(f"need h <= H, got h={h}, H={H}")
    if table is None:
        table = eval_f_range(spec, N)
    blocks = H // h
    left = band_sum_table(table, q, 1, 0, blocks * h)
    right = [band_sum_table(table, q, 1, (j - 1) * h, h) for j in range(1, blocks + 1)]
    return left, right


@dataclass(frozen=True)
class BoundRatios:
    eq4_ratio: float
    trivial_ratio: float
    theta: float
    level: float


def _log_ratio(x: int, N: int) -> float:
    return math.log(x) / math.log(N) if N > 1 else math.nan


def bound_ratios(result: BandResult, spec: SieveSpec, p: BandParams, eps_grid=DEFAULT_EPS_GRID) -> dict[float, BoundRatios]:
    """|T| against N^eps (N/q + q + Q) and against the trivial N^(1+eps) H / q."""
    absT = abs(result.T)
    N, q, H, Q = p.N, p.q, p.H, spec.Q
    theta = _log_ratio(H, N)
    level = _log_ratio(Q, N)
    out = {}
    for eps in eps_grid:
        eq4 = absT / (N**eps * (N / q + q + Q))
        trivial = absT / (N ** (1 + eps) * H / q)
        out[eps] = BoundRatios(eq4, trivial, theta, level)
    return out


def remark1_bound(spec: SieveSpec, q: int, N: int, H: int, table: ValueTable | None = None) -> float:
    """Majorant of |T_f(q, r, b, N, H)| that does not depend on r or b.

    (1/q) sum_{ell | q, ell > 1} ell * (sum_{j <= ell/2, (j, ell) = 1} 1/j) * max_j |f-hat_N(j/ell)|
    """
    if q < 2:
        raise DomainError("the majorant needs q >= 2")
    if table is None:
        table = eval_f_range(spec, N)
    sums_q = residue_sums(table, q)
    total = 0.0
    for ell in divisors(q)[1:]:
        sums = sums_q.reshape(q // ell, ell).sum(axis=0)
        peak = max(abs(combine_residues(sums, pt)) for pt in reduced_points(ell))
        harmonic = math.fsum(1.0 / j for j in range(1, ell // 2 + 1) if math.gcd(j, ell) == 1)
        total += ell * harmonic * peak
    return total / q
