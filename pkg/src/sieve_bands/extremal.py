"""The sign construction g(d) = sgn(inner(d)) on (Q, 2Q] that maximizes |T_f(q, N, H)|.

For d in (Q, 2Q] and m running over (N/d, 2N/d]:

    hits(d)  = sum_{a <= H} #{m : m d = a (mod q)}
    inner(d) = hits(d) - (H/q) #{m}

Choosing g = sgn(inner) on (Q, 2Q] makes |T_f| = sum_d |inner(d)|.  The set S
collects the d with hits(d) >= 1; E is its complement in (Q, 2Q].
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from sieve_bands.bands import BandParams, band_sum_direct
from sieve_bands.core_arith import DomainError, ValueTable
from sieve_bands.sieve_function import SieveSpec, eval_f_range


@dataclass(frozen=True)
class ExtremalInstance:
    q: int
    Q: int
    N: int
    H: int
    inner: ValueTable  # on (Q, 2Q]
    g: ValueTable  # on (Q, 2Q], entries in {-1, 0, 1}
    S_size: int
    E_size: int
    hits: np.ndarray  # raw hit counts per d
    window: np.ndarray  # #{m in (N/d, 2N/d]} per d

    @property
    def d(self) -> np.ndarray:
        return self.inner.range()

    @property
    def scaled_inner(self) -> np.ndarray:
        """q * inner(d), exact integers."""
        return self.q * self.hits - self.H * self.window

    @property
    def in_S(self) -> np.ndarray:
        return self.hits >= 1

    def sieve_spec(self) -> SieveSpec:
        """The sieve function of range 2Q whose transform is g (zero on [1, Q])."""
        values = np.zeros(2 * self.Q, dtype=np.int64)
        values[self.Q:] = self.g.values
        return SieveSpec(2 * self.Q, ValueTable(1, 2 * self.Q, values), "extremal")


def _hit_multiplicity(residues: np.ndarray, q: int, H: int) -> np.ndarray:
    """#{1 <= a <= H : a = x (mod q)} for each residue x in [0, q)."""
    rep = np.where(residues == 0, q, residues)
    return np.where(rep <= H, (H - rep) // q + 1, 0)


def build_extremal(q: int, Q: int, N: int, H: int) -> ExtremalInstance:
    if Q < 1 or not Q < q <= 2 * Q:
        raise DomainError(f"need Q < q <= 2Q, got q={q}, Q={Q}")
    if N < 1 or H < 1:
        raise DomainError(f"need N, H >= 1, got N={N}, H={H}")
    ds = np.arange(Q + 1, 2 * Q + 1, dtype=np.int64)
    hits = np.zeros(Q, dtype=np.int64)
    window = np.zeros(Q, dtype=np.int64)
    for i, d in enumerate(ds.tolist()):
        # integers m with N < m d <= 2N
        m_lo, m_hi = N // d + 1, (2 * N) // d
        if m_hi < m_lo:
            continue
        window[i] = m_hi - m_lo + 1
        m = np.arange(m_lo, m_hi + 1, dtype=np.int64)
        hits[i] = int(_hit_multiplicity((m * d) % q, q, H).sum())
    scaled = q * hits - H * window
    inner = ValueTable(Q + 1, 2 * Q, scaled / q)
    g = ValueTable(Q + 1, 2 * Q, np.sign(scaled).astype(np.int64))
    S_size = int(np.count_nonzero(hits))
    return ExtremalInstance(q, Q, N, H, inner, g, S_size, Q - S_size, hits, window)


def extremal_identity_check(inst: ExtremalInstance) -> tuple[float, float]:
    """(|T_f(q, N, H)| by band counting, sum_d |inner(d)|)."""
    res = band_sum_direct(inst.sieve_spec(), BandParams(inst.q, 1, 0, inst.N, inst.H))
    rhs = math.fsum(np.abs(inst.inner.values).tolist())
    return abs(res.T), rhs


@dataclass(frozen=True)
class LowerBound:
    ratio: float
    S_fraction: float
    S_size: int
    divisor_majorant: int

    @property
    def majorant_ok(self) -> bool:
        return self.S_size <= self.divisor_majorant


def divisor_band_count(q: int, N: int, H: int) -> int:
    """sum_{a <= H} sum_{n in (N, 2N], n = a (mod q)} d(n), exactly."""
    # d(n) on the window via sieving every d <= 2N
    spec = SieveSpec(2 * N, ValueTable(1, 2 * N, np.ones(2 * N, dtype=np.int64)), "d")
    table = eval_f_range(spec, N)
    res = band_sum_direct(spec, BandParams(q, 1, 0, N, H), table)
    return int(res.band_total)


def lower_bound_ratio(inst: ExtremalInstance) -> LowerBound:
    lhs, _ = extremal_identity_check(inst)
    ratio = lhs * inst.q / (inst.N * inst.H)
    majorant = divisor_band_count(inst.q, inst.N, inst.H)
    return LowerBound(ratio, inst.S_size / inst.Q, inst.S_size, majorant)


def dump_csv(inst: ExtremalInstance, fh) -> None:
    """Write the per-d table with columns d, inner, g, in_S."""
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(["d", "inner", "g", "in_S"])
    for d, inner, g, s in zip(inst.d.tolist(), inst.inner.values.tolist(), inst.g.values.tolist(), inst.in_S.tolist()):
        writer.writerow([d, f"{inner:.12g}", g, int(s)])
