"""Ramanujan coefficients and exponential sums of sieve functions at rationals."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from sieve_bands.core_arith import DomainError, ValueTable
from sieve_bands.sieve_function import SieveSpec, eval_f_range

DEFAULT_EPS_GRID = (0.05, 0.1, 0.2)
PATH_RTOL = 1e-12


@dataclass(frozen=True)
class RationalPoint:
    """The reduced fraction j/ell in [0, 1); 0 is written 0/1."""

    j: int
    ell: int

    def __post_init__(self):
        if self.ell < 1:
            raise DomainError(f"denominator must be >= 1, got {self.ell}")
        if not 0 <= self.j < self.ell:
            raise DomainError(f"numerator must lie in [0, {self.ell}), got {self.j}")
        if self.j == 0 and self.ell != 1:
            raise DomainError("the point 0 is written 0/1")
        if self.j > 0 and math.gcd(self.j, self.ell) != 1:
            raise DomainError(f"{self.j}/{self.ell} is not reduced")

    @classmethod
    def reduced(cls, j: int, ell: int) -> RationalPoint:
        """The point j/ell mod 1 in lowest terms (any integer j)."""
        if ell < 1:
            raise DomainError(f"denominator must be >= 1, got {ell}")
        j %= ell
        if j == 0:
            return cls(0, 1)
        g = math.gcd(j, ell)
        return cls(j // g, ell // g)

    def __float__(self):
        return self.j / self.ell

    def __str__(self):
        return f"{self.j}/{self.ell}"


def reduced_points(ell: int):
    """All j/ell with j in the reduced residue system mod ell."""
    for j in range(1, ell):
        if math.gcd(j, ell) == 1:
            yield RationalPoint(j, ell)


@dataclass(frozen=True)
class ResidualReport:
    point: RationalPoint
    fhat: complex
    R_ell: float
    residual: float
    normalized: dict[float, float]


class PathMismatch(AssertionError):
    """The two evaluation paths of an identity disagreed; indicates an arithmetic bug."""


def ramanujan_paths(spec: SieveSpec, ell: int) -> tuple[float, float]:
    """R_ell by summing g(d)/d over multiples d of ell, and as (1/ell) sum g(ell m)/m."""
    if ell < 1:
        raise DomainError(f"ell must be >= 1, got {ell}")
    g = spec.g.values
    Q = spec.Q
    if ell > Q:
        return 0.0, 0.0
    d = np.arange(1, Q + 1)
    mask = d % ell == 0
    by_multiples = math.fsum((g[mask] / d[mask]).tolist())
    m = np.arange(1, Q // ell + 1)
    by_quotients = math.fsum((g[ell * m - 1] / m).tolist()) / ell
    return by_multiples, by_quotients


def ramanujan_coefficient(spec: SieveSpec, ell: int) -> float:
    """The ell-th Ramanujan coefficient, cross-checked between both summation paths."""
    first, second = ramanujan_paths(spec, ell)
    # scale by the absolute series so exact cancellation to 0 is still comparable
    m = np.arange(1, spec.Q // ell + 1)
    scale = float(np.sum(np.abs(spec.g.values[ell * m - 1]) / m)) / ell if len(m) else 0.0
    if abs(first - second) > PATH_RTOL * max(abs(first), abs(second), scale):
        raise PathMismatch(f"R_{ell}: paths disagree ({first!r} vs {second!r})")
    return second


def residue_sums(table: ValueTable, ell: int) -> np.ndarray:
    """S[c] = sum of table values at n with n = c (mod ell), exact for integer tables."""
    if ell < 1:
        raise DomainError(f"modulus must be >= 1, got {ell}")
    classes = table.range() % ell
    if table.integer:
        out = np.zeros(ell, dtype=np.int64)
        np.add.at(out, classes, table.values)
        return out
    return np.bincount(classes, weights=table.values, minlength=ell)


def combine_residues(sums: np.ndarray, pt: RationalPoint) -> complex:
    """sum_c S[c] e(c j / ell), the single complex rounding stage."""
    ell, j = pt.ell, pt.j
    c = np.arange(ell, dtype=np.int64)
    # reduce c*j mod ell before forming the angle
    angle = 2.0 * math.pi * ((c * j) % ell) / ell
    s = sums.astype(np.float64)
    return complex(float(np.dot(s, np.cos(angle))), float(np.dot(s, np.sin(angle))))


def exp_sum_table(table: ValueTable, pt: RationalPoint) -> complex:
    return combine_residues(residue_sums(table, pt.ell), pt)


def exp_sum_rational(spec: SieveSpec, N: int, pt: RationalPoint, table: ValueTable | None = None) -> complex:
    """f-hat_N(j/ell) = sum over n in (N, 2N] of f(n) e(n j/ell), by residue-class aggregation.

    ``table`` may carry a precomputed ``eval_f_range(spec, N)``.
    """
    if table is None:
        table = eval_f_range(spec, N)
    return exp_sum_table(table, pt)


def exp_sum_real(spec: SieveSpec, N: int, alpha: float, table: ValueTable | None = None) -> complex:
    """Direct summation of f(n) e(n alpha) over (N, 2N]."""
    if table is None:
        table = eval_f_range(spec, N)
    n = table.range().astype(np.float64)
    phase = n * alpha
    phase -= np.floor(phase)
    angle = 2.0 * math.pi * phase
    v = table.values.astype(np.float64)
    return complex(float(np.sum(v * np.cos(angle))), float(np.sum(v * np.sin(angle))))


def residual_normalizer(ell: int, Q: int, eps: float) -> float:
    return (ell * Q) ** eps * (Q + ell)


def lemma31_residual(
    spec: SieveSpec,
    N: int,
    pt: RationalPoint,
    eps_grid=DEFAULT_EPS_GRID,
    table: ValueTable | None = None,
) -> ResidualReport:
    """|f-hat_N(j/ell) - R_ell N| and its size relative to (ell Q)^eps (Q + ell).

    The point 0/1 is accepted and reported like any other (no bound is
    claimed for it).
    """
    fhat = exp_sum_rational(spec, N, pt, table)
    R = ramanujan_coefficient(spec, pt.ell)
    residual = abs(fhat - R * N)
    normalized = {eps: residual / residual_normalizer(pt.ell, spec.Q, eps) for eps in eps_grid}
    return ResidualReport(pt, fhat, R, residual, normalized)
