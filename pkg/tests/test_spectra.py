import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import exp_sum, ramanujan, window
from sieve_bands.core_arith import DomainError
from sieve_bands.sieve_function import SieveSpec, builder_const1, builder_random, builder_tau_Q, builder_zero, eval_f_range
from sieve_bands.spectra import (
    RationalPoint,
    exp_sum_rational,
    exp_sum_real,
    lemma31_residual,
    ramanujan_coefficient,
    ramanujan_paths,
    reduced_points,
)


def test_rational_point_invariants():
    RationalPoint(0, 1)
    RationalPoint(2, 5)
    for j, ell in [(0, 3), (2, 4), (5, 5), (-1, 3)]:
        with pytest.raises(DomainError):
            RationalPoint(j, ell)
    assert RationalPoint.reduced(-2, 6) == RationalPoint(2, 3)
    assert RationalPoint.reduced(6, 6) == RationalPoint(0, 1)


def test_ramanujan_examples():
    spec = builder_tau_Q(4)
    assert ramanujan_coefficient(spec, 2) == pytest.approx(0.75, rel=1e-15)
    assert ramanujan_coefficient(spec, 1) == pytest.approx(25 / 12, rel=1e-15)
    assert ramanujan_coefficient(spec, 5) == 0.0


def test_ramanujan_paths_against_exact():
    for seed in range(20):
        spec = builder_random(512, seed=seed)
        g = spec.g.values.tolist()
        for ell in range(1, 513):
            first, second = ramanujan_paths(spec, ell)
            scale = sum(abs(g[d - 1]) / d for d in range(ell, 513, ell))
            exact = float(ramanujan(g, ell))
            assert abs(first - second) <= 1e-12 * max(abs(first), abs(second), scale)
            assert abs(second - exact) <= 1e-12 * max(abs(exact), scale)


@settings(max_examples=50)
@given(st.lists(st.integers(-3, 3), min_size=1, max_size=300), st.integers(1, 300))
def test_ramanujan_harmonic_bound(g, ell):
    spec = SieveSpec.from_g(np.array(g, dtype=np.int64))
    R = ramanujan_coefficient(spec, ell)
    assert abs(R) <= spec.sup_norm * (1 + math.log(max(spec.Q / ell, 1))) / ell * (1 + 1e-12)


def test_exp_sum_examples():
    spec = builder_tau_Q(2)
    z = exp_sum_rational(spec, 4, RationalPoint(1, 2))
    assert z.real == pytest.approx(2, abs=1e-12) and z.imag == pytest.approx(0, abs=1e-12)
    at0 = exp_sum_rational(spec, 4, RationalPoint(0, 1))
    assert at0 == complex(6, 0)
    assert exp_sum_rational(builder_zero(5), 100, RationalPoint(2, 7)) == 0
    assert exp_sum_real(builder_zero(5), 100, 0.3) == 0


def test_exp_sum_conjugate_symmetry_and_periodicity():
    spec = builder_random(40, seed=3)
    table = eval_f_range(spec, 777)
    for ell in (3, 10, 29):
        for pt in reduced_points(ell):
            z = exp_sum_rational(spec, 777, pt, table)
            w = exp_sum_rational(spec, 777, RationalPoint.reduced(-pt.j, ell), table)
            assert abs(z - w.conjugate()) <= 1e-9
            assert RationalPoint.reduced(pt.j + 5 * ell, ell) == pt


def test_exp_sum_real_at_zero():
    spec = builder_random(30, seed=1)
    a = exp_sum_real(spec, 500, 0.0)
    b = exp_sum_rational(spec, 500, RationalPoint(0, 1))
    assert abs(a - b) <= 1e-9 * abs(b)


def test_exp_sum_against_brute_force_small():
    g = [2, -1, 0, 3, 1]
    spec = SieveSpec.from_g(np.array(g))
    vals = window(g, 60)
    for pt in [RationalPoint(1, 3), RationalPoint(3, 7), RationalPoint(5, 12)]:
        expect = exp_sum(vals, 60, pt.j / pt.ell)
        assert abs(exp_sum_rational(spec, 60, pt) - expect) <= 1e-10


def test_oracle_equivalence_random():
    rng = np.random.default_rng(11)
    for _ in range(200):
        spec = builder_random(int(rng.integers(1, 128)), seed=int(rng.integers(1 << 31)))
        N = int(rng.integers(1, 10_000))
        ell = int(rng.integers(1, 101))
        pt = RationalPoint.reduced(int(rng.integers(0, ell)), ell)
        table = eval_f_range(spec, N)
        diff = abs(exp_sum_rational(spec, N, pt, table) - exp_sum_real(spec, N, pt.j / pt.ell, table))
        assert diff <= 1e-9 * float(np.abs(table.values).sum()) + 1e-12


def test_residual_constant_function_is_geometric():
    spec = builder_const1()
    N = 1000
    for ell in (2, 3, 7, 10):
        for pt in reduced_points(ell):
            rep = lemma31_residual(spec, N, pt)
            assert rep.R_ell == 0.0
            alpha = pt.j / ell
            closed = abs(
                np.exp(2j * np.pi * (N + 1) * alpha) * (np.exp(2j * np.pi * N * alpha) - 1) / (np.exp(2j * np.pi * alpha) - 1)
            )
            assert rep.residual == pytest.approx(closed, abs=1e-9)
            assert rep.residual <= 1 / (2 * min(alpha, 1 - alpha)) + 1e-9


def test_residual_regression_baseline():
    # frozen from direct summation of tau_16 over (4096, 8192] at 1/3
    rep = lemma31_residual(builder_tau_Q(16), 4096, RationalPoint(1, 3))
    assert rep.residual == pytest.approx(4.330141278157861, rel=1e-9)
    assert rep.R_ell == pytest.approx(float(Fraction(1, 3) + Fraction(1, 6) + Fraction(1, 9) + Fraction(1, 12) + Fraction(1, 15)))
    assert set(rep.normalized) == {0.05, 0.1, 0.2}
    assert all(v >= 0 for v in rep.normalized.values())
    assert rep.normalized[0.1] == pytest.approx(rep.residual / ((3 * 16) ** 0.1 * 19))
