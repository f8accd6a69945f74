import cmath
import math

import numpy as np
import pytest

from oracles import divisors
from sieve_bands.core_arith import DomainError, constant_table, dirichlet_convolve
from sieve_bands.divisor_models import (
    conjecture_quantity,
    d_k_table,
    dk_expsum,
    dk_expsum_constant,
    model,
    tau_Q_table,
    tau_QR_mu_band,
    tau_QR_mu_table,
    tau_QR_table,
)


def test_tau_QR_examples():
    assert tau_QR_table(2, 3, 6).at(6) == 1
    for Q, R in [(1, 1), (5, 2), (7, 9)]:
        assert tau_QR_table(Q, R, 10).at(1) == 1
    assert tau_QR_table(5, 9, 200) == tau_QR_table(9, 5, 200)


def test_tau_QR_brute_force():
    t = tau_QR_table(6, 10, 120)
    for n in range(1, 121):
        assert t.at(n) == sum(1 for d in divisors(n) if d <= 6 and n // d <= 10)


def test_d_k_examples():
    assert d_k_table(2, 6).at(6) == 4
    assert d_k_table(3, 4).at(4) == 6
    for k in (2, 3, 5):
        assert d_k_table(k, 3).at(1) == 1
    with pytest.raises(DomainError):
        d_k_table(1, 10)


def test_d_k_brute_force():
    t = d_k_table(3, 100)
    for n in range(1, 101):
        assert t.at(n) == sum(len(divisors(n // a)) for a in divisors(n))


def test_d2_hyperbola_count():
    X = 5000
    assert int(d_k_table(2, X).values.sum()) == sum(X // d for d in range(1, X + 1))


def test_model_invariants():
    X = 3000
    d2 = d_k_table(2, X).values
    assert np.all(tau_Q_table(17, X).values <= d2)
    assert np.all(tau_QR_table(17, 40, X).values <= d2)
    assert np.all(d_k_table(4, X).values >= 1)
    N = 700
    assert tau_Q_table(9, 2 * N) == tau_QR_table(9, 2 * N, 2 * N)
    m = model("tau_QR_mu", 50, Q=3, R=4)
    assert m.kind == "tau_QR_mu" and len(m.table) == 50
    with pytest.raises(DomainError):
        model("nope", 10)


def test_tau_QR_mu():
    X = 3000
    ones = constant_table(X)
    for Q, R in [(1, 1), (10, 3), (50, 80), (400, 9)]:
        assert dirichlet_convolve(tau_QR_mu_table(Q, R, X), ones, X) == tau_QR_table(Q, R, X)
        assert tau_QR_mu_table(Q, R, X).at(1) == 1
    assert tau_QR_mu_table(40, 40, 40).values.tolist() == [1] * 40


def test_conjecture_quantity():
    # Q = R = 1: only n = 1 carries weight; a window containing 1 sees it iff some a r = 1 (mod q)
    q, r, H = 7, 3, 4
    expect = sum(1 for a in range(1, H + 1) if (a * r - 1) % q == 0) - H / q
    assert conjecture_quantity(1, 1, q, r, 0, H, window=(1, 10)) == pytest.approx(expect)
    assert conjecture_quantity(1, 1, q, r, 10, H) == pytest.approx(-H / q)
    # complete band over [1, QR] sees every pair (d, t): total QR
    Q, R, q = 6, 9, 11
    value = conjecture_quantity(Q, R, q, 2, 0, q, window=(1, Q * R))
    assert value == pytest.approx(Q * R - q * Q * R / q)
    assert conjecture_quantity(5, 8, 9, 2, 100, 4) + 4 * 40 / 9 >= 0
    with pytest.raises(DomainError):
        conjecture_quantity(5, 8, 9, 3, 100, 4)


def test_tau_QR_mu_band_complete():
    res = tau_QR_mu_band(5, 7, 6, 1, 0, 300, 6)
    assert res.T == 0


def test_dk_expsum_brute_force_and_baseline():
    N, q = 4096, 101
    z = dk_expsum(2, N, q, 1)
    direct = sum(len(divisors(n)) * cmath.exp(2j * math.pi * n / q) for n in range(N + 1, 2 * N + 1))
    assert abs(z - direct) <= 1e-9 * sum(len(divisors(n)) for n in range(N + 1, 2 * N + 1))
    ratios = dk_expsum_constant(2, N, q, 1)
    # frozen from the direct sum above
    assert ratios[0.1] == pytest.approx(0.40318897205279747, rel=1e-9)
    assert all(v >= 0 for v in ratios.values())
    assert ratios[0.2] <= ratios[0.05]


def test_dk_expsum_domain():
    with pytest.raises(DomainError):
        dk_expsum_constant(2, 100, 10, 5)
    with pytest.raises(DomainError):
        dk_expsum_constant(2, 100, 1, 0)
