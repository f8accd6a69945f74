"""Self-check suites run by ``sieve-bands verify``.

Each check draws its random instances from a generator seeded with the
suite seed, and raises CheckFailure carrying the offending parameters.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from sieve_bands.bands import (
    BandParams,
    band_sum_decomposition,
    band_sum_direct,
    length_inertia_split,
    remark1_bound,
)
from sieve_bands.core_arith import (
    ValueTable,
    constant_table,
    dirichlet_convolve,
    divisors,
    mobius_table,
    mod_inverse,
)
from sieve_bands.divisor_models import tau_QR_mu_table, tau_QR_table
from sieve_bands.extremal import build_extremal, extremal_identity_check
from sieve_bands.sieve_function import (
    SieveSpec,
    builder_random,
    builder_tau_Q,
    eratosthenes_transform,
    eval_f,
    eval_f_range,
    f_table_upto,
)
from sieve_bands.spectra import (
    RationalPoint,
    exp_sum_rational,
    exp_sum_real,
    ramanujan_paths,
)


class CheckFailure(AssertionError):
    def __init__(self, message: str, **params):
        self.params = params
        detail = ", ".join(f"{k}={v!r}" for k, v in params.items())
        super().__init__(f"{message} [{detail}]" if detail else message)


def _random_spec(rng: np.random.Generator, Q_max: int) -> SieveSpec:
    Q = int(rng.integers(1, Q_max, endpoint=True))
    return builder_random(Q, seed=int(rng.integers(2**63)))


def _random_band(rng: np.random.Generator, N_max=20_000, q_max=500, Q_max=256):
    spec = _random_spec(rng, Q_max)
    N = int(rng.integers(1, N_max, endpoint=True))
    q = int(rng.integers(2, q_max, endpoint=True))
    H = int(rng.integers(1, q, endpoint=True))
    while True:
        r = int(rng.integers(0, q))
        if math.gcd(r, q) == 1:
            break
    b = int(rng.integers(0, q))
    return spec, BandParams(q, r, b, N, H)


# --- identities --------------------------------------------------------------


def check_mobius_sum(rng, X=10_000):
    mu = mobius_table(X)
    for n in range(1, X + 1):
        s = sum(mu.at(d) for d in divisors(n))
        if s != (1 if n == 1 else 0):
            raise CheckFailure("sum of mu over divisors is not [n=1]", n=n, sum=s)


def check_convolution_algebra(rng, trials=20, X=512):
    for _ in range(trials):
        tabs = [ValueTable(1, X, rng.integers(-3, 3, endpoint=True, size=X)) for _ in range(3)]
        a, b, c = tabs
        if dirichlet_convolve(a, b, X) != dirichlet_convolve(b, a, X):
            raise CheckFailure("convolution is not commutative", X=X)
        left = dirichlet_convolve(dirichlet_convolve(a, b, X), c, X)
        right = dirichlet_convolve(a, dirichlet_convolve(b, c, X), X)
        if left != right:
            raise CheckFailure("convolution is not associative", X=X)


def check_mod_inverse(rng, ell_max=200):
    for ell in range(2, ell_max + 1):
        for r in range(1, ell + 1):
            if math.gcd(r, ell) == 1 and (mod_inverse(r, ell) * r) % ell != 1:
                raise CheckFailure("bad inverse", r=r, ell=ell)


def check_transform_roundtrip(rng, trials=20):
    for _ in range(trials):
        spec = _random_spec(rng, 256)
        X = int(rng.integers(spec.Q, 4 * spec.Q, endpoint=True))
        g = eratosthenes_transform(f_table_upto(spec, X))
        if not np.array_equal(g.values, spec.g.padded(X)):
            raise CheckFailure("f * mu does not recover g", Q=spec.Q, X=X)


def check_window_vs_pointwise(rng, trials=30):
    for _ in range(trials):
        spec = _random_spec(rng, 64)
        N = int(rng.integers(1, 2_000, endpoint=True))
        table = eval_f_range(spec, N)
        for n in rng.integers(N + 1, 2 * N, endpoint=True, size=20).tolist():
            if table.at(n) != eval_f(spec, n):
                raise CheckFailure("windowed sieve disagrees with pointwise f", Q=spec.Q, N=N, n=n)


def check_tau_QR_mu_roundtrip(rng, trials=20, X=10_000):
    ones = constant_table(X)
    for _ in range(trials):
        Q, R = (int(v) for v in rng.integers(1, 200, endpoint=True, size=2))
        back = dirichlet_convolve(tau_QR_mu_table(Q, R, X), ones, X)
        if back != tau_QR_table(Q, R, X):
            raise CheckFailure("tau_QR * mu * 1 != tau_QR", Q=Q, R=R, X=X)


# --- spectra ----------------------------------------------------------------


def check_ramanujan_paths(rng, trials=20, Q_max=512):
    for _ in range(trials):
        spec = _random_spec(rng, Q_max)
        g = spec.g.values.tolist()
        for ell in range(1, spec.Q + 1):
            first, second = ramanujan_paths(spec, ell)
            scale = sum(abs(g[d - 1]) / d for d in range(ell, spec.Q + 1, ell))
            if abs(first - second) > 1e-12 * max(abs(first), abs(second), scale):
                raise CheckFailure("Ramanujan coefficient paths disagree", Q=spec.Q, ell=ell)
            exact = sum(Fraction(g[d - 1], d) for d in range(ell, spec.Q + 1, ell))
            if abs(second - float(exact)) > 1e-12 * max(abs(float(exact)), scale):
                raise CheckFailure("Ramanujan coefficient is off the exact value", Q=spec.Q, ell=ell)
            bound = spec.sup_norm * (1 + math.log(max(spec.Q / ell, 1))) / ell
            if abs(second) > bound * (1 + 1e-12):
                raise CheckFailure("Ramanujan coefficient exceeds harmonic bound", Q=spec.Q, ell=ell)


def check_expsum_oracle(rng, trials=200):
    for _ in range(trials):
        spec = _random_spec(rng, 128)
        N = int(rng.integers(1, 10_000, endpoint=True))
        ell = int(rng.integers(1, 100, endpoint=True))
        pt = RationalPoint.reduced(int(rng.integers(0, ell)), ell)
        table = eval_f_range(spec, N)
        fast = exp_sum_rational(spec, N, pt, table)
        slow = exp_sum_real(spec, N, pt.j / pt.ell, table)
        scale = float(np.abs(table.values).sum())
        if abs(fast - slow) > 1e-9 * scale + 1e-12:
            raise CheckFailure("residue aggregation disagrees with direct summation", Q=spec.Q, N=N, point=str(pt))


# --- bands -------------------------------------------------------------------


def check_direct_vs_decomposition(rng, trials=100):
    for _ in range(trials):
        spec, p = _random_band(rng)
        table = eval_f_range(spec, p.N)
        direct = band_sum_direct(spec, p, table)
        decomp = band_sum_decomposition(spec, p, table)
        tol = 1e-8 * (1 + float(np.abs(table.values).sum()))
        if abs(direct.T - decomp.T) > tol:
            raise CheckFailure("direct and character expansion disagree", Q=spec.Q, params=p)


def check_length_inertia(rng, trials=50):
    for _ in range(trials):
        spec = _random_spec(rng, 256)
        N = int(rng.integers(1, 20_000, endpoint=True))
        q = int(rng.integers(1, 500, endpoint=True))
        H = int(rng.integers(1, 2 * q, endpoint=True))
        h = int(rng.integers(1, H, endpoint=True))
        left, right = length_inertia_split(spec, q, N, H, h)
        if left.scaled_T != sum(r.scaled_T for r in right):
            raise CheckFailure("length inertia split is not exact", Q=spec.Q, q=q, N=N, H=H, h=h)


def check_complete_band(rng, trials=20):
    for _ in range(trials):
        spec = _random_spec(rng, 256)
        N = int(rng.integers(1, 20_000, endpoint=True))
        q = int(rng.integers(1, 500, endpoint=True))
        res = band_sum_direct(spec, BandParams(q, 1, 0, N, q))
        if res.scaled_T != 0:
            raise CheckFailure("complete band does not cancel", Q=spec.Q, q=q, N=N)


def check_remark1_majorant(rng, q_max=60):
    N, H = 2_000, 5
    spec = builder_tau_Q(20)
    table = eval_f_range(spec, N)
    for q in range(2, q_max + 1):
        bound = remark1_bound(spec, q, N, H, table)
        for r in range(1, q):
            if math.gcd(r, q) != 1:
                continue
            for b in range(q):
                T = band_sum_direct(spec, BandParams(q, r, b, N, H), table).T
                if abs(T) > bound * (1 + 1e-12) + 1e-9:
                    raise CheckFailure("majorant below |T|", q=q, r=r, b=b, N=N, H=H)


# --- extremal ----------------------------------------------------------------


def check_extremal_example(rng):
    inst = build_extremal(5, 3, 12, 1)
    if inst.g.values.tolist() != [1, -1, -1]:
        raise CheckFailure("sign pattern", g=inst.g.values.tolist())
    res = band_sum_direct(inst.sieve_spec(), BandParams(5, 1, 0, 12, 1))
    if Fraction(abs(res.scaled_T), 5) != Fraction(6, 5):
        raise CheckFailure("|T| != 6/5", scaled_T=res.scaled_T)


def check_extremal_identity(rng, trials=30):
    for _ in range(trials):
        Q = int(rng.integers(2, 400, endpoint=True))
        q = int(rng.integers(Q + 1, 2 * Q, endpoint=True))
        N = int(rng.integers(1, 100_000, endpoint=True))
        H = int(rng.integers(1, q, endpoint=True))
        inst = build_extremal(q, Q, N, H)
        lhs, rhs = extremal_identity_check(inst)
        if abs(lhs - rhs) > 1e-8 * (1 + rhs):
            raise CheckFailure("|T| != sum |inner|", q=q, Q=Q, N=N, H=H)
        empty = ~inst.in_S
        if not np.array_equal(inst.scaled_inner[empty], -H * inst.window[empty]):
            raise CheckFailure("inner(d) on E is not -(H/q) #m", q=q, Q=Q, N=N, H=H)


SUITES = {
    "identities": [
        check_mobius_sum,
        check_convolution_algebra,
        check_mod_inverse,
        check_transform_roundtrip,
        check_window_vs_pointwise,
        check_tau_QR_mu_roundtrip,
    ],
    "spectra": [check_ramanujan_paths, check_expsum_oracle],
    "bands": [check_direct_vs_decomposition, check_length_inertia, check_complete_band, check_remark1_majorant],
    "extremal": [check_extremal_example, check_extremal_identity],
}
SUITES["all"] = [c for name in ("identities", "spectra", "bands", "extremal") for c in SUITES[name]]


@dataclass
class CheckOutcome:
    name: str
    passed: bool
    elapsed_ms: float
    message: str = ""


def run_suite(name: str, seed: int = 0, report=print) -> list[CheckOutcome]:
    if name not in SUITES:
        raise KeyError(name)
    report(f"suite {name} seed {seed}")
    outcomes = []
    for check in SUITES[name]:
        rng = np.random.default_rng(seed)
        start = time.perf_counter()
        try:
            check(rng)
        except CheckFailure as exc:
            elapsed = (time.perf_counter() - start) * 1000
            outcomes.append(CheckOutcome(check.__name__, False, elapsed, str(exc)))
            report(f"FAIL {check.__name__} ({elapsed:.1f} ms): {exc} seed={seed}")
            continue
        elapsed = (time.perf_counter() - start) * 1000
        outcomes.append(CheckOutcome(check.__name__, True, elapsed))
        report(f"PASS {check.__name__} ({elapsed:.1f} ms)")
    return outcomes
