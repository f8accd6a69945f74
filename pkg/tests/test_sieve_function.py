import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import f_value
from sieve_bands.core_arith import ValueTable, delta_table
from sieve_bands.divisor_models import d_k_table
from sieve_bands.sieve_function import (
    SieveSpec,
    SpecParseError,
    builder_const1,
    builder_tau_Q,
    dumps_spec,
    eratosthenes_transform,
    eval_f,
    eval_f_range,
    f_table_upto,
    loads_spec,
)

g_lists = st.lists(st.integers(-3, 3), min_size=1, max_size=256)


def test_eval_f_examples():
    assert eval_f(builder_tau_Q(2), 6) == 2
    assert eval_f(builder_const1(), 12345) == 1
    # divisors of 7 are {1, 7}; only 1 is <= 4
    assert f_value([1, 1, 1, 1], 7) == 1
    assert eval_f(builder_tau_Q(4), 7) == 1


def test_tau_Q_builder():
    assert builder_tau_Q(1).label == "tau_Q"
    assert all(eval_f(builder_tau_Q(1), n) == 1 for n in range(1, 50))
    assert f_value([1, 1, 1, 1], 12) == 4
    assert eval_f(builder_tau_Q(4), 12) == 4


def test_eval_f_range_examples():
    assert eval_f_range(builder_tau_Q(2), 4).values.tolist() == [1, 2, 1, 2]
    t = eval_f_range(builder_const1(), 10)
    assert (t.lo, t.hi) == (11, 20)
    assert t.values.tolist() == [1] * 10


@settings(max_examples=100)
@given(g_lists, st.integers(1, 10_000))
def test_window_matches_pointwise(g, N):
    spec = SieveSpec.from_g(np.array(g, dtype=np.int64))
    table = eval_f_range(spec, N)
    for n in list(range(N + 1, min(2 * N, N + 30) + 1)) + [2 * N]:
        assert table.at(n) == eval_f(spec, n) == f_value(g, n)


def test_eratosthenes_transform_examples():
    f = ValueTable(1, 8, np.array([f_value([1, 1], n) for n in range(1, 9)]))
    assert eratosthenes_transform(f).values.tolist() == [1, 1, 0, 0, 0, 0, 0, 0]
    ones = ValueTable(1, 9, np.ones(9, dtype=np.int64))
    assert eratosthenes_transform(ones) == delta_table(9)
    assert eratosthenes_transform(d_k_table(2, 8)).values.tolist() == [1] * 8


@settings(max_examples=60)
@given(g_lists, st.integers(0, 300))
def test_roundtrip_recovers_g(g, extra):
    spec = SieveSpec.from_g(np.array(g, dtype=np.int64))
    X = spec.Q + extra
    back = eratosthenes_transform(f_table_upto(spec, X))
    assert back.integer
    assert back.values.tolist() == g + [0] * extra


@given(g_lists, g_lists, st.integers(1, 3000))
def test_linearity(g1, g2, n):
    size = max(len(g1), len(g2))
    a = np.zeros(size, dtype=np.int64)
    b = np.zeros(size, dtype=np.int64)
    a[: len(g1)] = g1
    b[: len(g2)] = g2
    assert eval_f(SieveSpec.from_g(a + b), n) == eval_f(SieveSpec.from_g(a), n) + eval_f(SieveSpec.from_g(b), n)


def test_spec_records_sup_norm_and_eps_norm():
    spec = SieveSpec.from_g(np.array([1, -5, 2]))
    assert spec.sup_norm == 5
    assert spec.eps_norm(0.1) == pytest.approx(5 / 2**0.1)


def test_spec_text_roundtrip():
    text = "# comment\nQ 5\n1 2\n4 -1\n\n"
    spec = loads_spec(text)
    assert spec.Q == 5 and spec.integer
    assert spec.g.values.tolist() == [2, 0, 0, -1, 0]
    assert loads_spec(dumps_spec(spec)).g == spec.g
    fl = loads_spec("Q 2\n2 0.5\n")
    assert not fl.integer and fl.g.values.tolist() == [0.0, 0.5]


@pytest.mark.parametrize(
    "text,line",
    [
        ("Q 3\n1 1\nx 2\n", 3),
        ("Q 3\n4 1\n", 2),
        ("Q 3\n1 1\n1 2\n", 3),
        ("P 3\n", 1),
        ("Q 3\n2 abc\n", 2),
        ("Q 3\n2\n", 2),
    ],
)
def test_spec_parse_errors_name_the_line(text, line):
    with pytest.raises(SpecParseError) as info:
        loads_spec(text, source="g.txt")
    assert info.value.lineno == line
    assert f"g.txt:{line}:" in str(info.value)
