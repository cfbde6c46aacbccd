from __future__ import annotations

import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from qpecost.acpa import acpa_trials_closed_form
from qpecost.cost import (
    EXACT_MAX_N,
    Method,
    cost_breakdown,
    elementary_gates,
    kickback_rotation_gap,
    measurements,
    ratio_surface,
    synthesis_overhead,
    trials_factor,
)


def test_measurement_examples():
    assert measurements("kitaev", 100) == pytest.approx(100 * (76 + 55 * math.log(400)))
    assert measurements("kitaev", 100) == pytest.approx(40553, abs=1)
    assert measurements("acpa", 100, 3) == pytest.approx(2505, abs=1)


def test_fpe_trials_factor():
    n = 16
    s2 = math.log(64) / math.log(16)
    expected = math.log2(math.log2(64)) + math.log(16) * s2 * 758
    assert trials_factor(Method.FPE, n) == pytest.approx(expected)
    with pytest.raises(ValueError):
        trials_factor("fpe", 1)


def test_gate_count_examples():
    assert elementary_gates("kitaev", 3, trials=10) == (math.log2(70), 70)
    b = cost_breakdown("acpa", 3, 3, trials=10)
    assert b.u_invocations_exact == 70
    assert b.rotation_invocations_exact <= 90
    assert b.rotation_invocations_applied == 10 * (2 + 1 + 0)
    assert b.elementary_gates_exact == 70 + b.rotation_invocations_exact


def test_log_domain_example():
    log2, exact = elementary_gates("kitaev", 100)
    assert exact is None
    assert log2 == pytest.approx(100 + math.log2(math.ceil(76 + 55 * math.log(400))), abs=0.02)


@pytest.mark.parametrize("method", ["kitaev", "fpe", "acpa"])
@pytest.mark.parametrize("n", [2, 10, 33, 52, 53, 64])
def test_exact_and_log_domain_agree(method, n):
    b = cost_breakdown(method, n, 4, gamma=7)
    assert b.u_invocations_log2 == pytest.approx(math.log2(b.trials) + math.log2((1 << n) - 1), rel=1e-12)
    assert math.log2(b.elementary_gates_exact) == pytest.approx(b.elementary_gates_log2, rel=1e-12)
    assert not b.log_domain_only


def test_large_n_is_log_domain_only():
    b = cost_breakdown("acpa", 200, 5)
    assert b.log_domain_only and b.u_invocations_exact is None
    assert b.u_invocations_log2 == pytest.approx(200 + math.log2(b.trials), abs=1e-9)
    assert EXACT_MAX_N == 64


def test_three_rows_exact_at_n20():
    rows = [cost_breakdown(m, 20, 3, gamma=100) for m in Method]
    for r in rows:
        assert isinstance(r.elementary_gates_exact, int)
        assert r.elementary_gates_exact >= r.trials * 100 * ((1 << 20) - 1)
    acpa = rows[2]
    assert acpa.rotation_invocations_exact == 3 * 20 * acpa.trials


def test_literal_gamma_power():
    b = cost_breakdown("kitaev", 10, gamma=2, literal_gamma_power=True)
    assert b.log_domain_only
    assert b.elementary_gates_log2 == pytest.approx(math.log2(b.trials) + 1023)
    assert cost_breakdown("kitaev", 10, gamma=1, literal_gamma_power=True).elementary_gates_log2 == pytest.approx(
        math.log2(cost_breakdown("kitaev", 10).trials)
    )


def test_synthesis_overhead():
    assert synthesis_overhead(3, 1) == pytest.approx(3 + math.log2(3))
    assert synthesis_overhead(3, 1) == pytest.approx(4.585, abs=1e-3)
    assert synthesis_overhead(4, 3.94) == pytest.approx(6**3.94)
    assert synthesis_overhead(4, 3.94) == pytest.approx(1169, rel=0.01)
    for bad in (0, 0.5, 4):
        with pytest.raises(ValueError):
            synthesis_overhead(4, bad)
    with pytest.raises(ValueError):
        synthesis_overhead(2, 1)


def test_synthesis_feeds_breakdown():
    b = cost_breakdown("acpa", 10, 4, c=2.0)
    assert b.synthesis_gates == pytest.approx(b.rotation_invocations_exact * synthesis_overhead(4, 2.0))
    assert cost_breakdown("kitaev", 10, c=2.0).synthesis_gates is None


def test_ratio_example_k10_n100():
    (cell,) = ratio_surface("kitaev", "acpa", [100], [10])
    oracle = (76 + 55 * math.log(400)) / (2 * math.log(400) / (1 - math.pi**2 / 2**19) ** 2)
    assert cell.ratio == pytest.approx(oracle, rel=0.01)
    assert cell.ratio == pytest.approx(33.8, abs=0.1)


@given(st.integers(1, 10**5), st.integers(3, 15))
def test_ratio_increases_with_k(n, k):
    lo, hi = ratio_surface("kitaev", "acpa", [n], [k, k + 1])
    assert hi.ratio > lo.ratio


@given(st.integers(1, 10**5), st.integers(4, 15))
def test_imperfect_surface_is_shifted_perfect(n, k):
    (imp,) = ratio_surface("kitaev", "acpa", [n], [k], "imperfect")
    (per,) = ratio_surface("kitaev", "acpa", [n], [k - 1], "perfect")
    assert imp.ratio == per.ratio


def test_fpe_cells_skip_n1():
    cells = ratio_surface("fpe", "acpa", range(1, 5), [3])
    assert [c.n for c in cells] == [2, 3, 4]
    with pytest.raises(ValueError):
        ratio_surface("kitaev", "acpa", [], [3])


@pytest.mark.parametrize("k", range(3, 11))
def test_rotation_term_negligible(k):
    assert kickback_rotation_gap(40, k) > 20
    assert kickback_rotation_gap(80, k) > kickback_rotation_gap(40, k)


def test_imperfect_trials_use_shifted_exponent():
    assert trials_factor("acpa", 50, 6, "imperfect") == acpa_trials_closed_form(50, 5)


def test_bad_inputs():
    with pytest.raises(ValueError):
        cost_breakdown("kitaev", 5, gamma=0)
    with pytest.raises(ValueError):
        trials_factor("kitaev", 0)
    with pytest.raises(ValueError):
        Method.coerce("qft")
