from __future__ import annotations

import math
import warnings

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qpecost.acpa import (
    AcpaConfig,
    GateMode,
    VacuousBoundWarning,
    acpa_trials,
    acpa_trials_closed_form,
    estimate_bit,
    rotation_count,
    run_acpa,
)
from qpecost.measurement import ExactSampler, NoiseMode, NoiseModel, RngStream
from qpecost.phase import PhaseFraction


def test_trials_example_n100_k3():
    closed = 2 * math.log(400) / (1 - math.pi**2 / 32) ** 2
    assert acpa_trials_closed_form(100, 3) == pytest.approx(closed, rel=1e-14)
    assert closed == pytest.approx(25.05, abs=0.01)
    assert acpa_trials(100, 3) == 26


def test_trials_large_k_limit():
    assert acpa_trials(100, 30) == math.ceil(2 * math.log(400)) == 12


@given(st.integers(1, 10**6), st.integers(3, 20))
def test_trials_decrease_with_k(n, k):
    assert acpa_trials_closed_form(n, k + 1) < acpa_trials_closed_form(n, k)


@given(st.integers(1, 10**6), st.integers(3, 20))
def test_imperfect_is_perfect_shifted(n, k):
    assert acpa_trials_closed_form(n, k + 1, GateMode.IMPERFECT) == acpa_trials_closed_form(n, k, "perfect")


def test_vacuous_bound_warns():
    # k = 3 imperfect has 1 - pi**2 / 8 < 0
    with pytest.warns(VacuousBoundWarning):
        acpa_trials_closed_form(10, 3, "imperfect")
    with pytest.raises(ValueError):
        acpa_trials_closed_form(10, 1)


def test_config_rounds_trials_up_to_odd():
    cfg = AcpaConfig(100, 3)
    assert cfg.trials == 27
    assert AcpaConfig(100, 3, odd_trials=False).trials == 26
    assert AcpaConfig(4, 3, trials_override=9).trials == 9
    with pytest.raises(ValueError):
        AcpaConfig(4, 2)


def test_config_resolves_default_eta():
    cfg = AcpaConfig(5, 4, NoiseModel.worst_case())
    assert cfg.noise.eta == pytest.approx(1 / (3 * 16))
    assert cfg.mode is GateMode.IMPERFECT


def test_rotation_tally_bound():
    m = 20
    assert 3 * 10 * m == 600
    assert rotation_count(10, 3, m) <= 600
    # exact count: two fed-back bits for j <= 8, one for j = 9, none for j = 10
    assert rotation_count(10, 3, m) == m * (8 * 2 + 1)


def test_estimate_bit_threshold_oracle():
    """With correct feedback and exact probabilities every bit is recovered."""
    phi = PhaseFraction.from_binary_string("0.1011010011")
    bits = phi.to_bits()
    cfg = AcpaConfig(10, 3)
    for j in range(1, 11):
        suffix = bits[j : min(j + 2, 10)]
        vote = estimate_bit(j, suffix, phi, cfg, ExactSampler())
        assert vote.bit == bits[j - 1]


@pytest.mark.parametrize("j", [1, 5, 10])
def test_estimate_bit_zero_phase(j):
    vote = estimate_bit(j, [0] * min(2, 10 - j), PhaseFraction.zero(), AcpaConfig(10, 3), RngStream(1))
    assert vote.bit == 0 and vote.ones == 0


def test_majority_error_bound_at_worst_angle():
    """Chernoff: m = 26 shots at p_correct = cos^2(pi/8) err with prob <= exp(-2 m 0.3536**2)."""
    p = math.cos(math.pi / 8) ** 2
    bound = math.exp(-2 * 26 * (p - 0.5) ** 2)
    assert bound == pytest.approx(0.0015, abs=1e-4)
    from scipy.stats import binom

    assert binom.cdf(13, 26, p) <= bound


def test_exact_oracle_recovers_every_10_bit_phase():
    cfg = AcpaConfig(10, 3)
    sampler = ExactSampler()
    for num in range(1 << 10):
        phi = PhaseFraction(num, 10)
        assert run_acpa(phi, cfg, sampler=sampler).phase == phi


def test_tallies_match_closed_forms():
    cfg = AcpaConfig(6, 4, trials_override=11)
    report = run_acpa(PhaseFraction(37, 6), cfg, RngStream(0))
    assert report.measurements == 6 * 11
    assert report.u_invocations == 11 * 63
    assert report.rotations == rotation_count(6, 4, 11) <= 4 * 6 * 11


def test_stochastic_mode_runs_and_is_seeded():
    cfg = AcpaConfig(6, 4, NoiseModel(NoiseMode.STOCHASTIC, None))
    a = run_acpa(PhaseFraction(45, 6), cfg, RngStream(9))
    b = run_acpa(PhaseFraction(45, 6), cfg, RngStream(9))
    assert a.bits == b.bits
    with pytest.raises(ValueError):
        run_acpa(PhaseFraction(45, 6), cfg, sampler=ExactSampler())


def test_worst_case_noise_exact_oracle_still_correct():
    """eta = 1/((k-1) 2**k) keeps the shifted residual on the right side of 1/4."""
    cfg = AcpaConfig(8, 4, NoiseModel.worst_case())
    for num in range(256):
        phi = PhaseFraction(num, 8)
        assert run_acpa(phi, cfg, sampler=ExactSampler()).phase == phi


def test_monte_carlo_imperfect_k3_degrades_but_runs():
    cfg = AcpaConfig(8, 3, NoiseModel.worst_case())
    gen = np.random.default_rng(0)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", VacuousBoundWarning)
        wins = sum(
            run_acpa(PhaseFraction(int(p), 8), cfg, RngStream(1, r)).succeeded(PhaseFraction(int(p), 8))
            for r, p in enumerate(gen.integers(0, 256, 100))
        )
    assert wins > 50
