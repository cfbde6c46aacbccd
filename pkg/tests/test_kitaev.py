from __future__ import annotations

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qpecost.calibration import derive_amplitude_budget, kitaev_trials_closed_form
from qpecost.kitaev import KitaevConfig, estimate_multiple, infer_bits, kitaev_trials, run_kitaev
from qpecost.measurement import ExactSampler, RngStream
from qpecost.phase import PhaseFraction, mod1_distance, multiply_phase, nearest_eighth


def exact_betas(phi: PhaseFraction, n: int) -> list[PhaseFraction]:
    return [nearest_eighth(multiply_phase(phi, 1 << (k - 1))) for k in range(1, n + 1)]


def test_infer_bits_hand_example():
    phi = PhaseFraction.from_binary_string("0.011")
    betas = exact_betas(phi, 3)
    assert betas == [PhaseFraction(3, 3), PhaseFraction(6, 3), PhaseFraction(4, 3)]
    bits, ties = infer_bits(betas, 3)
    assert str(bits) == "0.01100"
    assert bits.to_phase() == phi
    assert ties == []


@pytest.mark.parametrize("n", [1, 4, 9])
def test_infer_bits_zero(n):
    bits, _ = infer_bits([PhaseFraction.zero()] * n, n)
    assert bits.bits == (0,) * (n + 2)


def test_infer_bits_length_checked():
    with pytest.raises(ValueError):
        infer_bits([PhaseFraction.zero()] * 2, 3)


@pytest.mark.parametrize("n", range(1, 7))
def test_infer_bits_exhaustive_small_n(n):
    for num in range(1 << (n + 2)):
        phi = PhaseFraction(num, n + 2)
        bits, _ = infer_bits(exact_betas(phi, n), n)
        assert mod1_distance(bits.to_phase(), phi) < 2.0 ** -(n + 2)


@settings(max_examples=300)
@given(st.data(), st.integers(1, 10))
def test_infer_bits_tolerates_sixteenth_errors(data, n):
    """Estimates within 1/16 of each multiple still pin the phase to 2**-(n+2)."""
    num = data.draw(st.integers(0, (1 << 20) - 1))
    phi = PhaseFraction(num, 20)
    betas = []
    for k in range(1, n + 1):
        noise = data.draw(st.floats(-1 / 16 + 1e-9, 1 / 16 - 1e-9))
        betas.append(nearest_eighth((multiply_phase(phi, 1 << (k - 1)).value + noise) % 1.0))
    bits, _ = infer_bits(betas, n)
    assert mod1_distance(bits.to_phase(), phi) < 2.0 ** -(n + 2)


def test_trial_count_formula():
    # independent oracle: m = 2 * ln(4 / eps) / (2 (delta/2)**2) with delta from the arctan bound
    delta = derive_amplitude_budget(1 / 16)
    eps = 1 / 400
    oracle = 2 * math.log(4 / eps) / (2 * (delta / 2) ** 2)
    assert kitaev_trials_closed_form(eps) == pytest.approx(oracle, rel=1e-12)
    # rounded coefficients 76 + 55 ln 400
    assert kitaev_trials_closed_form(eps) == pytest.approx(76 + 55 * math.log(400), rel=0.01)
    assert kitaev_trials_closed_form(1.0) == pytest.approx(76, abs=1.5)


def test_kitaev_trials_is_even_ceiling():
    for n in (1, 8, 100):
        m = kitaev_trials(n)
        assert m % 2 == 0
        assert kitaev_trials_closed_form(0.25 / n) <= m < kitaev_trials_closed_form(0.25 / n) + 2


def test_config_validation():
    with pytest.raises(ValueError):
        KitaevConfig(0)
    with pytest.raises(ValueError):
        KitaevConfig(4, c=0.6)
    with pytest.raises(ValueError):
        KitaevConfig(4, trials_override=7)
    assert KitaevConfig(4, trials_override=10).trials == 10


def test_estimate_multiple_exact_oracle():
    phi = PhaseFraction.from_binary_string("0.0110")
    est = estimate_multiple(2, phi, 10, ExactSampler())
    assert est.phi_tilde == pytest.approx(0.75)
    assert est.beta == PhaseFraction(6, 3)
    with pytest.raises(ValueError):
        estimate_multiple(1, phi, 9, ExactSampler())


def test_u_invocation_tally():
    report = run_kitaev(PhaseFraction(5, 3), KitaevConfig(3, trials_override=10), sampler=ExactSampler())
    assert report.u_invocations == 70
    assert report.measurements == 30
    assert report.rotations == 0


@given(st.integers(0, 255))
def test_exact_oracle_recovers_8_bit_phases(num):
    phi = PhaseFraction(num, 8)
    report = run_kitaev(phi, KitaevConfig(8), sampler=ExactSampler())
    assert report.succeeded(phi)
    assert report.phase == phi


def test_run_is_deterministic():
    phi = PhaseFraction(173, 8)
    a = run_kitaev(phi, KitaevConfig(8), RngStream(3))
    b = run_kitaev(phi, KitaevConfig(8), RngStream(3))
    assert a.bits == b.bits and a.details == b.details


def test_run_needs_randomness():
    with pytest.raises(ValueError):
        run_kitaev(PhaseFraction(1, 3), KitaevConfig(3))
