"""Simulation and resource estimation for constant-precision quantum phase estimation.

Three estimators are provided (Kitaev's Hadamard-test scheme, the arbitrary
constant-precision approach and two-round faster phase estimation) together
with a closed-form cost model and derivations of their repetition constants.
"""

from .acpa import AcpaConfig, GateMode, acpa_trials, acpa_trials_closed_form, estimate_bit, run_acpa
from .calibration import (
    CalibrationReport,
    calibrate,
    derive_amplitude_budget,
    derive_kitaev_coefficients,
    fpe_delta,
    repetition_constant,
)
from .cost import (
    CostBreakdown,
    Method,
    cost_breakdown,
    elementary_gates,
    measurements,
    ratio_surface,
    synthesis_overhead,
)
from .fpe import FpeConfig, SigmaRecord, estimate_sigma, generate_multipliers, infer_phase, run_fpe
from .kitaev import KitaevConfig, estimate_multiple, infer_bits, kitaev_trials, run_kitaev
from .measurement import (
    BernoulliSampler,
    ExactSampler,
    HadamardTestSpec,
    KGate,
    NoiseMode,
    NoiseModel,
    RngStream,
    acpa_step_probability,
    hadamard_probabilities,
    sample,
    u_invocations_per_test,
)
from .phase import BitString, PhaseFraction, mod1_distance, multiply_phase, nearest_eighth
from .report import EstimateReport

__all__ = [
    "AcpaConfig",
    "BernoulliSampler",
    "BitString",
    "CalibrationReport",
    "CostBreakdown",
    "EstimateReport",
    "ExactSampler",
    "FpeConfig",
    "GateMode",
    "HadamardTestSpec",
    "KGate",
    "KitaevConfig",
    "Method",
    "NoiseMode",
    "NoiseModel",
    "PhaseFraction",
    "RngStream",
    "SigmaRecord",
    "acpa_step_probability",
    "acpa_trials",
    "acpa_trials_closed_form",
    "calibrate",
    "cost_breakdown",
    "derive_amplitude_budget",
    "derive_kitaev_coefficients",
    "elementary_gates",
    "estimate_bit",
    "estimate_multiple",
    "estimate_sigma",
    "fpe_delta",
    "generate_multipliers",
    "hadamard_probabilities",
    "infer_bits",
    "infer_phase",
    "kitaev_trials",
    "measurements",
    "mod1_distance",
    "multiply_phase",
    "nearest_eighth",
    "ratio_surface",
    "repetition_constant",
    "run_acpa",
    "run_fpe",
    "run_kitaev",
    "sample",
    "synthesis_overhead",
    "u_invocations_per_test",
]
