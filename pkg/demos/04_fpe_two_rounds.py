"""
Faster phase estimation in two rounds
=====================================

Round one takes a handful of cheap estimates of every ``frac(2**(j-1) phi)``.
Round two estimates ``frac(M phi)`` for random multipliers ``M`` made of ``S``
powers of two, each to 1/32 with high probability.  A grid search then picks
the phase that agrees best with all of them.
"""

import numpy as np

from qpecost.fpe import FpeConfig, generate_multipliers, run_fpe
from qpecost.measurement import ExactSampler, RngStream
from qpecost.phase import PhaseFraction

cfg = FpeConfig(10)
print(f"n={cfg.n} S={cfg.S} s2={cfg.s2:.3f} C={cfg.C} round-one reps={cfg.round1_reps}")
print("multipliers:", [r.multiplier for r in generate_multipliers(cfg, RngStream(0))])

# %% one seeded run
phi = PhaseFraction.from_binary_string("0.1100101101")
report = run_fpe(phi, cfg, RngStream(7))
print("estimate", report.phase, "truth", phi, "success", report.succeeded(phi), report.flags)
print("measurements", report.measurements, "model", round(report.model["measurements"], 1))
print(
    "controlled-U", report.u_invocations,
    "expected", round(report.model["expected_u_invocations"]),
    "+/-", round(report.model["u_invocations_sd"]),
)

# %% the noise-free oracle is exact
assert run_fpe(phi, cfg, RngStream(7), sampler=ExactSampler()).phase == phi

# %% success rate
gen = np.random.default_rng(1)
wins = 0
for r, num in enumerate(gen.integers(0, 1 << 10, 200)):
    truth = PhaseFraction(int(num), 10)
    wins += run_fpe(truth, cfg, RngStream(2, r)).succeeded(truth)
print(f"success rate over 200 random phases: {wins / 200:.3f}")
