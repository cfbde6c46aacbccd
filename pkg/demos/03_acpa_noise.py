"""
Constant-precision rotations and noisy gates
============================================

ACPA estimates one bit at a time, feeding back at most ``k - 1`` earlier bits
through phase-shift gates.  Larger ``k`` means fewer shots per bit; imperfect
rotations cost one degree of ``k``.
"""

import math
import warnings

import numpy as np

from qpecost.acpa import AcpaConfig, VacuousBoundWarning, acpa_trials, run_acpa
from qpecost.measurement import NoiseMode, NoiseModel, RngStream, acpa_step_probability
from qpecost.phase import PhaseFraction

warnings.simplefilter("ignore", VacuousBoundWarning)

# %% shots per bit at n = 100
print(" k  perfect  imperfect")
for k in range(3, 11):
    print(f"{k:2d}  {acpa_trials(100, k):7d}  {acpa_trials(100, k, 'imperfect'):9d}")

# %% the single-bit distribution with correct feedback
phi = PhaseFraction.from_binary_string("0.101101")
_, p1 = acpa_step_probability(1, (0, 1), 3, phi)
print(f"\nx_1 = 1, residual 37/64: p(outcome 1) = {p1:.4f}  (cos^2(5 pi/64) = {math.cos(5 * math.pi / 64) ** 2:.4f})")

worst = NoiseModel.worst_case()  # eta = 1/((k-1) 2**k)
p0, _ = acpa_step_probability(2, (0, 0), 3, PhaseFraction.zero(), worst)
print(f"zero residual under worst-case rotations at k=3: p(correct) = {p0:.4f}")

# %% Monte Carlo at n = 8 under three gate models
gen = np.random.default_rng(3)
phases = [PhaseFraction(int(x), 8) for x in gen.integers(0, 256, 300)]
models = {
    "perfect": NoiseModel.perfect(),
    "worst case": NoiseModel.worst_case(),
    "stochastic": NoiseModel(NoiseMode.STOCHASTIC, None),
}
for k in (3, 5):
    for name, noise in models.items():
        cfg = AcpaConfig(8, k, noise)
        wins = sum(run_acpa(p, cfg, RngStream(k, r)).succeeded(p) for r, p in enumerate(phases))
        print(f"k={k} {name:<10} m={cfg.trials:3d}  success {wins / len(phases):.3f}")
