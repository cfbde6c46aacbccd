"""
Where the constants come from
=============================

The repetition constants are derived, not typed in: the amplitude budget from
the worst-case arctangent perturbation, the trial counts from Hoeffding.
"""

import math

import numpy as np

from qpecost.calibration import (
    calibrate,
    derive_amplitude_budget,
    derive_kitaev_coefficients,
    fpe_delta,
    worst_angle_error,
)

# %% worst phase error as a function of the sine/cosine error
for delta in (0.05, 0.1, 0.2, 0.2706):
    print(f"delta={delta:<6} worst phase error {worst_angle_error(delta) / (2 * math.pi):.5f} turns")

# %% invert it: the largest error that keeps the phase within a budget
for budget in (1 / 64, 1 / 32, 1 / 16):
    print(f"budget 1/{round(1 / budget)}: delta = {derive_amplitude_budget(budget):.5f}")
print("closed form at 1/32:", round(fpe_delta(), 5))

# %% Hoeffding per function, failure eps/2, two functions
a, b = derive_kitaev_coefficients()
print(f"m(eps) ~ {a:.2f} + {b:.2f} ln(1/eps)")
eps = np.array([0.25, 0.01, 1 / 400])
print("m at eps =", eps, "->", np.round(a + b * np.log(1 / eps), 1))

# %% the full report, as the CLI prints it
for check in calibrate().checks:
    mark = "ok " if check.ok else "off"
    print(f"[{mark}] {check.name:<24} {check.value:10.5f}  target {check.target:.5f} +/- {check.tolerance}")
