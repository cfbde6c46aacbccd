"""
Cost surfaces
=============

Closed-form controlled-U counts for the three methods and the ratio surfaces
over ``k`` and ``n``.  Pipe the CSV written here into any plotting tool.
"""

import math
import sys
import warnings

import numpy as np

from qpecost.acpa import VacuousBoundWarning
from qpecost.cost import Method, cost_breakdown, kickback_rotation_gap, ratio_surface

warnings.simplefilter("ignore", VacuousBoundWarning)

# %% one row per method at n = 100
for m in Method:
    b = cost_breakdown(m, 100, k=3)
    print(f"{b.method:<7} trials {b.trials_factor:9.2f}  measurements {b.measurements:10.1f}  log2 U {b.u_invocations_log2:.2f}")

# %% Kitaev / ACPA ratio surface
cells = ratio_surface("kitaev", "acpa", range(1, 101), range(3, 11))
grid = np.array([c.ratio for c in cells]).reshape(8, 100)
print("\nratio at n=100 for k=3..10:", np.round(grid[:, -1], 2))
print("k=3 ratio falls from", round(grid[0, 9], 2), "at n=10 toward", round(55 * (1 - math.pi**2 / 32) ** 2 / 2, 2))

# %% imperfect gates move the surface one step in k
imperfect = ratio_surface("kitaev", "acpa", [100], range(4, 11), "imperfect")
print("imperfect k=4..10 equals perfect k=3..9:", all(c.ratio == grid[c.k - 4, -1] for c in imperfect))

# %% rotations are negligible next to the kick-back
print("kick-back minus rotation, log2 bits at n=40:", {k: round(kickback_rotation_gap(40, k), 1) for k in range(3, 11)})

# %% CSV for plotting
if "--csv" in sys.argv:
    print("n,k,ratio")
    for c in cells:
        print(f"{c.n},{c.k},{c.ratio}")
