"""
Exact dyadic phases
===================

Phases live on the circle [0, 1).  Keeping them as ``numerator / 2**bits``
makes every shift ``frac(2**j * phi)`` exact, which the estimators rely on.
"""

from fractions import Fraction

from qpecost.phase import PhaseFraction, mod1_distance, multiply_phase, nearest_eighth

phi = PhaseFraction.from_binary_string("0.101101")
print("phi            =", phi, "=", phi.as_fraction())

# multiplying by 2**j shifts bits out of the front
for j in range(4):
    print(f"frac(2**{j} phi) =", multiply_phase(phi, 1 << j))

# odd multipliers mix bits: 5 * 45/64 = 225/64 -> 33/64
print("frac(5 phi)    =", multiply_phase(phi, 5).as_fraction(), "expected", Fraction(225, 64) % 1)

# distance wraps around the circle
print("d(0.9, 0.05)   =", round(mod1_distance(0.9, 0.05), 12))

# the nearest eighth of a phase; exact halfway points round down
for x in (0.13, 0.97, 0.4375, 0.9375):
    print(f"nearest eighth of {x:<7} ->", nearest_eighth(x).as_fraction())
