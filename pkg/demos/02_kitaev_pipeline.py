"""
Kitaev's estimator step by step
===============================

Each multiple ``frac(2**(k-1) phi)`` is estimated to within 1/16 from sine and
cosine Hadamard tests, rounded to an eighth, and the eighths are stitched
together from the last bit backwards.
"""

import numpy as np

from qpecost.kitaev import KitaevConfig, estimate_multiple, infer_bits, kitaev_trials, run_kitaev
from qpecost.measurement import BernoulliSampler, ExactSampler, RngStream
from qpecost.phase import PhaseFraction

n = 8
phi = PhaseFraction.from_binary_string("0.10110011")
m = kitaev_trials(n)
print(f"n = {n}, {m} Hadamard tests per multiple ({m // 2} cosine + {m // 2} sine)")

# %% estimate every multiple with a seeded sampler
sampler = BernoulliSampler(RngStream(seed=42))
estimates = [estimate_multiple(k, phi, m, sampler.child(k)) for k in range(1, n + 1)]
for e in estimates:
    print(f"k={e.l}: s={e.s:+.3f} t={e.t:+.3f} phi_k~{e.phi_tilde:.4f} beta={e.beta.as_fraction()}")

# %% stitch the eighths into n + 2 bits
bits, ties = infer_bits([e.beta for e in estimates], n)
print("recovered", bits, "true", phi, "ties", ties)

# %% the same thing through the pipeline, and the noise-free oracle
report = run_kitaev(phi, KitaevConfig(n), RngStream(seed=42))
print("pipeline :", report.phase, "success", report.succeeded(phi))
print("tallies  :", report.measurements, "measurements,", report.u_invocations, "controlled-U")
print("oracle   :", run_kitaev(phi, KitaevConfig(n), sampler=ExactSampler()).phase)

# %% success over random phases
gen = np.random.default_rng(0)
wins = 0
for r, num in enumerate(gen.integers(0, 1 << n, 200)):
    truth = PhaseFraction(int(num), n)
    wins += run_kitaev(truth, KitaevConfig(n), RngStream(1, r)).succeeded(truth)
print(f"success rate over 200 random phases: {wins / 200:.3f}")
