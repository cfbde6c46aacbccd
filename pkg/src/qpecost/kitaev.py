"""Kitaev's phase estimation from Hadamard tests on ``U, U**2, ..., U**(2**(n-1))``."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .calibration import kitaev_trials_closed_form
from .measurement import RngStream, Sampler, as_sampler, estimate_angle
from .phase import BitString, PhaseFraction, PhaseLike, as_phase, mod1_distance, multiply_phase, nearest_eighth
from .report import EstimateReport


@dataclass(frozen=True)
class KitaevConfig:
    n: int
    c: float = 0.25
    trials_override: int | None = None

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if not 0.0 < self.c < 0.5:
            raise ValueError(f"failure budget c must lie in (0, 1/2), got {self.c}")
        if self.trials_override is not None and (self.trials_override < 2 or self.trials_override % 2):
            raise ValueError("trials_override must be an even integer >= 2")

    @property
    def trials(self) -> int:
        return self.trials_override or kitaev_trials(self.n, self.c)


@dataclass(frozen=True)
class MultipleEstimate:
    l: int  # noqa: E741
    s: float
    t: float
    phi_tilde: float
    beta: PhaseFraction


def kitaev_trials(n: int, c: float = 0.25) -> int:
    """Hadamard tests per multiple, sine and cosine batches together (always even).

    Each batch gets ``ceil`` of its Chernoff count at failure ``c / (2 n)``.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if not 0.0 < c < 0.5:
        raise ValueError(f"failure budget c must lie in (0, 1/2), got {c}")
    per_batch = kitaev_trials_closed_form(c / n) / 2.0
    return 2 * math.ceil(per_batch)


def estimate_multiple(l: int, phi: PhaseFraction, m: int, sampler: Sampler) -> MultipleEstimate:  # noqa: E741
    """Estimate ``phi_l = frac(2**(l-1) phi)`` from ``m / 2`` tests of each kind."""
    if l < 1:
        raise ValueError(f"multiple index must be >= 1, got {l}")
    if m < 2 or m % 2:
        raise ValueError(f"trial count must be even and >= 2, got {m}")
    est = estimate_angle(1 << (l - 1), phi, m, as_sampler(sampler))
    return MultipleEstimate(l, est.s, est.t, est.phase, nearest_eighth(est.phase))


def infer_bits(betas: Sequence[PhaseFraction], n: int) -> tuple[BitString, list[int]]:
    """Recover ``x_1 ... x_{n+2}`` from the eighths ``betas = [beta_1, ..., beta_n]``.

    ``beta_n`` seeds ``x_n x_{n+1} x_{n+2}``; each earlier bit is the choice of
    ``x_k`` whose three-bit window ``0.x_k x_{k+1} x_{k+2}`` lies closer to
    ``beta_k``.  Returns the bits and the list of positions ``k`` where both
    choices were equally close (resolved to 0).
    """
    if len(betas) != n:
        raise ValueError(f"expected {n} eighths, got {len(betas)}")
    eighths = [b.with_bits(3).numerator for b in betas]

    x = [0] * (n + 3)  # 1-based; x[n + 2] is the last bit
    seed = eighths[n - 1]
    x[n], x[n + 1], x[n + 2] = (seed >> 2) & 1, (seed >> 1) & 1, seed & 1
    ties = []
    for k in range(n - 1, 0, -1):
        tail = 2 * x[k + 1] + x[k + 2]
        d0 = _eighth_distance(tail, eighths[k - 1])
        d1 = _eighth_distance(4 + tail, eighths[k - 1])
        if d0 == d1:
            ties.append(k)
        x[k] = 1 if d1 < d0 else 0
    return BitString(tuple(x[1 : n + 3])), ties


def _eighth_distance(a: int, b: int) -> int:
    d = (a - b) % 8
    return min(d, 8 - d)


def run_kitaev(
    phi: PhaseLike, cfg: KitaevConfig, rng: RngStream | None = None, sampler: Sampler | None = None
) -> EstimateReport:
    """Full pipeline: estimate every multiple, then infer ``n + 2`` bits."""
    phi = as_phase(phi)
    if sampler is None:
        if rng is None:
            raise ValueError("need an RngStream or a sampler")
        sampler = as_sampler(rng)
    n, m = cfg.n, cfg.trials
    estimates = [estimate_multiple(l, phi, m, sampler.child(l)) for l in range(1, n + 1)]
    bits, ties = infer_bits([e.beta for e in estimates], n)
    report = EstimateReport(
        algorithm="kitaev",
        n=n,
        bits=bits,
        measurements=n * m,
        u_invocations=m * ((1 << n) - 1),
        rotations=0,
        model={"trials_per_multiple": m, "u_invocations": m * ((1 << n) - 1)},
        details={
            "betas": [str(e.beta) for e in estimates],
            "max_multiple_error": max(
                mod1_distance(e.phi_tilde, multiply_phase(phi, 1 << (e.l - 1)).value) for e in estimates
            ),
        },
    )
    report.flags.extend(f"tie_at_bit_{k}" for k in ties)
    return report
