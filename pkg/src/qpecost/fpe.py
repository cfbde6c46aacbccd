"""Two-round faster phase estimation.

Round one takes a few Hadamard tests per power ``2**(j-1)``.  Round two draws
``ceil(s2 * n)`` multipliers, each a sum of ``S`` distinct powers
``2**(j-1)`` (``1 <= j <= n``), and estimates ``sigma_i = frac(M_i phi)``
from ``C`` tests.  Inference is an exhaustive search over the dyadic grid of
``2**(n+3)`` candidates minimising the squared circular error against every
``sigma_i``, restricted to candidates that agree with round one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .calibration import repetition_constant
from .measurement import RngStream, Sampler, as_sampler, estimate_angle
from .phase import BitString, PhaseFraction, PhaseLike, as_phase, multiply_phase
from .report import EstimateReport

GRID_GUARD_BITS = 3
MAX_GRID_BITS = 26


@dataclass(frozen=True)
class FpeConfig:
    """Round-two density ``S``, measurements-per-bit factor ``s2`` and repetitions ``C``.

    Defaults: ``S = round(ln n)`` (at least 1), ``s2 = ln(4n) / ln n``,
    ``C = repetition_constant()`` and ``round1_reps = max(3, ceil(log2 log2 4n))``.
    """

    n: int
    S: int | None = None
    s2: float | None = None
    C: int | None = None
    round1_reps: int | None = None
    round1_tolerance: float = 1 / 16

    def __post_init__(self) -> None:
        n = self.n
        if n < 1:
            raise ValueError(f"n must be >= 1, got {n}")
        if self.s2 is None:
            if n < 2:
                raise ValueError("default s2 = ln(4n)/ln(n) is undefined for n = 1; pass s2 explicitly")
            object.__setattr__(self, "s2", math.log(4 * n) / math.log(n))
        if self.S is None:
            object.__setattr__(self, "S", max(1, round(math.log(n))) if n > 1 else 1)
        if self.C is None:
            object.__setattr__(self, "C", repetition_constant())
        if self.round1_reps is None:
            object.__setattr__(self, "round1_reps", max(3, math.ceil(math.log2(math.log2(4 * n)))))
        if self.S < 1 or self.S > n:
            raise ValueError(f"density S must lie in [1, n={n}], got {self.S}")
        if self.s2 * n < 1:
            raise ValueError(f"s2 * n must be >= 1, got {self.s2 * n}")
        if self.C < 2 or self.C % 2:
            raise ValueError(f"C must be even and >= 2, got {self.C}")
        if self.round1_reps < 2:
            raise ValueError("round1_reps must be >= 2 (one test of each kind)")

    @property
    def num_multipliers(self) -> int:
        return math.ceil(self.s2 * self.n - 1e-12)


@dataclass
class SigmaRecord:
    multiplier: int
    exponents: tuple[int, ...]  # j values; each contributes 2**(j-1)
    sigma: float | None = None


def generate_multipliers(cfg: FpeConfig, rng: RngStream | np.random.Generator) -> list[SigmaRecord]:
    """Draw ``ceil(s2 n)`` multipliers, each over a uniformly random ``S``-subset of ``1..n``."""
    if cfg.S > cfg.n:
        raise ValueError(f"density S={cfg.S} exceeds n={cfg.n}")
    gen = rng.generator if isinstance(rng, RngStream) else rng
    records = []
    for _ in range(cfg.num_multipliers):
        exps = tuple(sorted(int(e) + 1 for e in gen.choice(cfg.n, size=cfg.S, replace=False)))
        records.append(SigmaRecord(sum(1 << (j - 1) for j in exps), exps))
    return records


def multiplier_sum_sd(n: int, S: int, count: int) -> float:
    """Standard deviation of the total of ``count`` independent random multipliers.

    Each multiplier sums ``S`` powers ``2**0 .. 2**(n-1)`` drawn without
    replacement, so its variance is ``S var (n - S) / (n - 1)`` with ``var``
    the population variance of the powers.
    """
    if n < 2:
        return 0.0
    powers = np.ldexp(1.0, np.arange(n))
    var = float(powers.var())
    return math.sqrt(count * S * var * (n - S) / (n - 1))


def estimate_sigma(multiplier: int, phi: PhaseFraction, C: int, sampler: Sampler) -> SigmaRecord:
    """``C/2`` Identity and ``C/2`` sqrt(Z) tests on ``U**multiplier``, atan2 recovery."""
    if C % 2:
        raise ValueError(f"C must be even, got {C}")
    est = estimate_angle(multiplier, phi, C, as_sampler(sampler))
    exps = tuple(j + 1 for j in range(multiplier.bit_length()) if multiplier >> j & 1)
    return SigmaRecord(multiplier, exps, est.phase)


@dataclass
class Inference:
    phase: PhaseFraction
    betas: list[PhaseFraction]
    loss: float
    feasible: int
    fallback: bool = False


def _circular(a: np.ndarray, b: float) -> np.ndarray:
    d = np.abs(a - b) % 1.0
    return np.minimum(d, 1.0 - d)


def infer_phase(
    round1: list[float] | None,
    records: list[SigmaRecord],
    cfg: FpeConfig,
    grid_bits: int | None = None,
) -> Inference:
    """Grid search for the phase most consistent with every ``sigma_i``.

    ``round1[j-1]`` is the coarse estimate of ``frac(2**(j-1) phi)``;
    candidates farther than ``cfg.round1_tolerance`` from any of them are
    discarded.  If none survive, the unfiltered minimiser is returned with
    ``fallback=True``, exact loss ties then going to the candidate with the
    smallest total round-one disagreement.  Remaining ties go to the lowest
    candidate.
    """
    if not records:
        raise ValueError("need at least one sigma record")
    g = cfg.n + GRID_GUARD_BITS if grid_bits is None else grid_bits
    if g > MAX_GRID_BITS:
        raise ValueError(f"grid of 2**{g} candidates is too large")
    size = 1 << g
    cand = np.arange(size, dtype=np.int64)
    loss = np.zeros(size)
    for rec in records:
        if rec.sigma is None:
            raise ValueError(f"record for M={rec.multiplier} has no sigma estimate")
        r = ((cand * (rec.multiplier % size)) % size) / size
        loss += _circular(r, rec.sigma) ** 2

    feasible = np.ones(size, dtype=bool)
    disagreement = np.zeros(size)
    for j, est in enumerate(round1 or (), start=1):
        r = ((cand << (j - 1)) % size) / size if j - 1 < g else np.zeros(size)
        d = _circular(r, est)
        feasible &= d <= cfg.round1_tolerance
        disagreement += d
    count = int(feasible.sum())
    fallback = count == 0
    if fallback:
        # exact loss ties (e.g. no odd multiplier) are settled by round one
        order = np.lexsort((cand, disagreement, loss))
        best = int(order[0])
    else:
        best = int(np.argmin(np.where(feasible, loss, np.inf)))
    phase = PhaseFraction(best, g)
    betas = [multiply_phase(phase, 1 << (j - 1)) for j in range(1, cfg.n + 1)]
    return Inference(phase, betas, float(loss[best]), count, fallback)


def run_fpe(
    phi: PhaseLike, cfg: FpeConfig, rng: RngStream | None = None, sampler: Sampler | None = None
) -> EstimateReport:
    """Round one, round two and grid inference.

    ``rng`` drives the random multipliers (and the measurements unless a
    ``sampler`` is given), so an exact sampler still needs ``rng``.
    """
    phi = as_phase(phi)
    if rng is None:
        raise ValueError("FPE needs an RngStream for the multiplier draws")
    if sampler is None:
        sampler = as_sampler(rng)
    n, C, r1 = cfg.n, cfg.C, cfg.round1_reps
    stage1 = sampler.child(1)
    round1 = [estimate_angle(1 << (j - 1), phi, r1, stage1.child(j)).phase for j in range(1, n + 1)]

    shells = generate_multipliers(cfg, rng.child(0))
    stage2 = sampler.child(2)
    records = [estimate_sigma(s.multiplier, phi, C, stage2.child(i)) for i, s in enumerate(shells)]
    inf = infer_phase(round1, records, cfg)

    full = (1 << n) - 1
    u_exact = r1 * full + C * sum(rec.multiplier for rec in records)
    report = EstimateReport(
        algorithm="fpe",
        n=n,
        bits=BitString(inf.phase.to_bits()),
        measurements=n * r1 + C * len(records),
        u_invocations=u_exact,
        rotations=0,
        model={
            "u_invocations": cfg.s2 * cfg.S * C * full,
            "measurements": n * (r1 + C * cfg.s2),
            "expected_u_invocations": r1 * full + C * len(records) * cfg.S / n * full,
            "u_invocations_sd": C * multiplier_sum_sd(n, cfg.S, len(records)),
        },
        details={
            "multipliers": [rec.multiplier for rec in records],
            "sigmas": [rec.sigma for rec in records],
            "round1": round1,
            "loss": inf.loss,
            "feasible_candidates": inf.feasible,
            "betas": [str(b) for b in inf.betas],
        },
    )
    if inf.fallback:
        report.flags.append("round1_filter_empty")
    return report
