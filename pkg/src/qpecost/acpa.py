"""Arbitrary constant-precision phase estimation.

Bits are recovered from the least significant ``x_n`` up to ``x_1``.  For bit
``x_j`` the control qubit carries ``frac(2**(j-1) phi)``; inverse rotations
``R_2 ... R_k`` conditioned on the already estimated bits
``x_{j+1} ... x_{j+k-1}`` strip those bits, leaving ``0.x_j`` plus a residual
below ``2**-k``, and a majority vote over ``m`` shots reads ``x_j``.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

from .measurement import NoiseMode, NoiseModel, RngStream, Sampler, acpa_step_probability, as_sampler
from .phase import BitString, PhaseFraction, PhaseLike, as_phase
from .report import EstimateReport


class GateMode(enum.Enum):
    PERFECT = "perfect"
    IMPERFECT = "imperfect"

    @classmethod
    def coerce(cls, value) -> GateMode:
        return value if isinstance(value, cls) else cls(str(value).lower())


class VacuousBoundWarning(UserWarning):
    """The Taylor bound behind the trial count is negative, so the count guarantees nothing."""


@dataclass(frozen=True)
class AcpaConfig:
    n: int
    k: int = 3
    noise: NoiseModel = field(default_factory=NoiseModel.perfect)
    trials_override: int | None = None
    odd_trials: bool = True

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if self.k < 3:
            raise ValueError(f"precision degree k must be >= 3, got {self.k}")
        object.__setattr__(self, "noise", self.noise.resolve(self.k))

    @property
    def mode(self) -> GateMode:
        return GateMode.PERFECT if self.noise.mode is NoiseMode.PERFECT else GateMode.IMPERFECT

    @property
    def trials(self) -> int:
        m = self.trials_override or acpa_trials(self.n, self.k, self.mode)
        if self.odd_trials and m % 2 == 0:
            m += 1
        return m


def acpa_trials_closed_form(n: int, k: int, mode=GateMode.PERFECT) -> float:
    """``2 ln(4n) / (1 - pi**2 / 2**e)**2`` with ``e = 2k-1`` (perfect) or ``2k-3`` (imperfect)."""
    mode = GateMode.coerce(mode)
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if k < 2:
        raise ValueError(f"precision degree k must be >= 2, got {k}")
    exponent = 2 * k - 1 if mode is GateMode.PERFECT else 2 * k - 3
    base = 1.0 - math.pi**2 / 2.0**exponent
    if base == 0.0:
        raise ArithmeticError("trial count denominator vanishes")
    if base < 0.0:
        warnings.warn(
            f"k={k} ({mode.value}): success lower bound is vacuous, trial count is nominal only",
            VacuousBoundWarning,
            stacklevel=2,
        )
    return 2.0 * math.log(4 * n) / base**2


def acpa_trials(n: int, k: int, mode=GateMode.PERFECT) -> int:
    """Shots per bit: ``ceil`` of :func:`acpa_trials_closed_form`."""
    return math.ceil(acpa_trials_closed_form(n, k, mode))


class BitVote(NamedTuple):
    bit: int
    ones: float
    shots: int
    tie: bool


def estimate_bit(
    j: int,
    known_suffix: Sequence[int],
    phi: PhaseFraction,
    cfg: AcpaConfig,
    sampler: Sampler,
    shots: int | None = None,
) -> BitVote:
    """Majority vote for ``x_j`` given the fed-back bits ``x_{j+1} ...``; ties go to 0."""
    m = cfg.trials if shots is None else shots
    sampler = as_sampler(sampler)
    if cfg.noise.mode is NoiseMode.STOCHASTIC:
        if sampler.rng is None:
            raise ValueError("stochastic noise needs a random sampler")
        _, p1 = acpa_step_probability(
            j, known_suffix, cfg.k, phi, cfg.noise, n=cfg.n, rng=sampler.rng.generator, shots=m
        )
    else:
        _, p1 = acpa_step_probability(j, known_suffix, cfg.k, phi, cfg.noise, n=cfg.n)
    ones = sampler.ones(p1, m)
    return BitVote(int(2 * ones > m), ones, m, 2 * ones == m)


def rotation_count(n: int, k: int, m: int) -> int:
    """Controlled rotations actually applied: ``m * min(k-1, n-j)`` summed over ``j``."""
    return m * sum(min(k - 1, n - j) for j in range(1, n + 1))


def run_acpa(
    phi: PhaseLike, cfg: AcpaConfig, rng: RngStream | None = None, sampler: Sampler | None = None
) -> EstimateReport:
    """Recover ``x_n, ..., x_1`` in turn, feeding each estimate into later rotations.

    Wrong estimates are fed back as they are, exactly as the circuit would.
    """
    phi = as_phase(phi)
    if sampler is None:
        if rng is None:
            raise ValueError("need an RngStream or a sampler")
        sampler = as_sampler(rng)
    n, k, m = cfg.n, cfg.k, cfg.trials
    x = [0] * (n + 1)  # 1-based
    ties = []
    for j in range(n, 0, -1):
        suffix = x[j + 1 : min(j + k - 1, n) + 1]
        vote = estimate_bit(j, suffix, phi, cfg, sampler.child(j), shots=m)
        x[j] = vote.bit
        if vote.tie:
            ties.append(j)
    rotations = rotation_count(n, k, m)
    report = EstimateReport(
        algorithm="acpa",
        n=n,
        bits=BitString(tuple(x[1:])),
        measurements=n * m,
        u_invocations=m * ((1 << n) - 1),
        rotations=rotations,
        model={
            "trials_per_bit": m,
            "trials_closed_form": acpa_trials_closed_form(n, k, cfg.mode),
            "u_invocations": m * ((1 << n) - 1),
            "rotations_upper_bound": k * n * m,
        },
        details={"k": k, "mode": cfg.mode.value, "eta": cfg.noise.eta},
    )
    report.flags.extend(f"tie_at_bit_{j}" for j in ties)
    return report
