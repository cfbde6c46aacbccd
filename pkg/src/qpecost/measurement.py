"""Outcome distributions of the single-control-qubit circuits and their samplers.

All circuits used by the three estimators have one control qubit and
diagonal targets, so each one reduces to a Bernoulli distribution whose
parameter is a closed-form function of an exact phase.  Controlled rotation
feedback is applied as exact dyadic subtraction, not as matrices.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

from .phase import PhaseFraction, PhaseLike, multiply_phase


class KGate(enum.Enum):
    """Extra phase gate on the control qubit of the Hadamard test."""

    IDENTITY = "identity"
    SQRT_Z = "sqrt_z"  # diag(1, i)


@dataclass(frozen=True)
class HadamardTestSpec:
    multiplier: int
    k_gate: KGate = KGate.IDENTITY

    def __post_init__(self) -> None:
        if self.multiplier < 1:
            raise ValueError(f"multiplier must be >= 1, got {self.multiplier}")


class NoiseMode(enum.Enum):
    PERFECT = "perfect"
    WORST_CASE_ADDITIVE = "worst_case"
    STOCHASTIC = "stochastic"


@dataclass(frozen=True)
class NoiseModel:
    """Angle error of each rotation gate, in revolutions.

    ``WORST_CASE_ADDITIVE`` shifts the residual phase by ``(k - 1) * eta``.
    ``STOCHASTIC`` draws an independent ``uniform(-eta, eta)`` offset per gate
    and per shot.  ``eta=None`` means "use ``1 / ((k - 1) 2**k)``" and is
    resolved by :meth:`resolve`.
    """

    mode: NoiseMode = NoiseMode.PERFECT
    eta: float | None = 0.0

    def __post_init__(self) -> None:
        if self.mode is NoiseMode.PERFECT and self.eta not in (0.0, None):
            raise ValueError("perfect noise model requires eta = 0")
        if self.mode is NoiseMode.PERFECT:
            object.__setattr__(self, "eta", 0.0)
        if self.eta is not None and self.eta < 0:
            raise ValueError(f"eta must be non-negative, got {self.eta}")

    @classmethod
    def perfect(cls) -> NoiseModel:
        return cls(NoiseMode.PERFECT, 0.0)

    @classmethod
    def worst_case(cls, eta: float | None = None) -> NoiseModel:
        return cls(NoiseMode.WORST_CASE_ADDITIVE, eta)

    @property
    def is_perfect(self) -> bool:
        return self.mode is NoiseMode.PERFECT or self.eta == 0.0

    def resolve(self, k: int) -> NoiseModel:
        if self.eta is not None:
            return self
        return NoiseModel(self.mode, default_eta(k))

    def offset(self, k: int, rng: np.random.Generator | None = None, size: int | None = None):
        """Residual-phase shift accumulated over the ``k - 1`` feedback rotations."""
        eta = self.resolve(k).eta
        if self.mode is NoiseMode.STOCHASTIC:
            if rng is None:
                raise ValueError("stochastic noise needs a random generator")
            draws = rng.uniform(-eta, eta, size=(size or 1, k - 1)).sum(axis=1)
            return draws if size is not None else float(draws[0])
        if self.mode is NoiseMode.WORST_CASE_ADDITIVE:
            return (k - 1) * eta
        return 0.0


def default_eta(k: int) -> float:
    """Rotation error ``1 / ((k - 1) 2**k)`` that keeps the noisy residual below ``2**-(k-1)``."""
    return 1.0 / ((k - 1) * 2**k)


# ---------------------------------------------------------------------------
# random streams and samplers


@dataclass
class RngStream:
    """Independent, reproducible random stream keyed by ``(seed, stream_id, ...)``.

    Backed by the counter-based Philox generator.  :meth:`child` derives
    non-overlapping sub-streams, so every bit, trial batch or sweep cell can own
    its own stream regardless of execution order.
    """

    seed: int
    stream_id: int = 0
    path: tuple[int, ...] = ()
    _gen: np.random.Generator | None = field(default=None, init=False, repr=False, compare=False)

    @property
    def generator(self) -> np.random.Generator:
        if self._gen is None:
            ss = np.random.SeedSequence(self.seed, spawn_key=(self.stream_id, *self.path))
            self._gen = np.random.Generator(np.random.Philox(ss))
        return self._gen

    def child(self, index: int) -> RngStream:
        return RngStream(self.seed, self.stream_id, (*self.path, index))


def sample(p1: float, rng: RngStream) -> int:
    """One Bernoulli draw: 1 with probability ``p1``."""
    if not 0.0 <= p1 <= 1.0:
        raise ValueError(f"probability out of range: {p1}")
    return int(rng.generator.random() < p1)


class BernoulliSampler:
    """Draws measurement outcomes from an :class:`RngStream`."""

    exact = False

    def __init__(self, rng: RngStream):
        self.rng = rng

    def ones(self, p1, shots: int) -> int:
        """Number of 1-outcomes in ``shots`` trials (``p1`` may be a per-shot array)."""
        gen = self.rng.generator
        if np.ndim(p1) == 0:
            return int(gen.binomial(shots, float(p1)))
        p1 = np.asarray(p1, dtype=float)
        if p1.shape != (shots,):
            raise ValueError("per-shot probabilities must have length `shots`")
        return int((gen.random(shots) < p1).sum())

    def child(self, index: int) -> BernoulliSampler:
        return BernoulliSampler(self.rng.child(index))


class ExactSampler:
    """Exact-probability oracle: returns the expected count ``p1 * shots``.

    With this sampler every estimator sees the true outcome frequencies, which
    turns each pipeline into a deterministic function of the phase.
    """

    exact = True
    rng = None

    def ones(self, p1, shots: int) -> float:
        return float(np.sum(p1)) if np.ndim(p1) else float(p1) * shots

    def child(self, index: int) -> ExactSampler:
        return self


Sampler = Union[BernoulliSampler, ExactSampler]


def as_sampler(source) -> Sampler:
    if isinstance(source, (BernoulliSampler, ExactSampler)):
        return source
    if isinstance(source, RngStream):
        return BernoulliSampler(source)
    raise TypeError(f"expected a sampler or RngStream, got {type(source).__name__}")


# ---------------------------------------------------------------------------
# circuit distributions


def hadamard_probabilities(spec: HadamardTestSpec, phi: PhaseLike) -> tuple[float, float]:
    """Outcome distribution ``(p0, p1)`` of the Hadamard test on ``U**M``."""
    if isinstance(phi, PhaseFraction):
        angle = 2.0 * math.pi * multiply_phase(phi, spec.multiplier).value
    else:
        angle = 2.0 * math.pi * ((spec.multiplier * float(phi)) % 1.0)
    if spec.k_gate is KGate.IDENTITY:
        c = math.cos(angle)
        return (1.0 + c) / 2.0, (1.0 - c) / 2.0
    s = math.sin(angle)
    return (1.0 - s) / 2.0, (1.0 + s) / 2.0


def u_invocations_per_test(spec: HadamardTestSpec) -> int:
    """Controlled-``U`` applications in one test; ``U**M`` is ``M`` applications."""
    return spec.multiplier


def acpa_residual(j: int, known_suffix: Sequence[int], phi: PhaseFraction) -> PhaseFraction:
    """Phase on the control qubit after the inverse rotations conditioned on known bits.

    Starts from ``frac(2**(j-1) phi) = 0.x_j x_{j+1} ...`` and removes
    ``0.0 x_{j+1} ... x_{j+L}`` where ``L = len(known_suffix)``.
    """
    shifted = multiply_phase(phi, 1 << (j - 1))
    correction = PhaseFraction.from_bits((0, *known_suffix))
    return shifted - correction


def acpa_step_probability(
    j: int,
    known_suffix: Sequence[int],
    k: int,
    phi: PhaseFraction,
    noise: NoiseModel = NoiseModel(),
    *,
    n: int | None = None,
    rng: np.random.Generator | None = None,
    shots: int | None = None,
):
    """Outcome distribution ``(p0, p1)`` when estimating bit ``x_j`` with rotations up to ``R_k``.

    Outcome 1 indicates ``x_j = 1``.  Under stochastic noise ``rng`` and
    ``shots`` are required and both probabilities are per-shot arrays.
    """
    if k < 2:
        raise ValueError(f"precision degree k must be >= 2, got {k}")
    if len(known_suffix) > k - 1:
        raise ValueError(f"at most k-1={k - 1} known bits can be fed back, got {len(known_suffix)}")
    if n is not None and len(known_suffix) != min(k - 1, n - j):
        raise ValueError(
            f"bit {j} of {n} with k={k} needs {min(k - 1, n - j)} known bits, got {len(known_suffix)}"
        )
    residual = acpa_residual(j, known_suffix, phi).value
    if noise.mode is NoiseMode.STOCHASTIC:
        if shots is None:
            raise ValueError("stochastic noise needs `shots`")
        shifted = residual + noise.offset(k, rng, size=shots)
        p1 = np.sin(np.pi * shifted) ** 2
        return 1.0 - p1, p1
    shifted = residual + noise.offset(k)
    return math.cos(math.pi * shifted) ** 2, math.sin(math.pi * shifted) ** 2


# ---------------------------------------------------------------------------
# sine / cosine estimation shared by Kitaev and FPE


@dataclass(frozen=True)
class AngleEstimate:
    multiplier: int
    s: float  # estimate of sin(2 pi frac(M phi))
    t: float  # estimate of cos(2 pi frac(M phi))
    phase: float  # recovered frac(M phi) in [0, 1)


def estimate_angle(multiplier: int, phi: PhaseFraction, shots: int, sampler: Sampler) -> AngleEstimate:
    """Estimate ``frac(M phi)`` from Identity and sqrt(Z) Hadamard tests.

    ``shots`` is the total budget: ``ceil(shots/2)`` Identity tests and
    ``floor(shots/2)`` sqrt(Z) tests.  The atan2 recovery resolves the half-turn
    ambiguity of a plain arctangent from the signs of both estimates.
    """
    n_cos = (shots + 1) // 2
    n_sin = shots // 2
    if n_cos < 1 or n_sin < 1:
        raise ValueError(f"need at least two shots, got {shots}")
    _, p1_cos = hadamard_probabilities(HadamardTestSpec(multiplier, KGate.IDENTITY), phi)
    _, p1_sin = hadamard_probabilities(HadamardTestSpec(multiplier, KGate.SQRT_Z), phi)
    h_cos = sampler.ones(p1_cos, n_cos)
    h_sin = sampler.ones(p1_sin, n_sin)
    s = min(1.0, max(-1.0, 2.0 * h_sin / n_sin - 1.0))
    t = min(1.0, max(-1.0, 1.0 - 2.0 * h_cos / n_cos))
    phase = wrap_unit(math.atan2(s, t) / (2.0 * math.pi))
    return AngleEstimate(multiplier, s, t, phase)


def wrap_unit(x: float) -> float:
    """Reduce to ``[0, 1)``, guarding the ``-tiny % 1 == 1.0`` corner."""
    x = x % 1.0
    return 0.0 if x >= 1.0 else x
