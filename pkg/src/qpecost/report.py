"""Result type shared by the three estimators."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .phase import BitString, PhaseFraction, mod1_distance


@dataclass
class EstimateReport:
    """Recovered phase plus the resources spent to get it.

    ``u_invocations`` counts controlled-``U`` applications, ``rotations``
    counts controlled phase-shift gates.  ``model`` holds closed-form values
    for comparison with the simulated tallies.
    """

    algorithm: str
    n: int
    bits: BitString
    measurements: int
    u_invocations: int
    rotations: int = 0
    flags: list[str] = field(default_factory=list)
    model: dict[str, float] = field(default_factory=dict)
    details: dict = field(default_factory=dict)

    @property
    def phase(self) -> PhaseFraction:
        return self.bits.to_phase()

    @property
    def u_invocations_log2(self) -> float:
        return math.log2(self.u_invocations) if self.u_invocations else float("-inf")

    def error(self, truth: PhaseFraction) -> float:
        return mod1_distance(self.phase, truth)

    def succeeded(self, truth: PhaseFraction) -> bool:
        """Whether the estimate is within ``2**-n`` of ``truth`` on the circle."""
        return self.error(truth) < 2.0**-self.n

    def bit_flags(self, truth: PhaseFraction) -> list[bool]:
        """Per-bit agreement of ``x_1 .. x_n`` with the binary expansion of ``truth``."""
        want = truth.to_bits(self.n)
        got = self.phase.to_bits(self.n)
        return [a == b for a, b in zip(got, want)]
