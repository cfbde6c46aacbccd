"""Exact dyadic phase arithmetic.

Every eigenphase handled by the estimators lives in ``[0, 1)`` and is stored
as ``numerator / 2**bits``.  Bit shifts, multiplication by integers and the
mod-1 reduction are done with Python integers, so nothing drifts; conversion
to ``float`` only happens right before a trigonometric evaluation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Union

#: Extra bits kept when a non-dyadic real phase is truncated onto the grid.
GUARD_BITS = 8

#: Upper bound on ``bits + log2(M)`` accepted by :func:`multiply_phase`.
MAX_PRECISION_BITS = 4096


class CapacityError(OverflowError):
    """Raised when an exact phase would exceed :data:`MAX_PRECISION_BITS`."""


@dataclass(frozen=True, eq=False)
class PhaseFraction:
    """A phase ``numerator / 2**bits`` in ``[0, 1)``.

    Equality and hashing compare values, so ``PhaseFraction(1, 1)`` equals
    ``PhaseFraction(2, 2)``.
    """

    numerator: int
    bits: int

    def __post_init__(self) -> None:
        if self.bits < 0:
            raise ValueError(f"bits must be non-negative, got {self.bits}")
        if not 0 <= self.numerator < (1 << self.bits):
            raise ValueError(f"numerator {self.numerator} out of range for {self.bits} bits")

    # construction ---------------------------------------------------------

    @classmethod
    def zero(cls) -> PhaseFraction:
        return cls(0, 0)

    @classmethod
    def from_bits(cls, bits: Iterable[int]) -> PhaseFraction:
        """Build ``0.b1 b2 ... bm`` from binary digits, most significant first."""
        numerator = 0
        count = 0
        for b in bits:
            if b not in (0, 1):
                raise ValueError(f"binary digit must be 0 or 1, got {b!r}")
            numerator = (numerator << 1) | int(b)
            count += 1
        return cls(numerator, count)

    @classmethod
    def from_binary_string(cls, text: str) -> PhaseFraction:
        """Parse the ``"0.b1b2...bm"`` text format (a bare digit string is also accepted)."""
        s = text.strip()
        if s.startswith("0."):
            s = s[2:]
        elif s.startswith("."):
            s = s[1:]
        if s and set(s) - {"0", "1"}:
            raise ValueError(f"not a binary fraction: {text!r}")
        return cls.from_bits(int(c) for c in s)

    @classmethod
    def from_real(cls, x: float, bits: int) -> PhaseFraction:
        """Truncate a real phase (reduced mod 1) onto the ``2**-bits`` grid."""
        frac = Fraction(x) % 1
        numerator = math.floor(frac * (1 << bits))
        return cls(numerator, bits)

    @classmethod
    def from_fraction(cls, value: Fraction) -> PhaseFraction:
        value = value % 1
        den = value.denominator
        if den & (den - 1):
            raise ValueError(f"{value} is not a dyadic rational")
        return cls(value.numerator, den.bit_length() - 1)

    # views ----------------------------------------------------------------

    @property
    def value(self) -> float:
        return math.ldexp(self.numerator, -self.bits)

    def __float__(self) -> float:
        return self.value

    def as_fraction(self) -> Fraction:
        return Fraction(self.numerator, 1 << self.bits)

    def to_bits(self, length: int | None = None) -> tuple[int, ...]:
        """Binary digits after the point, padded or truncated to ``length``."""
        length = self.bits if length is None else length
        if length >= self.bits:
            num = self.numerator << (length - self.bits)
        else:
            num = self.numerator >> (self.bits - length)
        return tuple((num >> (length - 1 - i)) & 1 for i in range(length))

    def with_bits(self, bits: int) -> PhaseFraction:
        """Re-express on a finer (or equal) grid; coarsening must be exact."""
        if bits >= self.bits:
            return PhaseFraction(self.numerator << (bits - self.bits), bits)
        shift = self.bits - bits
        if self.numerator & ((1 << shift) - 1):
            raise ValueError("coarsening would lose bits")
        return PhaseFraction(self.numerator >> shift, bits)

    # arithmetic -----------------------------------------------------------

    def _aligned(self, other: PhaseFraction) -> tuple[int, int, int]:
        bits = max(self.bits, other.bits)
        return (
            self.numerator << (bits - self.bits),
            other.numerator << (bits - other.bits),
            bits,
        )

    def __add__(self, other: PhaseFraction) -> PhaseFraction:
        a, b, bits = self._aligned(other)
        return PhaseFraction((a + b) % (1 << bits), bits)

    def __sub__(self, other: PhaseFraction) -> PhaseFraction:
        a, b, bits = self._aligned(other)
        return PhaseFraction((a - b) % (1 << bits), bits)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PhaseFraction):
            return NotImplemented
        a, b, _ = self._aligned(other)
        return a == b

    def __hash__(self) -> int:
        return hash(self.as_fraction())

    def __str__(self) -> str:
        return "0." + "".join(map(str, self.to_bits())) if self.bits else "0.0"

    def __repr__(self) -> str:
        return f"PhaseFraction({self.numerator}, {self.bits})"


@dataclass(frozen=True)
class BitString:
    """Binary digits ``x_1 ... x_m`` of a phase, most significant first."""

    bits: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "bits", tuple(int(b) for b in self.bits))
        if any(b not in (0, 1) for b in self.bits):
            raise ValueError("bits must be 0 or 1")

    def __len__(self) -> int:
        return len(self.bits)

    def __getitem__(self, index):
        return self.bits[index]

    def bit(self, position: int) -> int:
        """The digit ``x_position`` using the 1-based index of the binary expansion."""
        return self.bits[position - 1]

    def to_phase(self) -> PhaseFraction:
        return PhaseFraction.from_bits(self.bits)

    def __str__(self) -> str:
        return "0." + "".join(map(str, self.bits))


PhaseLike = Union[PhaseFraction, float, Fraction]


def as_phase(x: PhaseLike, bits: int | None = None) -> PhaseFraction:
    """Coerce to :class:`PhaseFraction`; reals are truncated to ``bits`` (default ``53 + GUARD_BITS``)."""
    if isinstance(x, PhaseFraction):
        return x
    if isinstance(x, Fraction):
        return PhaseFraction.from_fraction(x)
    return PhaseFraction.from_real(float(x), 53 + GUARD_BITS if bits is None else bits)


def mod1_distance(a: PhaseLike, b: PhaseLike) -> float:
    """Distance on the circle ``R/Z``: ``min(|a-b|, 1-|a-b|)``, a value in ``[0, 1/2]``."""
    if isinstance(a, PhaseFraction) and isinstance(b, PhaseFraction):
        d = (a - b).as_fraction()
        return float(min(d, 1 - d))
    d = abs(float(a) - float(b)) % 1.0
    return min(d, 1.0 - d)


def multiply_phase(phi: PhaseFraction, multiplier: int) -> PhaseFraction:
    """Fractional part of ``multiplier * phi``, exactly."""
    if multiplier < 1:
        raise ValueError(f"multiplier must be a positive integer, got {multiplier}")
    if phi.bits + multiplier.bit_length() > MAX_PRECISION_BITS:
        raise CapacityError(
            f"{phi.bits} phase bits times a {multiplier.bit_length()}-bit multiplier "
            f"exceeds {MAX_PRECISION_BITS} bits"
        )
    return PhaseFraction((phi.numerator * multiplier) % (1 << phi.bits), phi.bits)


def nearest_eighth(x: PhaseLike) -> PhaseFraction:
    """Closest of ``0/8, ..., 7/8`` to ``x`` on the circle.

    A value exactly halfway between two eighths rounds down, e.g. 0.4375 -> 3/8
    and 0.9375 -> 7/8.
    """
    if isinstance(x, PhaseFraction):
        scaled = x.as_fraction() * 8
        idx = math.ceil(scaled - Fraction(1, 2))
    else:
        idx = math.ceil((float(x) % 1.0) * 8.0 - 0.5)
    return PhaseFraction(idx % 8, 3)

