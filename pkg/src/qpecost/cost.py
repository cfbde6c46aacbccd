"""Closed-form resource accounting for the three estimators.

Every method spends ``trials_factor * (2**n - 1)`` controlled-``U``
applications; with ``U`` built from ``gamma`` elementary gates the kick-back
cost is ``trials_factor * gamma * (2**n - 1)``.  ACPA additionally pays
``k n m`` controlled rotations.  Since ``2**n`` overflows quickly, counts are
carried in log2 form and, for ``n <= EXACT_MAX_N``, as exact integers built
from the ``ceil``-ed trial factor.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import asdict, dataclass
from typing import Iterable

from .acpa import GateMode, VacuousBoundWarning, acpa_trials_closed_form, rotation_count
from .calibration import repetition_constant

EXACT_MAX_N = 64
KITAEV_COEFFICIENTS = (76.0, 55.0)


class Method(enum.Enum):
    KITAEV = "kitaev"
    FPE = "fpe"
    ACPA = "acpa"

    @classmethod
    def coerce(cls, value) -> Method:
        return value if isinstance(value, cls) else cls(str(value).lower())


def _log2_mersenne(n: int) -> float:
    """``log2(2**n - 1)`` without forming ``2**n`` for large ``n``."""
    if n <= 52:
        return math.log2((1 << n) - 1)
    return n + math.log1p(-(2.0**-n)) / math.log(2.0)


def fpe_s2(n: int) -> float:
    if n < 2:
        raise ValueError("FPE cost needs n >= 2 (s2 = ln(4n)/ln n is singular at n = 1)")
    return math.log(4 * n) / math.log(n)


def fpe_round1(n: int) -> float:
    """Round-one measurements per bit, ``log2(log2(4n))``."""
    return math.log2(math.log2(4 * n))


def trials_factor(method, n: int, k: int = 3, mode=GateMode.PERFECT, C: int | None = None) -> float:
    """Real-valued multiplier of ``gamma * (2**n - 1)`` in the kick-back cost."""
    method = Method.coerce(method)
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if method is Method.KITAEV:
        a, b = KITAEV_COEFFICIENTS
        return a + b * math.log(4 * n)
    if method is Method.FPE:
        C = repetition_constant() if C is None else C
        S = math.log(n)
        return fpe_round1(n) + S * fpe_s2(n) * C
    return acpa_trials_closed_form(n, k, mode)


def measurements(method, n: int, k: int = 3, mode=GateMode.PERFECT, C: int | None = None) -> float:
    """Total measurement count of each method."""
    method = Method.coerce(method)
    if method is Method.KITAEV:
        return n * trials_factor(method, n)
    if method is Method.FPE:
        C = repetition_constant() if C is None else C
        return n * (fpe_round1(n) + C * fpe_s2(n))
    return n * acpa_trials_closed_form(n, k, mode)


def synthesis_overhead(k: int, c: float) -> float:
    """Gates per approximated rotation, ``(k + log2 k)**c``.

    With rotation error ``eta = 1/((k-1) 2**k)`` the synthesis cost
    ``log(1/eta)**c`` is ``(k + log2(k-1))**c``, approximated by ``(k + log2 k)**c``.
    """
    if k < 3:
        raise ValueError(f"k must be >= 3, got {k}")
    if not 1.0 <= c < 4.0:
        raise ValueError(f"synthesis exponent c must lie in [1, 4), got {c}")
    return (k + math.log2(k)) ** c


@dataclass
class CostBreakdown:
    method: str
    n: int
    k: int | None
    gamma: int
    mode: str
    trials_factor: float
    trials: int
    measurements: float
    u_invocations_log2: float
    u_invocations_exact: int | None
    rotation_invocations: float
    rotation_invocations_exact: int | None
    rotation_invocations_applied: int
    elementary_gates_log2: float
    elementary_gates_exact: int | None
    synthesis_exponent: float | None = None
    synthesis_gates: float | None = None
    log_domain_only: bool = False

    def as_dict(self) -> dict:
        return asdict(self)


def cost_breakdown(
    method,
    n: int,
    k: int = 3,
    gamma: int = 1,
    mode=GateMode.PERFECT,
    c: float | None = None,
    *,
    trials: int | None = None,
    literal_gamma_power: bool = False,
) -> CostBreakdown:
    """Measurements, kick-back and rotation counts for one method.

    ``literal_gamma_power=True`` evaluates the gate factor as ``gamma**(2**n - 1)``
    (log domain only) instead of ``gamma * (2**n - 1)``.  ``c`` adds the cost of
    synthesising every ACPA rotation to precision ``eta``.  ``trials`` replaces
    ``ceil(trials_factor)`` in the integer counts, e.g. to match a simulated run.
    """
    method = Method.coerce(method)
    mode = GateMode.coerce(mode)
    if gamma < 1:
        raise ValueError(f"gamma must be >= 1, got {gamma}")
    factor = trials_factor(method, n, k, mode)
    trials = math.ceil(factor) if trials is None else trials
    is_acpa = method is Method.ACPA
    rot = k * n * factor if is_acpa else 0.0
    rot_int = k * n * trials if is_acpa else 0

    exact = n <= EXACT_MAX_N and not literal_gamma_power
    full = (1 << n) - 1
    u_exact = trials * full if exact else None
    kick_exact = trials * gamma * full if exact else None
    gates_exact = kick_exact + rot_int if exact else None
    if exact:
        u_log2 = math.log2(u_exact)
        gates_log2 = math.log2(gates_exact)
    else:
        u_log2 = math.log2(trials) + _log2_mersenne(n)
        if literal_gamma_power:
            kick_log2 = math.log2(trials) + (2.0**n - 1) * math.log2(gamma)
        else:
            kick_log2 = math.log2(trials * gamma) + _log2_mersenne(n)
        gates_log2 = _log2_add(kick_log2, math.log2(rot_int)) if rot_int else kick_log2

    synth = None
    if c is not None and is_acpa:
        synth = rot_int * synthesis_overhead(k, c)
    return CostBreakdown(
        method=method.value,
        n=n,
        k=k if is_acpa else None,
        gamma=gamma,
        mode=mode.value if is_acpa else GateMode.PERFECT.value,
        trials_factor=factor,
        trials=trials,
        measurements=measurements(method, n, k, mode),
        u_invocations_log2=u_log2,
        u_invocations_exact=u_exact,
        rotation_invocations=rot,
        rotation_invocations_exact=rot_int,
        rotation_invocations_applied=rotation_count(n, k, trials) if is_acpa else 0,
        elementary_gates_log2=gates_log2,
        elementary_gates_exact=gates_exact,
        synthesis_exponent=c if is_acpa else None,
        synthesis_gates=synth,
        log_domain_only=not exact,
    )


def _log2_add(a: float, b: float) -> float:
    """``log2(2**a + 2**b)``."""
    hi, lo = max(a, b), min(a, b)
    return hi + math.log2(1.0 + 2.0 ** (lo - hi))


def elementary_gates(
    method, n: int, k: int = 3, gamma: int = 1, mode=GateMode.PERFECT, trials: int | None = None
) -> tuple[float, int | None]:
    """``(log2 count, exact count or None)`` of elementary gates."""
    b = cost_breakdown(method, n, k, gamma, mode, trials=trials)
    return b.elementary_gates_log2, b.elementary_gates_exact


def kickback_rotation_gap(n: int, k: int, gamma: int = 1, mode=GateMode.PERFECT) -> float:
    """log2 of (ACPA kick-back gates) minus log2 of (ACPA rotation gates)."""
    factor = trials_factor(Method.ACPA, n, k, mode)
    kick = math.log2(factor * gamma) + _log2_mersenne(n)
    rot = math.log2(k * n * factor)
    return kick - rot


@dataclass(frozen=True)
class RatioCell:
    method_a: str
    method_b: str
    n: int
    k: int
    mode: str
    ratio: float


def ratio_surface(
    method_a,
    method_b,
    n_range: Iterable[int],
    k_range: Iterable[int],
    mode=GateMode.PERFECT,
) -> list[RatioCell]:
    """U-invocation ratio ``a / b`` on an ``(n, k)`` grid; ``(2**n - 1)`` cancels.

    ``mode`` selects perfect or imperfect gates for any ACPA side.  FPE cells
    with ``n < 2`` are skipped.
    """
    a, b = Method.coerce(method_a), Method.coerce(method_b)
    mode = GateMode.coerce(mode)
    n_values, k_values = list(n_range), list(k_range)
    if not n_values or not k_values:
        raise ValueError("ranges must be non-empty")
    cells = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", VacuousBoundWarning)
        for k in k_values:
            for n in n_values:
                if n < 2 and Method.FPE in (a, b):
                    continue
                ratio = trials_factor(a, n, k, mode) / trials_factor(b, n, k, mode)
                cells.append(RatioCell(a.value, b.value, n, k, mode.value, ratio))
    return cells
