"""q-numbers and the deformation parameter.

All deformation in the package is governed by a single real ``s`` in
``[0, 1]`` with ``q = e**s``.  The q-number of ``x`` is
``(q**x - q**-x) / (q - 1/q)``, evaluated here as ``sinh(s*x) / sinh(s)``.
"""
from __future__ import annotations

import math
import numbers
import os
from dataclasses import dataclass
from typing import Callable

from .errors import DomainError, RangeError

DEFAULT_TOLERANCE = 1e-12


def exact_tolerance() -> float:
    """Tolerance for exact identities; ``QTELE_TOLERANCE`` overrides it."""
    raw = os.environ.get("QTELE_TOLERANCE")
    if raw is None:
        return DEFAULT_TOLERANCE
    try:
        tol = float(raw)
    except ValueError:
        raise RangeError(f"QTELE_TOLERANCE is not a number: {raw!r}") from None
    if not (math.isfinite(tol) and tol > 0):
        raise RangeError(f"QTELE_TOLERANCE must be positive, got {raw!r}")
    return tol


@dataclass(frozen=True)
class DeformationParam:
    """Deformation parameter; ``q`` is derived from ``s`` and never stored."""

    s: float

    def __post_init__(self):
        if not (isinstance(self.s, numbers.Real) and 0.0 <= self.s <= 1.0):
            raise RangeError(f"s must lie in [0, 1], got {self.s!r}")
        object.__setattr__(self, "s", float(self.s))

    @property
    def q(self) -> float:
        return math.exp(self.s)

    def power(self, x: float) -> float:
        """``q**x`` without forming q first."""
        return math.exp(self.s * x)


def new_param(s: float) -> DeformationParam:
    return DeformationParam(s)


UNDEFORMED = DeformationParam(0.0)


def _sinhc(t: float) -> float:
    # series below 1e-4: the next term is t**4/120, under 1e-18
    if abs(t) < 1e-4:
        return 1.0 + t * t / 6.0
    return math.sinh(t) / t


def qnumber(x: float, p: DeformationParam) -> float:
    """q-number ``[x]``; the s = 0 case is the limit ``[x] = x``.

    Evaluated as ``x * sinhc(s x) / sinhc(s)`` so that tiny ``s`` never
    underflows to zero.
    """
    x = float(x)
    if not math.isfinite(x):
        raise DomainError(f"q-number of non-finite value {x!r}")
    if p.s == 0.0:
        return x
    return x * _sinhc(p.s * x) / _sinhc(p.s)


def qnumber_raw(x: float, p: DeformationParam) -> float:
    """The literal quotient ``(q**x - q**-x)/(q - q**-1)``; only for s > 0."""
    q = p.q
    return (q**x - q**-x) / (q - 1.0 / q)


def bisect_increasing(
    f: Callable[[float], float],
    target: float,
    lo: float,
    hi: float,
    tol: float = 1e-14,
    max_iter: int = 200,
) -> float:
    """Solve ``f(x) = target`` for strictly increasing ``f`` on ``[lo, hi]``.

    Targets outside ``[f(lo), f(hi)]`` are clamped to the nearest endpoint.
    """
    if target <= f(lo):
        return lo
    if target >= f(hi):
        return hi
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if hi - lo <= tol or mid in (lo, hi):
            break
        if f(mid) < target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def inverse_qnumber(y: float, p: DeformationParam) -> float:
    """Invert ``x -> [x]`` on ``[0, 1]``; negative ``y`` maps by oddness."""
    if not math.isfinite(y):
        raise DomainError(f"cannot invert non-finite value {y!r}")
    if y < 0:
        return -inverse_qnumber(-y, p)
    if y > 1.0 + 1e-12:
        raise DomainError(f"[x] = {y} has no solution in [0, 1]")
    if p.s == 0.0:
        return min(y, 1.0)
    return bisect_increasing(lambda x: qnumber(x, p), y, 0.0, 1.0)
