"""Concrete stand-ins for the arbitrary deformation functions of q.

Every function is a scaled power ``scale * q**kappa``.  Normalization fixes
only products such as ``omega(q) * delta(q)``; how a product is split
between its factors is free and the exponents serve as shared key material.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterable

from .errors import ConfigurationError, DomainError
from .qnum import DeformationParam, exact_tolerance, qnumber

if TYPE_CHECKING:
    from .algebra import AmplitudeMatrix

SQRT1_2 = 1.0 / math.sqrt(2.0)


@dataclass(frozen=True)
class DeformationProfile:
    kappa: float = 0.0
    scale: float = 1.0
    kind: str = "power"

    def __post_init__(self):
        if self.kind != "power":
            raise DomainError(f"unknown profile kind {self.kind!r}")
        if not (math.isfinite(self.kappa) and math.isfinite(self.scale)):
            raise DomainError("profile parameters must be finite")
        if self.scale <= 0:
            raise DomainError("profile scale must be positive")

    def __call__(self, p: DeformationParam) -> float:
        return self.scale * p.power(self.kappa)


def eval_profile(profile: DeformationProfile, p: DeformationParam) -> float:
    return profile(p)


def product_of_squares(amplitudes: Iterable[float], p: DeformationParam) -> float:
    """``1 / sum([x]^2)``: the factor that restores unit norm after deformation."""
    total = sum(qnumber(a, p) ** 2 for a in amplitudes)
    if total == 0.0:
        raise DomainError("all deformed amplitudes vanish; state is degenerate")
    return 1.0 / total


def product_for_state(amps: "AmplitudeMatrix", p: DeformationParam) -> float:
    """``psi*beta`` forced by normalizing the deformed bipartite state."""
    return product_of_squares(amps.entries(), p)


def product_for_bell_basis(p: DeformationParam) -> float:
    return 1.0 / (2.0 * qnumber(SQRT1_2, p) ** 2)


def gamma_for_info(alpha0: float, alpha1: float, p: DeformationParam) -> float:
    return product_of_squares((alpha0, alpha1), p)


def split_product(
    product: float, kappa: float
) -> tuple[DeformationProfile, DeformationProfile]:
    """Factor ``product`` as ``sqrt(P) q**kappa`` times ``sqrt(P) q**-kappa``."""
    if not (math.isfinite(product) and product > 0):
        raise DomainError(f"cannot split non-positive product {product!r}")
    root = math.sqrt(product)
    return DeformationProfile(kappa, root), DeformationProfile(-kappa, root)


@dataclass(frozen=True)
class ProfileSet:
    """Bound deformation functions.

    ``psi``/``beta`` belong to a general bipartite state, ``omega``/``delta``
    to the teleportation channel and ``gamma`` (two factors) to the deformed
    information qubit.  Unused slots stay ``None``.
    """

    psi: DeformationProfile | None = None
    beta: DeformationProfile | None = None
    omega: DeformationProfile | None = None
    delta: DeformationProfile | None = None
    gamma: tuple[DeformationProfile, DeformationProfile] | None = None

    def psi_beta(self, p: DeformationParam) -> float:
        if self.psi is None or self.beta is None:
            raise ConfigurationError("psi/beta profiles are not bound")
        return self.psi(p) * self.beta(p)

    def omega_delta(self, p: DeformationParam) -> float:
        if self.omega is None or self.delta is None:
            raise ConfigurationError("omega/delta profiles are not bound")
        return self.omega(p) * self.delta(p)

    def gamma_value(self, p: DeformationParam) -> float:
        if self.gamma is None:
            raise ConfigurationError("gamma profile is not bound")
        return self.gamma[0](p) * self.gamma[1](p)

    def kappas(self) -> list[float]:
        """Exponents of every bound channel/info factor, in payload order."""
        out: list[float] = []
        if self.omega is not None and self.delta is not None:
            out += [self.omega.kappa, self.delta.kappa]
        if self.gamma is not None:
            out += [self.gamma[0].kappa, self.gamma[1].kappa]
        return out


def check_product(name: str, actual: float, required: float) -> None:
    tol = exact_tolerance()
    if abs(actual - required) > tol * max(1.0, abs(required)):
        raise ConfigurationError(
            f"{name} = {actual!r} violates the normalization constraint {required!r}"
        )
