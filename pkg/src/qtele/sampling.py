"""Seeded random draws shared by the verification suites and tests."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .algebra import AmplitudeMatrix
from .circuit import BASES, ChannelSpec, InfoQubit, Protocol, Shape, default_profiles
from .deformation import ProfileSet
from .qnum import UNDEFORMED, DeformationParam, new_param


def random_amplitudes(rng: np.random.Generator) -> AmplitudeMatrix:
    return AmplitudeMatrix.normalized(rng.normal(size=4))


def random_product_amplitudes(rng: np.random.Generator) -> AmplitudeMatrix:
    u = rng.normal(size=2)
    v = rng.normal(size=2)
    return AmplitudeMatrix.normalized(np.outer(u, v).reshape(-1))


def random_q_unentangled(rng: np.random.Generator) -> AmplitudeMatrix:
    """Draw from the solution families ``a00=a01, a11=a10`` or ``a00=a10, a11=a01``."""
    x, y = rng.normal(size=2)
    vec = (x, x, y, y) if rng.random() < 0.5 else (x, y, x, y)
    return AmplitudeMatrix.normalized(vec)


def mixed_amplitude_draws(rng: np.random.Generator, n: int) -> list[AmplitudeMatrix]:
    """Generic, product and q-unentangled matrices in roughly equal parts."""
    makers = (random_amplitudes, random_product_amplitudes, random_q_unentangled)
    return [makers[i % 3](rng) for i in range(n)]


@dataclass(frozen=True)
class Setup:
    protocol: Protocol
    info: InfoQubit
    channel: ChannelSpec
    profiles: ProfileSet | None
    basis: str


def random_setup(
    rng: np.random.Generator,
    protocol: Protocol | str,
    shape: Shape | str | None = None,
    s: float | None = None,
    lo: float = 0.05,
    hi: float = 0.95,
) -> Setup:
    """A non-degenerate run: amplitudes in ``(lo, hi)``, ``|kappa|`` in ``[0.5, 2]``."""
    protocol = Protocol(protocol)
    if shape is None:
        shape = list(Shape)[int(rng.integers(4))]
    info = InfoQubit.from_alpha0(float(rng.uniform(lo, hi)))
    if protocol is Protocol.PLAIN:
        p: DeformationParam = UNDEFORMED
    else:
        p = new_param(float(rng.uniform(0.05, 1.0)) if s is None else s)
    channel = ChannelSpec.from_a00(
        float(rng.uniform(lo, hi)), shape=Shape(shape), deformed=protocol is not Protocol.PLAIN, p=p
    )
    kappa = float(rng.uniform(0.5, 2.0) * rng.choice((-1.0, 1.0)))
    kappa_gamma = float(rng.uniform(0.5, 2.0) * rng.choice((-1.0, 1.0)))
    profiles = default_profiles(info, channel, protocol, kappa, kappa_gamma)
    basis = BASES[int(rng.integers(4))]
    return Setup(protocol, info, channel, profiles, basis)


def near_maximal(x: float, margin: float = 1e-3) -> bool:
    return abs(abs(x) - math.sqrt(0.5)) < margin
