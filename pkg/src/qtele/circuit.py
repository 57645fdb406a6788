"""Teleportation circuits on three qubits.

Wire 0 carries the information qubit and wires 1-2 the channel pair.  The
circuit is CNOT(0 -> 1) followed by H(0); Alice then reads wires 0-1 and
Bob's residual on wire 2 is kept unnormalized, so ``M0``/``M1`` are squared
amplitudes of the full final state.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .algebra import PureState
from .deformation import (
    ProfileSet,
    check_product,
    gamma_for_info,
    product_of_squares,
    split_product,
)
from .errors import ConfigurationError, DomainError, RangeError
from .qnum import UNDEFORMED, DeformationParam, exact_tolerance, qnumber

BASES = ("00", "01", "10", "11")

_H = np.array([[1.0, 1.0], [1.0, -1.0]]) / math.sqrt(2.0)


class Protocol(str, Enum):
    PLAIN = "plain"
    CASE1 = "case1"
    CASE2 = "case2"


class Shape(str, Enum):
    NU = "nu"
    NU_PRIME = "nu_prime"
    NU_DPRIME = "nu_dprime"
    NU_TPRIME = "nu_tprime"


# (row, col, sign) of the first and second channel amplitude in the 2x2 channel matrix
SHAPE_SLOTS = {
    Shape.NU: ((0, 0, 1), (1, 1, 1)),
    Shape.NU_PRIME: ((0, 1, 1), (1, 0, 1)),
    Shape.NU_DPRIME: ((0, 1, 1), (1, 0, -1)),
    Shape.NU_TPRIME: ((0, 0, 1), (1, 1, -1)),
}


def _normalized_pair(x0: float, x1: float, what: str) -> None:
    if not (math.isfinite(x0) and math.isfinite(x1)):
        raise DomainError(f"{what} amplitudes must be finite")
    if abs(x0 * x0 + x1 * x1 - 1.0) > max(exact_tolerance(), 1e-12):
        raise DomainError(f"{what} amplitudes are not normalized: {x0!r}, {x1!r}")


@dataclass(frozen=True)
class InfoQubit:
    alpha0: float
    alpha1: float

    def __post_init__(self):
        _normalized_pair(self.alpha0, self.alpha1, "information qubit")

    @classmethod
    def from_alpha0(cls, alpha0: float) -> "InfoQubit":
        if not 0.0 <= alpha0 <= 1.0:
            raise DomainError(f"alpha0 must lie in [0, 1], got {alpha0!r}")
        return cls(alpha0, math.sqrt(1.0 - alpha0 * alpha0))


@dataclass(frozen=True)
class ChannelSpec:
    shape: Shape
    a: float
    b: float
    deformed: bool = False
    p: DeformationParam = UNDEFORMED
    non_maximal: bool = False

    def __post_init__(self):
        object.__setattr__(self, "shape", Shape(self.shape))
        _normalized_pair(self.a, self.b, "channel")
        if self.non_maximal and abs(abs(self.a) - math.sqrt(0.5)) <= 1e-12:
            raise DomainError("channel asserted non-maximal but |a| = 1/sqrt2")

    @classmethod
    def from_a00(cls, a00: float, **kw) -> "ChannelSpec":
        if not 0.0 <= a00 <= 1.0:
            raise DomainError(f"a00 must lie in [0, 1], got {a00!r}")
        return cls(kw.pop("shape", Shape.NU), a00, math.sqrt(1.0 - a00 * a00), **kw)

    def amplitudes(self) -> tuple[float, float]:
        """Channel amplitudes as they enter the state: ``([a], [b])`` or ``(a, b)``."""
        if self.deformed:
            return qnumber(self.a, self.p), qnumber(self.b, self.p)
        return self.a, self.b

    def det_abs(self) -> float:
        x, y = self.amplitudes()
        return abs(x * y)


@dataclass(frozen=True)
class Branch:
    probability: float
    residual: tuple[float, float]
    m0: float
    m1: float


@dataclass(frozen=True)
class TeleportRecord:
    protocol: Protocol
    shape: Shape
    branches: dict[str, Branch]
    final_state: tuple[float, ...]
    initial_state: tuple[float, ...] = field(repr=False, default=())

    def to_json(self) -> dict:
        return {
            "protocol": self.protocol.value,
            "shape": self.shape.value,
            "branches": {
                k: {
                    "probability": b.probability,
                    "residual": list(b.residual),
                    "M0": b.m0,
                    "M1": b.m1,
                }
                for k, b in self.branches.items()
            },
            "final_state": list(self.final_state),
        }


def _check_wire(index: int, n: int) -> None:
    if not (isinstance(index, int) and 0 <= index < n):
        raise RangeError(f"qubit index {index!r} out of range for {n} qubits")


def _n_qubits(state: np.ndarray) -> int:
    n = int(round(math.log2(state.size)))
    if 2**n != state.size:
        raise DomainError(f"state length {state.size} is not a power of two")
    return n


def apply_hadamard(state: PureState, target: int) -> PureState:
    state = np.asarray(state, dtype=float)
    n = _n_qubits(state)
    _check_wire(target, n)
    t = np.tensordot(_H, state.reshape([2] * n), axes=([1], [target]))
    return np.moveaxis(t, 0, target).reshape(-1)


def apply_cnot(state: PureState, control: int, target: int) -> PureState:
    state = np.asarray(state, dtype=float)
    n = _n_qubits(state)
    _check_wire(control, n)
    _check_wire(target, n)
    if control == target:
        raise RangeError("control and target must differ")
    t = state.reshape([2] * n).copy()
    sel = [slice(None)] * n
    sel[control] = 1
    sub = t[tuple(sel)]
    axis = target - (target > control)
    t[tuple(sel)] = np.flip(sub, axis=axis)
    return t.reshape(-1)


@dataclass(frozen=True)
class Factors:
    """Amplitudes and normalization factors entering one protocol run."""

    info: tuple[float, float]
    channel: tuple[float, float]
    channel_factor: float
    info_factor: float


def default_profiles(
    info: InfoQubit,
    channel: ChannelSpec,
    protocol: Protocol | str,
    kappa: float = 0.0,
    kappa_gamma: float | None = None,
) -> ProfileSet | None:
    """Profiles bound so every normalization constraint holds exactly."""
    protocol = Protocol(protocol)
    if protocol is Protocol.PLAIN:
        return None
    omega, delta = split_product(product_of_squares((channel.a, channel.b), channel.p), kappa)
    gamma = None
    if protocol is Protocol.CASE2:
        g = gamma_for_info(info.alpha0, info.alpha1, channel.p)
        gamma = split_product(g, kappa if kappa_gamma is None else kappa_gamma)
    return ProfileSet(omega=omega, delta=delta, gamma=gamma)


def protocol_factors(
    info: InfoQubit,
    channel: ChannelSpec,
    profiles: ProfileSet | None,
    protocol: Protocol | str,
) -> Factors:
    protocol = Protocol(protocol)
    p = channel.p
    if protocol is Protocol.PLAIN:
        if channel.deformed:
            raise ConfigurationError("plain protocol uses an undeformed channel")
        return Factors((info.alpha0, info.alpha1), channel.amplitudes(), 1.0, 1.0)
    if not channel.deformed:
        raise ConfigurationError(f"{protocol.value} requires a deformed channel")
    if profiles is None:
        profiles = default_profiles(info, channel, protocol)
    amps = channel.amplitudes()
    od = profiles.omega_delta(p)
    check_product("omega*delta", od, 1.0 / (amps[0] ** 2 + amps[1] ** 2))
    if protocol is Protocol.CASE1:
        return Factors((info.alpha0, info.alpha1), amps, od, 1.0)
    g = profiles.gamma_value(p)
    check_product("gamma", g, gamma_for_info(info.alpha0, info.alpha1, p))
    return Factors((qnumber(info.alpha0, p), qnumber(info.alpha1, p)), amps, od, g)


def channel_vector(shape: Shape, first: float, second: float) -> np.ndarray:
    m = np.zeros((2, 2))
    for (r, c, sign), amp in zip(SHAPE_SLOTS[Shape(shape)], (first, second)):
        m[r, c] = sign * amp
    return m.reshape(-1)


def initial_state(f: Factors, shape: Shape) -> PureState:
    info = math.sqrt(f.info_factor) * np.array(f.info)
    chan = math.sqrt(f.channel_factor) * channel_vector(shape, *f.channel)
    return np.kron(info, chan)


def run_circuit(state: PureState) -> PureState:
    return apply_hadamard(apply_cnot(state, 0, 1), 0)


def teleport(
    info: InfoQubit,
    channel: ChannelSpec,
    profiles: ProfileSet | None = None,
    protocol: Protocol | str = Protocol.PLAIN,
) -> TeleportRecord:
    """Simulate the circuit and split the final state by Alice's outcome."""
    protocol = Protocol(protocol)
    f = protocol_factors(info, channel, profiles, protocol)
    start = initial_state(f, channel.shape)
    final = run_circuit(start)
    branches = {}
    for idx, basis in enumerate(BASES):
        r0, r1 = float(final[2 * idx]), float(final[2 * idx + 1])
        m0, m1 = r0 * r0, r1 * r1
        branches[basis] = Branch(m0 + m1, (r0, r1), m0, m1)
    return TeleportRecord(
        protocol, channel.shape, branches, tuple(float(x) for x in final), tuple(float(x) for x in start)
    )


def bob_stats(record: TeleportRecord, alice_basis: str) -> tuple[float, float]:
    if alice_basis not in BASES:
        raise RangeError(f"Alice basis must be one of {BASES}, got {alice_basis!r}")
    b = record.branches[alice_basis]
    return b.m0, b.m1


def bob_routing(shape: Shape, alice_basis: str) -> tuple[tuple[int, int], tuple[int, int]]:
    """For Bob's ``|0>`` and ``|1>``: which info amplitude and which channel
    amplitude (0 = first, 1 = second) produce that component."""
    m1 = int(alice_basis[1])
    slots = SHAPE_SLOTS[Shape(shape)]
    out = []
    for bob in (0, 1):
        for x in (0, 1):
            for slot, (r, c, _) in enumerate(slots):
                if (r, c) == (m1 ^ x, bob):
                    out.append((x, slot))
    return out[0], out[1]


def closed_form_residual(f: Factors, shape: Shape, alice_basis: str) -> tuple[float, float]:
    """Bob's unnormalized residual from the expanded circuit algebra:
    component ``b`` is ``(x0*c[m1,b] + (-1)^m0 * x1*c[m1^1,b]) / sqrt2``."""
    m0, m1 = int(alice_basis[0]), int(alice_basis[1])
    c = channel_vector(shape, *f.channel).reshape(2, 2) * math.sqrt(f.channel_factor)
    x = np.array(f.info) * math.sqrt(f.info_factor)
    comp = [(x[0] * c[m1, b] + (-1) ** m0 * x[1] * c[m1 ^ 1, b]) / math.sqrt(2.0) for b in (0, 1)]
    return float(comp[0]), float(comp[1])


def formula_stats(
    info: InfoQubit,
    channel: ChannelSpec,
    profiles: ProfileSet | None,
    protocol: Protocol | str,
) -> tuple[float, float]:
    """``(M0, M1)`` for Alice outcome ``00`` on the ``nu`` channel, as the
    printed product formulas: ``K * x0^2 * c0^2 / 2`` and ``K * x1^2 * c1^2 / 2``."""
    if Shape(channel.shape) is not Shape.NU:
        raise DomainError("closed-form statistics are stated for the nu channel only")
    f = protocol_factors(info, channel, profiles, protocol)
    k = f.channel_factor * f.info_factor
    return (
        k * f.info[0] ** 2 * f.channel[0] ** 2 / 2,
        k * f.info[1] ** 2 * f.channel[1] ** 2 / 2,
    )


def stats_product_closed(f: Factors) -> float:
    """``M0*M1`` as ``K^2 x0^2 x1^2 |Det|^2 / 4``; basis independent."""
    k = f.channel_factor * f.info_factor
    det = f.channel[0] * f.channel[1]
    return k * k * f.info[0] ** 2 * f.info[1] ** 2 * det * det / 4


def fidelity_closed(
    info: InfoQubit,
    channel: ChannelSpec,
    profiles: ProfileSet | None = None,
    protocol: Protocol | str = Protocol.PLAIN,
) -> float:
    """``K * (c0*x0 + c1*x1)^2`` for the ``nu`` channel."""
    if Shape(channel.shape) is not Shape.NU:
        raise DomainError("the closed-form fidelity is stated for the nu channel only")
    f = protocol_factors(info, channel, profiles, protocol)
    k = f.channel_factor * f.info_factor
    return k * (f.channel[0] * f.info[0] + f.channel[1] * f.info[1]) ** 2


def fidelity_overlap(record: TeleportRecord) -> float:
    """Literal ``|<zeta_0|zeta_f>|^2`` between the 3-qubit input and output."""
    return float(np.dot(record.initial_state, record.final_state)) ** 2


@dataclass(frozen=True)
class CriticalPoint:
    a00: float
    a11: float
    fidelity: float
    claimed: str  # "max" or "min"
    stated_second_derivative: float
    fd_gradient: float
    fd_second_derivative: float

    @property
    def stationary(self) -> bool:
        return abs(self.fd_gradient) < 1e-6

    @property
    def sign_agrees(self) -> bool:
        return np.sign(self.fd_second_derivative) == np.sign(self.stated_second_derivative)

    @property
    def curvature_agrees(self) -> bool:
        ref = abs(self.stated_second_derivative)
        return abs(self.fd_second_derivative - self.stated_second_derivative) <= 1e-4 * max(ref, 1e-12)


@dataclass(frozen=True)
class Extrema:
    alpha0: float
    alpha1: float
    f_max: float
    f_min: float
    points: tuple[CriticalPoint, ...]


def plain_fidelity_curve(a00: float, alpha0: float, alpha1: float, branch: int = 1) -> float:
    """``(a00*alpha0 + a11*alpha1)^2`` with ``a11 = branch * sqrt(1 - a00^2)``."""
    return (a00 * alpha0 + branch * math.sqrt(1.0 - a00 * a00) * alpha1) ** 2


def fidelity_extrema(alpha0: float, h: float = 1e-5) -> Extrema:
    """Claimed extrema of the plain fidelity over ``a00``, each checked by
    central differences along the branch of ``a11`` with matching sign."""
    if not 0.0 < alpha0 < 1.0:
        raise DomainError(f"alpha0 must lie strictly inside (0, 1), got {alpha0!r}")
    alpha1 = math.sqrt(1.0 - alpha0 * alpha0)
    d2_max = -2.0 / alpha1**2
    d2_min = 2.0 * (2.0 * alpha0**2 - 1.0) ** 2 / alpha0**2
    points = []
    for a00, claimed, d2 in (
        (alpha0, "max", d2_max),
        (-alpha0, "max", d2_max),
        (alpha1, "min", d2_min),
        (-alpha1, "min", d2_min),
    ):
        branch = 1 if a00 >= 0 else -1

        def F(x: float) -> float:
            return plain_fidelity_curve(x, alpha0, alpha1, branch)

        grad = (F(a00 + h) - F(a00 - h)) / (2 * h)
        curv = (F(a00 + h) - 2 * F(a00) + F(a00 - h)) / (h * h)
        a11 = branch * math.sqrt(1.0 - a00 * a00)
        points.append(CriticalPoint(a00, a11, F(a00), claimed, d2, grad, curv))
    f_min = 4.0 * (alpha0 * alpha1) ** 2
    return Extrema(alpha0, alpha1, 1.0, f_min, tuple(points))
