"""Classical side channel: payload codec and Bob's amplitude recovery.

Wire format (version 1): UTF-8 text, one ``key=value`` record per line,
keys in sorted order, every line newline-terminated.  Reals are written as
Python's shortest round-trip ``repr``; lists are comma separated.  A byte
string is accepted only if re-encoding the parsed payload reproduces it
exactly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from .circuit import (
    BASES,
    ChannelSpec,
    Protocol,
    Shape,
    TeleportRecord,
    bob_routing,
)
from .deformation import ProfileSet
from .errors import (
    DomainError,
    EncodeError,
    InconsistentStatisticsError,
    ParseError,
    PayloadError,
    RangeError,
    ValidationError,
)
from .qnum import DeformationParam, bisect_increasing, new_param, qnumber

VERSION = 1
RESIDUAL_TOL = 1e-9

_KAPPA_COUNT = {Protocol.PLAIN: 0, Protocol.CASE1: 2, Protocol.CASE2: 4}
_FIELDS = ("alice_basis", "channel_shape", "det_abs", "m0", "m1", "profile_kappas", "protocol", "s", "version")
_REQUIRED = frozenset(_FIELDS) - {"m0", "m1"}


@dataclass(frozen=True)
class ClassicalPayload:
    protocol: Protocol
    alice_basis: str
    det_abs: float
    s: float
    channel_shape: Shape = Shape.NU
    profile_kappas: tuple[float, ...] = ()
    measured: tuple[float, float] | None = None
    version: int = VERSION

    def __post_init__(self):
        try:
            object.__setattr__(self, "protocol", Protocol(self.protocol))
            object.__setattr__(self, "channel_shape", Shape(self.channel_shape))
        except ValueError as exc:
            raise ValidationError(str(exc)) from None
        try:
            for name in ("s", "det_abs"):
                object.__setattr__(self, name, float(getattr(self, name)))
            object.__setattr__(self, "profile_kappas", tuple(float(k) for k in self.profile_kappas))
            if self.measured is not None:
                object.__setattr__(self, "measured", tuple(float(m) for m in self.measured))
        except (TypeError, ValueError) as exc:
            raise ValidationError(f"non-numeric payload field: {exc}") from None

    def validate(self) -> None:
        if self.version != VERSION:
            raise ValidationError(f"unsupported payload version {self.version!r}")
        if self.alice_basis not in BASES:
            raise ValidationError(f"alice_basis must be one of {BASES}")
        if not 0.0 <= self.s <= 1.0:
            raise ValidationError(f"s must lie in [0, 1], got {self.s!r}")
        if not (math.isfinite(self.det_abs) and self.det_abs >= 0):
            raise ValidationError(f"det_abs must be finite and non-negative, got {self.det_abs!r}")
        want = _KAPPA_COUNT[self.protocol]
        if len(self.profile_kappas) != want:
            raise ValidationError(f"{self.protocol.value} carries {want} profile exponents, got {len(self.profile_kappas)}")
        if not all(math.isfinite(k) for k in self.profile_kappas):
            raise ValidationError("profile exponents must be finite")
        if self.measured is not None:
            if len(self.measured) != 2 or not all(math.isfinite(m) and m >= 0 for m in self.measured):
                raise ValidationError("measured statistics must be two finite non-negative reals")

    def param(self) -> DeformationParam:
        return new_param(self.s)


def _render(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def encode(payload: ClassicalPayload) -> bytes:
    try:
        payload.validate()
    except ValidationError as exc:
        raise EncodeError(str(exc)) from None
    fields = {
        "version": str(payload.version),
        "protocol": payload.protocol.value,
        "alice_basis": payload.alice_basis,
        "det_abs": _render(float(payload.det_abs)),
        "s": _render(float(payload.s)),
        "channel_shape": payload.channel_shape.value,
        "profile_kappas": ",".join(_render(k) for k in payload.profile_kappas),
    }
    if payload.measured is not None:
        fields["m0"], fields["m1"] = (_render(m) for m in payload.measured)
    return "".join(f"{k}={fields[k]}\n" for k in sorted(fields)).encode("utf-8")


def _parse_float(text: str, offset: int) -> float:
    try:
        value = float(text)
    except ValueError:
        raise ParseError(f"not a real number: {text!r}", offset) from None
    return value


def decode(data: bytes) -> ClassicalPayload:
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise ParseError("payload is not valid UTF-8", exc.start) from None
    if not text.endswith("\n"):
        raise ParseError("payload is not newline-terminated", len(data))
    raw: dict[str, tuple[str, int]] = {}
    offset = 0
    for line in text[:-1].split("\n"):
        key, sep, value = line.partition("=")
        if not sep:
            raise ParseError(f"record without '=': {line!r}", offset)
        if key not in _FIELDS:
            raise ParseError(f"unknown field {key!r}", offset)
        if key in raw:
            raise ParseError(f"duplicate field {key!r}", offset)
        raw[key] = (value, offset + len(key.encode()) + 1)
        offset += len(line.encode("utf-8")) + 1
    missing = _REQUIRED - raw.keys()
    if missing:
        raise ParseError(f"missing fields {sorted(missing)}", len(data))
    if ("m0" in raw) != ("m1" in raw):
        raise ParseError("m0 and m1 must appear together", len(data))

    version_text, at = raw["version"]
    if not version_text.isdigit():
        raise ParseError(f"bad version {version_text!r}", at)
    kappa_text, at = raw["profile_kappas"]
    kappas = tuple(_parse_float(k, at) for k in kappa_text.split(",")) if kappa_text else ()
    measured = None
    if "m0" in raw:
        measured = (_parse_float(*raw["m0"]), _parse_float(*raw["m1"]))
    payload = ClassicalPayload(
        protocol=raw["protocol"][0],
        alice_basis=raw["alice_basis"][0],
        det_abs=_parse_float(*raw["det_abs"]),
        s=_parse_float(*raw["s"]),
        channel_shape=raw["channel_shape"][0],
        profile_kappas=kappas,
        measured=measured,
        version=int(version_text),
    )
    payload.validate()
    canonical = encode(payload)
    if canonical != data:
        at = next((i for i, (x, y) in enumerate(zip(canonical, data)) if x != y), min(len(canonical), len(data)))
        raise ParseError("payload is not in canonical form", at)
    return payload


def make_payload(
    record: TeleportRecord,
    channel: ChannelSpec,
    profiles: ProfileSet | None,
    alice_basis: str,
    include_stats: bool = True,
) -> ClassicalPayload:
    """Key material Alice sends after a run; ``det_abs`` is ``|a b|`` or ``|[a][b]|``."""
    branch = record.branches[alice_basis]
    kappas = tuple(profiles.kappas()) if profiles is not None else ()
    return ClassicalPayload(
        protocol=record.protocol,
        alice_basis=alice_basis,
        det_abs=channel.det_abs(),
        s=channel.p.s,
        channel_shape=record.shape,
        profile_kappas=kappas,
        measured=(branch.m0, branch.m1) if include_stats else None,
    )


@dataclass(frozen=True)
class Candidate:
    abs_alpha0: float
    abs_alpha1: float
    residual: float
    channel: tuple[float, float]


@dataclass(frozen=True)
class RecoveryResult:
    abs_alpha0: float
    abs_alpha1: float
    ambiguous: bool
    residual: float
    alternatives: tuple[Candidate, ...] = field(default=())


def max_det_abs(protocol: Protocol, p: DeformationParam) -> float:
    if protocol is Protocol.PLAIN:
        return 0.5
    return qnumber(math.sqrt(0.5), p) ** 2


def _channel_roots(det_abs: float, protocol: Protocol, p: DeformationParam) -> list[tuple[float, float]]:
    """Undeformed ``(a, b)`` with ``a^2 + b^2 = 1`` and determinant ``det_abs``."""
    if protocol is Protocol.PLAIN:
        disc = math.sqrt(max(0.0, 1.0 - 4.0 * det_abs * det_abs))
        small = math.sqrt(max(0.0, (1.0 - disc) / 2.0))
    else:

        def det_of(a: float) -> float:
            return qnumber(a, p) * qnumber(math.sqrt(max(0.0, 1.0 - a * a)), p)

        small = bisect_increasing(det_of, det_abs, 0.0, math.sqrt(0.5))
    big = math.sqrt(max(0.0, 1.0 - small * small))
    if small == big:
        return [(small, big)]
    return [(small, big), (big, small)]


def _info_ratio_inverse(ratio: float, p: DeformationParam) -> float:
    """Solve ``[y] / [sqrt(1 - y^2)] = ratio`` for ``y`` in ``[0, 1]``."""
    if math.isinf(ratio):
        return 1.0

    def f(y: float) -> float:
        other = qnumber(math.sqrt(max(0.0, 1.0 - y * y)), p)
        return math.inf if other == 0 else qnumber(y, p) / other

    return bisect_increasing(f, ratio, 0.0, 1.0)


def _candidate(m0: float, m1: float, payload: ClassicalPayload, ab: tuple[float, float]) -> Candidate | None:
    p = payload.param()
    protocol = payload.protocol
    if protocol is Protocol.PLAIN:
        chan = ab
        factor = 1.0
    else:
        chan = (qnumber(ab[0], p), qnumber(ab[1], p))
        # each factor is sqrt(P) q**kappa; only the exponent sum survives in the product
        factor = p.power(sum(payload.profile_kappas[:2])) / (chan[0] ** 2 + chan[1] ** 2)
        if protocol is Protocol.CASE2:
            factor *= p.power(sum(payload.profile_kappas[2:]))
    (i0, slot0), (i1, slot1) = bob_routing(payload.channel_shape, payload.alice_basis)
    if chan[slot0] == 0.0 or chan[slot1] == 0.0:
        return None
    weight = [0.0, 0.0]
    weight[i0] = 2.0 * m0 / (factor * chan[slot0] ** 2)
    weight[i1] = 2.0 * m1 / (factor * chan[slot1] ** 2)
    residual = abs(weight[0] + weight[1] - 1.0)
    if protocol is Protocol.CASE2:
        # weights are gamma*[alpha_i]^2; undo the deformation through their ratio
        w0, w1 = max(weight[0], 0.0), max(weight[1], 0.0)
        ratio = math.inf if w1 == 0.0 else math.sqrt(w0 / w1)
        a0 = _info_ratio_inverse(ratio, p)
        a1 = math.sqrt(max(0.0, 1.0 - a0 * a0))
    else:
        a0 = math.sqrt(min(max(weight[0], 0.0), 1.0))
        a1 = math.sqrt(min(max(weight[1], 0.0), 1.0))
    return Candidate(a0, a1, residual, ab)


def recover_amplitudes(m0: float, m1: float, payload: ClassicalPayload) -> RecoveryResult:
    """Recover ``|alpha0|, |alpha1|`` from Bob's statistics and the key."""
    if not (math.isfinite(m0) and math.isfinite(m1) and m0 >= 0 and m1 >= 0):
        raise DomainError("statistics must be finite and non-negative")
    payload.validate()
    p = payload.param()
    limit = max_det_abs(payload.protocol, p)
    if payload.det_abs > limit * (1.0 + 1e-12):
        raise ValidationError(f"det_abs {payload.det_abs!r} exceeds the feasible maximum {limit!r}")
    if payload.det_abs == 0.0:
        raise InconsistentStatisticsError("an unentangled channel carries no recoverable information")
    candidates = [c for ab in _channel_roots(payload.det_abs, payload.protocol, p) if (c := _candidate(m0, m1, payload, ab))]
    consistent = sorted((c for c in candidates if c.residual <= RESIDUAL_TOL), key=lambda c: c.residual)
    if not consistent:
        best = min((c.residual for c in candidates), default=math.inf)
        raise InconsistentStatisticsError(
            f"statistics are inconsistent with the key (best residual {best:.3e})"
        )
    best = consistent[0]
    distinct = [
        c for c in consistent[1:]
        if abs(c.abs_alpha0 - best.abs_alpha0) > RESIDUAL_TOL or abs(c.abs_alpha1 - best.abs_alpha1) > RESIDUAL_TOL
    ]
    return RecoveryResult(
        best.abs_alpha0,
        best.abs_alpha1,
        bool(distinct),
        best.residual,
        tuple(consistent) if distinct else (),
    )


def validate_key(m0: float, m1: float, payload: ClassicalPayload) -> bool:
    try:
        return recover_amplitudes(m0, m1, payload).residual <= RESIDUAL_TOL
    except (PayloadError, InconsistentStatisticsError, DomainError, RangeError):
        return False
