"""Amplitude matrices, q-deformed Bell-like states and their matrix algebra.

State vectors are real numpy arrays over the computational basis with
qubit 0 as the most significant bit, so a two-qubit vector is ordered
``(|00>, |01>, |10>, |11>)``.  Complex numbers appear only in the 2x2
generator matrices.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product

import numpy as np

from .deformation import (
    SQRT1_2,
    DeformationProfile,
    ProfileSet,
    check_product,
    product_for_bell_basis,
    product_for_state,
)
from .errors import DomainError, RangeError, UnsupportedFormError
from .qnum import UNDEFORMED, DeformationParam, exact_tolerance, qnumber

PureState = np.ndarray
GeneratorMatrix = np.ndarray

SIGMA = {
    0: np.eye(2, dtype=complex),
    1: np.array([[0, 1], [1, 0]], dtype=complex),
    2: np.array([[0, -1j], [1j, 0]], dtype=complex),
    3: np.array([[1, 0], [0, -1]], dtype=complex),
}

# sign pattern of the nonzero amplitudes of each Bell state over |00>,|01>,|10>,|11>
_BELL_PATTERN = {
    0: (1, 0, 0, 1),
    1: (0, 1, 1, 0),
    2: (0, 1, -1, 0),
    3: (1, 0, 0, -1),
}


@dataclass(frozen=True)
class AmplitudeMatrix:
    a00: float
    a01: float
    a10: float
    a11: float

    def __post_init__(self):
        vals = self.entries()
        if not all(math.isfinite(v) for v in vals):
            raise DomainError("amplitudes must be finite")
        norm = sum(v * v for v in vals)
        if abs(norm - 1.0) > max(exact_tolerance(), 1e-12):
            raise DomainError(f"amplitudes are not normalized (sum of squares {norm!r})")

    @classmethod
    def from_vector(cls, v) -> "AmplitudeMatrix":
        a00, a01, a10, a11 = (float(x) for x in v)
        return cls(a00, a01, a10, a11)

    @classmethod
    def normalized(cls, v) -> "AmplitudeMatrix":
        v = np.asarray(v, dtype=float)
        return cls.from_vector(v / np.linalg.norm(v))

    def entries(self) -> tuple[float, float, float, float]:
        return (self.a00, self.a01, self.a10, self.a11)

    def matrix(self) -> np.ndarray:
        return np.array([[self.a00, self.a01], [self.a10, self.a11]])

    def vector(self) -> PureState:
        return np.array(self.entries())

    def det(self) -> float:
        return self.a00 * self.a11 - self.a01 * self.a10


@dataclass(frozen=True)
class QAmplitudeMatrix:
    """``scale * [[a00], [a01]], [[a10], [a11]]]`` with ``scale = sqrt(psi*beta)``."""

    scale: float
    entries: tuple[float, float, float, float]

    def matrix(self) -> np.ndarray:
        return self.scale * np.array(self.entries).reshape(2, 2)

    def det(self) -> float:
        d00, d01, d10, d11 = self.entries
        return self.scale**2 * (d00 * d11 - d01 * d10)

    def norm_squared(self) -> float:
        return self.scale**2 * sum(e * e for e in self.entries)


def _state_scale(
    A: AmplitudeMatrix, p: DeformationParam, profiles: ProfileSet | None
) -> float:
    required = product_for_state(A, p)
    if profiles is None:
        return math.sqrt(required)
    actual = profiles.psi_beta(p)
    check_product("psi*beta", actual, required)
    return math.sqrt(actual)


def q_amplitude_matrix(
    A: AmplitudeMatrix, p: DeformationParam, profiles: ProfileSet | None = None
) -> QAmplitudeMatrix:
    entries = tuple(qnumber(a, p) for a in A.entries())
    return QAmplitudeMatrix(_state_scale(A, p, profiles), entries)


def is_entangled(A: AmplitudeMatrix) -> bool:
    return abs(A.det()) > exact_tolerance()


def _check_index(i: int) -> None:
    if i not in (0, 1, 2, 3):
        raise RangeError(f"Bell index must be 0..3, got {i!r}")


def bell_matrix(i: int) -> GeneratorMatrix:
    """``I, sigma1, i*sigma2, sigma3`` divided by sqrt(2)."""
    _check_index(i)
    m = 1j * SIGMA[2] if i == 2 else SIGMA[i]
    return m * SQRT1_2


def bell_q_prefactor(p: DeformationParam) -> float:
    """``sqrt(psi*beta) * [1/sqrt2]`` with the Bell-basis product bound."""
    return math.sqrt(product_for_bell_basis(p)) * qnumber(SQRT1_2, p)


def bell_q_matrix(i: int, p: DeformationParam) -> GeneratorMatrix:
    _check_index(i)
    m = 1j * SIGMA[2] if i == 2 else SIGMA[i]
    return bell_q_prefactor(p) * m


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a


def anticommutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b + b @ a


def levi_civita(i: int, j: int, k: int) -> int:
    if len({i, j, k}) < 3:
        return 0
    return 1 if (i, j, k) in ((1, 2, 3), (2, 3, 1), (3, 1, 2)) else -1


def _third(i: int, j: int) -> int:
    return ({1, 2, 3} - {i, j}).pop() if i != j else 0


@dataclass(frozen=True)
class IdentityCheck:
    name: str
    max_error: float
    passed: bool


def _compare(name: str, lhs: np.ndarray, rhs: np.ndarray, tol: float) -> IdentityCheck:
    err = float(np.max(np.abs(lhs - rhs)))
    return IdentityCheck(name, err, err <= tol)


def _anti_sign(i: int, j: int) -> int:
    exponent = ((i**3 + j**3) - (i + j)) // 4
    return -1 if exponent % 2 else 1


def _su2_checks(label: str, primed: dict[int, np.ndarray], tol: float) -> list[IdentityCheck]:
    out = []
    for i, j in product((1, 2, 3), repeat=2):
        k = _third(i, j)
        rhs = 2j * levi_civita(i, j, k) * primed[k] if k else np.zeros((2, 2))
        out.append(_compare(f"{label} [A'{i},A'{j}] = 2i eps A'k", commutator(primed[i], primed[j]), rhs, tol))
        rhs = 2.0 * (i == j) * np.eye(2)
        out.append(_compare(f"{label} {{A'{i},A'{j}}} = 2 delta", anticommutator(primed[i], primed[j]), rhs, tol))
    return out


def verify_generator_algebra(p: DeformationParam | None = None) -> list[IdentityCheck]:
    """Check the commutation/anticommutation identities of the Bell matrices.

    Without ``p`` only the undeformed relations and their SU(2) rescaling are
    checked; with ``p`` the deformed relations and deformed rescaling are
    added.
    """
    tol = exact_tolerance()
    checks: list[IdentityCheck] = []
    A = {i: bell_matrix(i) for i in (1, 2, 3)}
    for i, j in product((1, 2, 3), repeat=2):
        k = _third(i, j)
        sign = (-1) ** (i + j)
        rhs = math.sqrt(2) * sign * levi_civita(i, j, k) * A[k] if k else np.zeros((2, 2))
        checks.append(_compare(f"[A{i},A{j}] = sqrt2 (-1)^(i+j) eps A_k", commutator(A[i], A[j]), rhs, tol))
        rhs = _anti_sign(i, j) * (i == j) * np.eye(2)
        checks.append(_compare(f"{{A{i},A{j}}} = (-1)^e delta", anticommutator(A[i], A[j]), rhs, tol))
    primed = {1: math.sqrt(2) * A[1], 2: math.sqrt(2) * np.exp(-1j * math.pi / 2) * A[2], 3: math.sqrt(2) * A[3]}
    checks += _su2_checks("undeformed", primed, tol)
    if p is None:
        return checks

    c = bell_q_prefactor(p)
    psi_beta = product_for_bell_basis(p)
    half = qnumber(SQRT1_2, p)
    Aq = {i: bell_q_matrix(i, p) for i in (1, 2, 3)}
    for i, j in product((1, 2, 3), repeat=2):
        k = _third(i, j)
        sign = (-1) ** (i + j)
        rhs = sign * math.sqrt(psi_beta) * half * 2 * levi_civita(i, j, k) * Aq[k] if k else np.zeros((2, 2))
        checks.append(_compare(f"s={p.s} [A{i}q,A{j}q]", commutator(Aq[i], Aq[j]), rhs, tol))
        # the squared [1/sqrt2] is what reduces to the undeformed identity at q = 1
        rhs = _anti_sign(i, j) * psi_beta * half**2 * 2 * (i == j) * np.eye(2)
        checks.append(_compare(f"s={p.s} {{A{i}q,A{j}q}}", anticommutator(Aq[i], Aq[j]), rhs, tol))
    primed_q = {1: Aq[1] / c, 2: np.exp(-1j * math.pi / 2) * Aq[2] / c, 3: Aq[3] / c}
    checks += _su2_checks(f"s={p.s} deformed", primed_q, tol)
    return checks


def deformed_bipartite_state(
    A: AmplitudeMatrix, p: DeformationParam, profiles: ProfileSet | None = None
) -> PureState:
    qa = q_amplitude_matrix(A, p, profiles)
    return qa.scale * np.array(qa.entries)


def q_unentangled_check(A: AmplitudeMatrix, p: DeformationParam) -> bool:
    """Unentanglement of the deformed state, tested as
    ``(q^a00 - q^-a00)(q^a11 - q^-a11) == (q^a01 - q^-a01)(q^a10 - q^-a10)``."""
    if p.s == 0.0:
        raise RangeError("the q-unentanglement test needs s > 0")

    def diff(x: float) -> float:
        return p.power(x) - p.power(-x)

    lhs = diff(A.a00) * diff(A.a11)
    rhs = diff(A.a01) * diff(A.a10)
    return abs(lhs - rhs) <= exact_tolerance() * max(1.0, abs(lhs), abs(rhs))


def bell_state(i: int) -> PureState:
    _check_index(i)
    return np.array(_BELL_PATTERN[i], dtype=float) * SQRT1_2


def bell_q_state(i: int, p: DeformationParam) -> PureState:
    _check_index(i)
    return bell_q_prefactor(p) * np.array(_BELL_PATTERN[i], dtype=float)


def bell_q_coefficients(a00: float, a11: float, p: DeformationParam) -> tuple[float, float, float, float]:
    """Expansion coefficients of ``[a00]|00> + [a11]|11>`` in the deformed Bell basis,
    both sides sharing the Bell-basis prefactor."""
    half = qnumber(SQRT1_2, p)
    d00, d11 = qnumber(a00, p), qnumber(a11, p)
    return ((d00 + d11) / (2 * half), 0.0, 0.0, (d00 - d11) / (2 * half))


def bell_q_decompose(mu: PureState, p: DeformationParam) -> tuple[float, float, float, float]:
    """Coefficients ``b_i`` with ``sum b_i * bell_q_state(i, p) == mu`` exactly.

    ``mu`` must be of the form ``c00|00> + c11|11>``.
    """
    mu = np.asarray(mu, dtype=float)
    if mu.shape != (4,):
        raise UnsupportedFormError("expected a two-qubit state vector")
    tol = exact_tolerance()
    if abs(mu[1]) > tol or abs(mu[2]) > tol:
        raise UnsupportedFormError("state has weight on |01> or |10>")
    if abs(mu[0]) <= tol or abs(mu[3]) <= tol:
        raise UnsupportedFormError("both |00> and |11> amplitudes must be nonzero")
    c = bell_q_prefactor(p)
    return ((mu[0] + mu[3]) / (2 * c), 0.0, 0.0, (mu[0] - mu[3]) / (2 * c))


def bell_q_reconstruct(coeffs, p: DeformationParam) -> PureState:
    return sum(b * bell_q_state(i, p) for i, b in enumerate(coeffs))


def js_qubit(
    n1: int,
    deformed: bool = False,
    p: DeformationParam = UNDEFORMED,
    profile: DeformationProfile | None = None,
) -> PureState:
    """Qubit built from two oscillators with one excitation between them.

    ``n1 = 1`` (excitation in oscillator 1) is ``|0>``, ``n1 = 0`` is ``|1>``.
    On a single excitation the deformed creation operator reduces to the
    scalar ``sqrt(f(q))``, with ``f`` the bound profile.
    """
    if n1 not in (0, 1):
        raise RangeError(f"n1 must be 0 or 1, got {n1!r}")
    vec = np.array([1.0, 0.0]) if n1 == 1 else np.array([0.0, 1.0])
    if not deformed:
        return vec
    f = profile(p) if profile is not None else 1.0
    return math.sqrt(f) * vec
