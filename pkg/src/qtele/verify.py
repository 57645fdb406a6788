"""Seeded property suites behind ``qtele verify``.

Each check yields one report line.  ``INFO`` lines document known
differences (such as the two fidelity definitions) and never fail the run.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable, Iterator

import numpy as np

from . import algebra, channel, circuit, deformation
from .algebra import AmplitudeMatrix
from .circuit import BASES, Protocol
from .qnum import UNDEFORMED, exact_tolerance, new_param, qnumber, qnumber_raw
from .sampling import mixed_amplitude_draws, near_maximal, random_amplitudes, random_setup

LIMIT_S = 1e-8
LIMIT_TOL = 1e-6


@dataclass(frozen=True)
class Line:
    status: str  # PASS, FAIL or INFO
    suite: str
    name: str
    detail: str = ""

    def render(self) -> str:
        text = f"{self.status:<4}  {self.suite}: {self.name}"
        return f"{text}  [{self.detail}]" if self.detail else text


def _check(suite: str, name: str, ok: bool, detail: str = "") -> Line:
    return Line("PASS" if ok else "FAIL", suite, name, detail)


def qnum_suite(rng: np.random.Generator, draws: int) -> Iterator[Line]:
    xs = rng.uniform(-10, 10, size=draws)
    ss = rng.uniform(1e-3, 1.0, size=draws)
    odd = max(abs(qnumber(-x, new_param(s)) + qnumber(x, new_param(s))) / max(1.0, abs(qnumber(x, new_param(s)))) for x, s in zip(xs, ss))
    yield _check("qnum", "odd function", odd <= exact_tolerance(), f"max rel err {odd:.3e}")
    raw = max(abs(qnumber(x, new_param(s)) - qnumber_raw(x, new_param(s))) / max(1.0, abs(qnumber(x, new_param(s)))) for x, s in zip(xs, ss))
    # the literal quotient loses digits to cancellation at small s; sinh form is the reference
    yield _check("qnum", "matches (q^x - q^-x)/(q - 1/q)", raw <= 1e-9, f"max rel err {raw:.3e}")
    cont = max(abs(qnumber(x, new_param(LIMIT_S)) - x) for x in xs)
    yield _check("qnum", "continuity at s -> 0", cont <= LIMIT_TOL, f"max err {cont:.3e}")
    mono = all(
        qnumber(lo, new_param(s)) < qnumber(hi, new_param(s))
        for lo, hi, s in ((min(a, b), max(a, b), s) for a, b, s in zip(xs, rng.uniform(-10, 10, size=draws), ss))
        if lo != hi
    )
    yield _check("qnum", "monotone in x", mono)


def deformation_suite(rng: np.random.Generator, draws: int) -> Iterator[Line]:
    kappas = rng.uniform(-3, 3, size=draws)
    f1 = max(abs(deformation.DeformationProfile(k)(UNDEFORMED) - 1.0) for k in kappas)
    yield _check("deformation", "profiles equal 1 at q = 1", f1 <= exact_tolerance(), f"max err {f1:.3e}")
    worst = 0.0
    for _ in range(draws):
        A = random_amplitudes(rng)
        p = new_param(float(rng.uniform(0, 1)))
        psi, beta = deformation.split_product(deformation.product_for_state(A, p), float(rng.uniform(-2, 2)))
        prof = deformation.ProfileSet(psi=psi, beta=beta)
        vec = algebra.deformed_bipartite_state(A, p, prof)
        worst = max(worst, abs(float(vec @ vec) - 1.0))
    yield _check("deformation", "bound profiles normalize deformed states", worst <= exact_tolerance(), f"max err {worst:.3e}")
    lim = max(
        abs(deformation.product_for_state(random_amplitudes(rng), new_param(LIMIT_S)) - 1.0) for _ in range(draws)
    )
    lim = max(lim, abs(deformation.product_for_bell_basis(new_param(LIMIT_S)) - 1.0))
    yield _check("deformation", "products -> 1 as s -> 0", lim <= LIMIT_TOL, f"max err {lim:.3e}")


def schmidt_rank_one(A: AmplitudeMatrix) -> bool:
    return float(np.linalg.svd(A.matrix(), compute_uv=False)[-1]) <= exact_tolerance()


def algebra_suite(rng: np.random.Generator, draws: int) -> Iterator[Line]:
    for s in (0.0, 0.3, 0.7, 1.0):
        checks = algebra.verify_generator_algebra(new_param(s))
        worst = max(c.max_error for c in checks)
        yield _check("algebra", f"generator algebra at s={s}", all(c.passed for c in checks), f"{len(checks)} identities, max err {worst:.3e}")

    mats = mixed_amplitude_draws(rng, draws)
    bad = sum(algebra.is_entangled(A) == schmidt_rank_one(A) for A in mats)
    yield _check("algebra", "determinant test vs Schmidt-rank oracle", bad == 0, f"{bad} disagreements / {len(mats)}")
    p = new_param(float(rng.uniform(0.05, 1.0)))
    bad = sum(
        algebra.q_unentangled_check(A, p) != (abs(algebra.q_amplitude_matrix(A, p).det()) <= exact_tolerance()) for A in mats
    )
    yield _check("algebra", "q-unentanglement equation vs det(A_q) = 0", bad == 0, f"{bad} disagreements at s={p.s:.4f}")

    pl = new_param(LIMIT_S)
    worst = 0.0
    for A in mats:
        worst = max(worst, float(np.max(np.abs(algebra.deformed_bipartite_state(A, pl) - A.vector()))))
    for i in range(4):
        worst = max(worst, float(np.max(np.abs(algebra.bell_q_state(i, pl) - algebra.bell_state(i)))))
        worst = max(worst, float(np.max(np.abs(algebra.bell_q_matrix(i, pl) - algebra.bell_matrix(i)))))
    yield _check("algebra", "q -> 1 limit of deformed constructors", worst <= LIMIT_TOL, f"max err {worst:.3e}")

    p1 = new_param(1.0)
    gram = np.array([[algebra.bell_q_state(i, p1) @ algebra.bell_q_state(j, p1) for j in range(4)] for i in range(4)])
    err = float(np.max(np.abs(gram - np.eye(4))))
    yield _check("algebra", "deformed Bell states orthonormal at s=1", err <= exact_tolerance(), f"max err {err:.3e}")

    worst = 0.0
    for _ in range(draws):
        a00 = float(rng.uniform(0.05, 0.95))
        A = AmplitudeMatrix(a00, 0.0, 0.0, math.sqrt(1 - a00 * a00))
        p = new_param(float(rng.uniform(0.0, 1.0)))
        mu = algebra.deformed_bipartite_state(A, p)
        back = algebra.bell_q_reconstruct(algebra.bell_q_decompose(mu, p), p)
        worst = max(worst, float(np.max(np.abs(back - mu))))
    yield _check("algebra", "Bell decomposition reconstructs input", worst <= exact_tolerance(), f"max err {worst:.3e}")


def circuit_suite(rng: np.random.Generator, draws: int) -> Iterator[Line]:
    for proto in Protocol:
        closed_err = prod_spread = prob_err = formula_err = 0.0
        for _ in range(draws):
            su = random_setup(rng, proto)
            rec = circuit.teleport(su.info, su.channel, su.profiles, proto)
            f = circuit.protocol_factors(su.info, su.channel, su.profiles, proto)
            prods = []
            for basis in BASES:
                r = circuit.closed_form_residual(f, su.channel.shape, basis)
                closed_err = max(closed_err, max(abs(x - y) for x, y in zip(r, rec.branches[basis].residual)))
                m0, m1 = circuit.bob_stats(rec, basis)
                prods.append(m0 * m1)
            prod_spread = max(prod_spread, max(prods) - min(prods), abs(prods[0] - circuit.stats_product_closed(f)))
            prob_err = max(prob_err, abs(sum(b.m0 + b.m1 for b in rec.branches.values()) - 1.0))
            nu = circuit.ChannelSpec(circuit.Shape.NU, su.channel.a, su.channel.b, su.channel.deformed, su.channel.p)
            rec_nu = circuit.teleport(su.info, nu, su.profiles, proto)
            formula = circuit.formula_stats(su.info, nu, su.profiles, proto)
            formula_err = max(formula_err, abs(formula[0] - rec_nu.branches["00"].m0), abs(formula[1] - rec_nu.branches["00"].m1))
        yield _check("circuit", f"{proto.value}: closed-form residuals vs simulation", closed_err <= exact_tolerance(), f"max err {closed_err:.3e}")
        yield _check("circuit", f"{proto.value}: printed M0/M1 formulas vs simulation", formula_err <= exact_tolerance(), f"max err {formula_err:.3e}")
        yield _check("circuit", f"{proto.value}: M0*M1 invariant across Alice bases", prod_spread <= exact_tolerance(), f"max spread {prod_spread:.3e}")
        yield _check("circuit", f"{proto.value}: total probability 1", prob_err <= exact_tolerance(), f"max err {prob_err:.3e}")

    worst = 0.0
    for _ in range(draws):
        su = random_setup(rng, Protocol.PLAIN)
        plain = circuit.teleport(su.info, su.channel, None, Protocol.PLAIN)
        ch = replace(su.channel, deformed=True, p=new_param(LIMIT_S))
        for proto in (Protocol.CASE1, Protocol.CASE2):
            prof = circuit.default_profiles(su.info, ch, proto, kappa=float(rng.uniform(-2, 2)))
            rec = circuit.teleport(su.info, ch, prof, proto)
            worst = max(worst, float(np.max(np.abs(np.array(rec.final_state) - plain.final_state))))
    yield _check("circuit", "case1/case2 -> plain as s -> 0", worst <= LIMIT_TOL, f"max err {worst:.3e}")

    su = random_setup(rng, Protocol.CASE2)
    same = circuit.teleport(su.info, su.channel, su.profiles, "case2") == circuit.teleport(su.info, su.channel, su.profiles, "case2")
    yield _check("circuit", "teleport is deterministic", same)

    yield from fidelity_lines(rng, max(1, min(draws, 50)))


def fidelity_lines(rng: np.random.Generator, draws: int) -> Iterator[Line]:
    max_ok = min_value_ok = min_stationary = min_sign = True
    worst_grad = 0.0
    for _ in range(draws):
        e = circuit.fidelity_extrema(float(rng.uniform(0.05, 0.95)))
        for pt in e.points:
            if pt.claimed == "max":
                max_ok &= abs(pt.fidelity - e.f_max) <= exact_tolerance() and pt.stationary and pt.sign_agrees
            else:
                min_value_ok &= abs(pt.fidelity - e.f_min) <= exact_tolerance()
                min_stationary &= pt.stationary
                min_sign &= pt.sign_agrees
                worst_grad = max(worst_grad, abs(pt.fd_gradient))
    yield _check("fidelity", "F_max = 1 at a00 = +-alpha0 (stationary, concave)", max_ok)
    yield _check("fidelity", "F = 4|DetA|^2 at a00 = +-alpha1", min_value_ok)
    yield _check("fidelity", "a00 = +-alpha1 is a critical point (|dF/da00| < 1e-6)", min_stationary, f"max |dF/da00| {worst_grad:.3e}")
    yield _check("fidelity", "second-derivative sign at a00 = +-alpha1 matches 2(2a0^2-1)^2/a0^2 > 0", min_sign)
    e = circuit.fidelity_extrema(math.sqrt(0.5))
    yield _check("fidelity", "maximal channel gives F = 1", abs(e.f_min - 1.0) <= exact_tolerance() and abs(e.f_max - 1.0) <= exact_tolerance())

    for alpha0, a00 in ((0.6, 0.6), (0.6, 0.8), (math.sqrt(0.5), math.sqrt(0.5))):
        info = circuit.InfoQubit.from_alpha0(alpha0)
        ch = circuit.ChannelSpec.from_a00(a00)
        closed = circuit.fidelity_closed(info, ch)
        overlap = circuit.fidelity_overlap(circuit.teleport(info, ch))
        yield Line(
            "INFO", "fidelity", f"definitions at alpha0={alpha0:.6g}, a00={a00:.6g}",
            f"closed (a00 alpha0 + a11 alpha1)^2 = {closed:.12g}; literal |<zeta_0|zeta_f>|^2 = {overlap:.12g}",
        )


def perturbed_payloads(payload: channel.ClassicalPayload, factor: float) -> Iterator[tuple[str, channel.ClassicalPayload]]:
    """Copies of ``payload`` with one key field scaled by ``factor``."""
    yield "det_abs", replace(payload, det_abs=payload.det_abs * factor)
    if payload.protocol is Protocol.PLAIN:
        return
    yield "s", replace(payload, s=payload.s * factor)
    for i in range(len(payload.profile_kappas)):
        ks = list(payload.profile_kappas)
        ks[i] *= factor
        yield f"kappa[{i}]", replace(payload, profile_kappas=tuple(ks))


def channel_suite(rng: np.random.Generator, draws: int) -> Iterator[Line]:
    codec_ok = True
    worst = 0.0
    sign_ok = True
    tried = failed = 0
    for k in range(draws):
        proto = list(Protocol)[k % 3]
        su = random_setup(rng, proto)
        rec = circuit.teleport(su.info, su.channel, su.profiles, proto)
        payload = channel.make_payload(rec, su.channel, su.profiles, su.basis)
        codec_ok &= channel.decode(channel.encode(payload)) == payload
        m0, m1 = payload.measured
        res = channel.recover_amplitudes(m0, m1, payload)
        cands = [(res.abs_alpha0, res.abs_alpha1)] + [(c.abs_alpha0, c.abs_alpha1) for c in res.alternatives]
        worst = max(worst, min(max(abs(a - su.info.alpha0), abs(b - su.info.alpha1)) for a, b in cands))

        flipped = circuit.InfoQubit(-su.info.alpha0, -su.info.alpha1)
        ks = payload.profile_kappas
        prof = circuit.default_profiles(flipped, su.channel, proto, *(ks[0::2] if ks else ()))
        m0f, m1f = circuit.bob_stats(circuit.teleport(flipped, su.channel, prof, proto), su.basis)
        rf = channel.recover_amplitudes(m0f, m1f, replace(payload, measured=(m0f, m1f)))
        sign_ok &= abs(rf.abs_alpha0 - res.abs_alpha0) <= 1e-9 and abs(rf.abs_alpha1 - res.abs_alpha1) <= 1e-9

        if near_maximal(su.channel.a, 0.02):
            continue
        factor = 1.05 if rng.random() < 0.5 else 0.95
        for _, bad in perturbed_payloads(payload, factor):
            tried += 1
            failed += not channel.validate_key(m0, m1, bad)
    yield _check("channel", "payload encode/decode identity", codec_ok)
    yield _check("channel", "recovered magnitudes match truth", worst <= 1e-9, f"max err {worst:.3e}")
    yield _check("channel", "recovery is blind to a global sign", sign_ok)
    rate = failed / tried if tried else 1.0
    yield _check("channel", "single-field 5% key perturbation rejected", rate >= 0.95, f"{failed}/{tried} rejected")


SUITES: tuple[Callable[[np.random.Generator, int], Iterator[Line]], ...] = (
    qnum_suite,
    deformation_suite,
    algebra_suite,
    circuit_suite,
    channel_suite,
)


def run_all(seed: int, draws: int) -> list[Line]:
    if draws < 1:
        raise ValueError("draws must be at least 1")
    rng = np.random.default_rng(seed)
    lines: list[Line] = []
    for suite in SUITES:
        lines.extend(suite(rng, draws))
    return lines
