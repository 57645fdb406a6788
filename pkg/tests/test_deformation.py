import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qtele.algebra import AmplitudeMatrix, deformed_bipartite_state
from qtele.deformation import (
    DeformationProfile,
    ProfileSet,
    eval_profile,
    gamma_for_info,
    product_for_bell_basis,
    product_for_state,
    split_product,
)
from qtele.errors import ConfigurationError, DomainError
from qtele.qnum import new_param

S1 = new_param(1.0)
# 40-digit mpmath evaluations at s = 1
BRACKET_HALF = 0.6530993580310720578  # [1/sqrt2]
BRACKET_06 = 0.5417400744584405999
BRACKET_08 = 0.7557054800412364094
BELL_PRODUCT = 1.1722263800025680454
PRODUCT_06_08 = 1.1566402218191322653

BELL0 = AmplitudeMatrix(math.sqrt(0.5), 0.0, 0.0, math.sqrt(0.5))
DIAG = AmplitudeMatrix(0.6, 0.0, 0.0, 0.8)


def test_eval_examples():
    assert eval_profile(DeformationProfile(2), new_param(0)) == 1
    assert eval_profile(DeformationProfile(1), S1) == pytest.approx(math.e, rel=1e-15)
    assert eval_profile(DeformationProfile(-1), S1) == pytest.approx(1 / math.e, rel=1e-15)


@given(st.floats(-5, 5), st.floats(0, 1))
def test_profile_positive_and_unit_at_q1(kappa, s):
    prof = DeformationProfile(kappa)
    assert prof(new_param(0)) == 1.0
    assert prof(new_param(s)) > 0


def test_profile_rejects_bad_parameters():
    with pytest.raises(DomainError):
        DeformationProfile(1.0, scale=0.0)
    with pytest.raises(DomainError):
        DeformationProfile(math.nan)
    with pytest.raises(DomainError):
        DeformationProfile(1.0, kind="exp")


class TestProducts:
    def test_undeformed_product_is_one(self):
        assert product_for_state(DIAG, new_param(0)) == pytest.approx(1.0, abs=1e-15)

    def test_bell_product(self):
        assert product_for_state(BELL0, S1) == pytest.approx(BELL_PRODUCT, rel=1e-13)
        assert product_for_bell_basis(S1) == pytest.approx(BELL_PRODUCT, rel=1e-13)
        assert 1 / (2 * BRACKET_HALF**2) == pytest.approx(BELL_PRODUCT, rel=1e-15)

    def test_diagonal_product(self):
        assert product_for_state(DIAG, S1) == pytest.approx(PRODUCT_06_08, rel=1e-13)
        assert 1 / (BRACKET_06**2 + BRACKET_08**2) == pytest.approx(PRODUCT_06_08, rel=1e-15)

    @pytest.mark.parametrize(
        "vec",
        [(1, 0, 0, 1), (0, 1, 1, 0), (0, 1, -1, 0), (1, 0, 0, -1)],
    )
    def test_bell_basis_consistency(self, vec):
        A = AmplitudeMatrix.normalized(vec)
        for s in (0.0, 0.4, 1.0):
            p = new_param(s)
            assert product_for_bell_basis(p) == pytest.approx(product_for_state(A, p), rel=1e-14)

    def test_bell_product_limit(self):
        assert product_for_bell_basis(new_param(0)) == pytest.approx(1.0, abs=1e-15)
        assert abs(product_for_bell_basis(new_param(1e-8)) - 1) <= 1e-6

    def test_gamma(self):
        assert gamma_for_info(0.6, 0.8, new_param(0)) == pytest.approx(1.0, abs=1e-15)
        assert gamma_for_info(0.6, 0.8, S1) == pytest.approx(PRODUCT_06_08, rel=1e-13)
        for s in (0.0, 0.5, 1.0):
            assert gamma_for_info(1.0, 0.0, new_param(s)) == pytest.approx(1.0, abs=1e-15)

    def test_degenerate_state(self):
        from qtele.deformation import product_of_squares

        with pytest.raises(DomainError):
            product_of_squares((0.0, 0.0), S1)


class TestSplit:
    def test_trivial_split(self):
        f, g = split_product(1.0, 0.0)
        for s in (0.0, 0.5, 1.0):
            assert f(new_param(s)) == g(new_param(s)) == 1.0

    @given(st.floats(0.01, 10), st.floats(-3, 3), st.floats(0, 1))
    def test_product_preserved(self, product, kappa, s):
        f, g = split_product(product, kappa)
        p = new_param(s)
        assert f(p) * g(p) == pytest.approx(product, rel=1e-14)

    def test_example(self):
        f, g = split_product(1.1847, 0.3)
        assert f(S1) == pytest.approx(1.4692393075406865, rel=1e-14)
        assert g(S1) == pytest.approx(0.8063356281850586, rel=1e-14)
        assert f(S1) * g(S1) == pytest.approx(1.1847, rel=1e-14)

    @pytest.mark.parametrize("bad", [0.0, -1.0, math.inf])
    def test_rejects_bad_product(self, bad):
        with pytest.raises(DomainError):
            split_product(bad, 0.1)


@given(
    st.lists(st.floats(-1, 1), min_size=4, max_size=4).filter(lambda v: sum(x * x for x in v) > 1e-3),
    st.floats(0, 1),
    st.floats(-2, 2),
)
def test_bound_profiles_normalize(vec, s, kappa):
    A = AmplitudeMatrix.normalized(vec)
    p = new_param(s)
    psi, beta = split_product(product_for_state(A, p), kappa)
    state = deformed_bipartite_state(A, p, ProfileSet(psi=psi, beta=beta))
    assert abs(float(state @ state) - 1.0) <= 1e-12


def test_unbound_or_violating_profiles():
    with pytest.raises(ConfigurationError):
        ProfileSet().omega_delta(S1)
    bad = ProfileSet(psi=DeformationProfile(0.0), beta=DeformationProfile(0.0))
    with pytest.raises(ConfigurationError):
        deformed_bipartite_state(DIAG, S1, bad)


def test_products_vanish_in_limit():
    rng = np.random.default_rng(3)
    p = new_param(1e-8)
    for _ in range(50):
        A = AmplitudeMatrix.normalized(rng.normal(size=4))
        assert abs(product_for_state(A, p) - 1) <= 1e-6
