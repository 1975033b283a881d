from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from eal.algebra import (
    EISENSTEIN_ALGEBRA,
    HAMILTON,
    OMEGA,
    AlgebraParams,
    EisensteinInteger,
    GammaElement,
    GaussianInteger,
    Quaternion,
    conjugate,
    embed_eisenstein,
    embed_gamma,
    embed_gaussian,
    gamma_to_quaternion,
    left_mult_matrix,
    quaternion_mul,
    quaternion_to_gamma,
    reduced_norm,
    reduced_trace,
)

ONE = Quaternion(1)
I = Quaternion(0, 1)
J = Quaternion(0, 0, 1)
IJ = Quaternion(0, 0, 0, 1)

rationals = st.fractions(max_denominator=12).filter(lambda f: abs(f) <= 50)
quaternions = st.builds(Quaternion, rationals, rationals, rationals, rationals)
params = st.sampled_from([HAMILTON, EISENSTEIN_ALGEBRA])
eis = st.builds(EisensteinInteger, st.integers(-30, 30), st.integers(-30, 30))
gammas = st.builds(GammaElement, eis, eis)


def test_defining_relations():
    assert quaternion_mul(I, J, EISENSTEIN_ALGEBRA) == IJ
    assert quaternion_mul(J, I, EISENSTEIN_ALGEBRA) == -IJ
    assert quaternion_mul(I, I, HAMILTON) == Quaternion(-1)
    assert quaternion_mul(J, J, EISENSTEIN_ALGEBRA) == Quaternion(-3)
    # (ij)^2 = -ab
    assert quaternion_mul(IJ, IJ, EISENSTEIN_ALGEBRA) == Quaternion(-3)


def test_params_reject_zero():
    with pytest.raises(ValueError):
        AlgebraParams(0, -1)
    with pytest.raises(ValueError):
        AlgebraParams(-1, 0)


def test_rejects_float_coordinates():
    with pytest.raises(TypeError):
        Quaternion(0.5)


def test_conjugate_examples():
    assert conjugate(ONE) == ONE
    assert conjugate(I) == Quaternion(0, -1)
    q = Quaternion(1, 2, 3, 4)
    assert conjugate(conjugate(q)) == q


def test_reduced_norm_examples():
    assert reduced_norm(ONE, EISENSTEIN_ALGEBRA) == 1
    assert reduced_norm(J, EISENSTEIN_ALGEBRA) == 3
    q = Quaternion(1, 1, 1, 1)
    assert reduced_norm(q, EISENSTEIN_ALGEBRA) == 8
    assert quaternion_mul(q, conjugate(q), EISENSTEIN_ALGEBRA) == Quaternion(8)


def test_reduced_trace_examples():
    assert reduced_trace(ONE) == 2
    assert reduced_trace(I) == 0
    assert reduced_trace(Quaternion(Fraction(3, 2), 1, 1, 0)) == 3


def test_left_mult_matrix_examples():
    np.testing.assert_allclose(left_mult_matrix(ONE, EISENSTEIN_ALGEBRA), np.eye(2))
    m = left_mult_matrix(J, EISENSTEIN_ALGEBRA)
    s3 = np.sqrt(3.0)
    np.testing.assert_allclose(m, np.diag([1j * s3, -1j * s3]), atol=1e-15)
    assert np.linalg.det(m) == pytest.approx(3.0)
    m = left_mult_matrix(I, HAMILTON)
    np.testing.assert_allclose(m, [[0, -1], [1, 0]])
    assert np.linalg.det(m) == pytest.approx(1.0)


def test_left_mult_matrix_rejects_split_algebra():
    with pytest.raises(ValueError):
        left_mult_matrix(ONE, AlgebraParams(-1, 3))


def test_embed_scalars():
    assert embed_eisenstein(EisensteinInteger(0, 1)) == pytest.approx(0.5 + 0.8660254037844386j)
    assert embed_eisenstein(EisensteinInteger(1, 0)) == 1
    z = embed_eisenstein(EisensteinInteger(2, -1))
    assert z == pytest.approx(1.5 - 0.8660254037844386j)
    assert abs(z) ** 2 == pytest.approx(3.0)
    assert EisensteinInteger(2, -1).norm == 3
    assert embed_gaussian(GaussianInteger(2, -3)) == 2 - 3j


def test_gamma_to_quaternion_examples():
    one, zero, w = EisensteinInteger(1, 0), EisensteinInteger(0, 0), EisensteinInteger(0, 1)
    assert gamma_to_quaternion(GammaElement(one, zero)) == ONE
    half = Fraction(1, 2)
    assert gamma_to_quaternion(GammaElement(w, zero)) == Quaternion(half, 0, half, 0)
    assert gamma_to_quaternion(GammaElement(zero, w)) == Quaternion(0, half, 0, half)


def test_embed_gamma_examples():
    one, zero, w = EisensteinInteger(1, 0), EisensteinInteger(0, 0), EisensteinInteger(0, 1)
    np.testing.assert_allclose(embed_gamma(GammaElement(one, zero)), np.eye(2))
    m = embed_gamma(GammaElement(w, zero))
    np.testing.assert_allclose(m, np.diag([OMEGA, OMEGA.conjugate()]))
    assert np.linalg.det(m) == pytest.approx(1.0)
    g = GammaElement(w, one)
    assert np.linalg.det(embed_gamma(g)) == pytest.approx(2.0)
    assert reduced_norm(gamma_to_quaternion(g), EISENSTEIN_ALGEBRA) == 2


def test_quaternion_to_gamma_rejects_non_order_elements():
    with pytest.raises(ValueError):
        quaternion_to_gamma(Quaternion(Fraction(1, 2)))


def test_eisenstein_ring_arithmetic():
    w = EisensteinInteger(0, 1)
    # w^2 = w - 1 and w * conj(w) = 1
    assert w * w == EisensteinInteger(-1, 1)
    assert w * w.conj() == EisensteinInteger(1, 0)
    a, b = EisensteinInteger(3, -2), EisensteinInteger(-1, 4)
    assert complex(a * b) == pytest.approx(complex(a) * complex(b))
    assert (a * b).norm == a.norm * b.norm


@settings(max_examples=300)
@given(quaternions, quaternions, params)
def test_norm_multiplicative(q1, q2, prm):
    assert reduced_norm(quaternion_mul(q1, q2, prm), prm) == reduced_norm(q1, prm) * reduced_norm(q2, prm)


@settings(max_examples=300)
@given(quaternions, quaternions, params)
def test_conjugation_reverses_products(q1, q2, prm):
    lhs = conjugate(quaternion_mul(q1, q2, prm))
    assert lhs == quaternion_mul(conjugate(q2), conjugate(q1), prm)


@settings(max_examples=200)
@given(quaternions, quaternions, quaternions, params)
def test_associative(q1, q2, q3, prm):
    a = quaternion_mul(quaternion_mul(q1, q2, prm), q3, prm)
    b = quaternion_mul(q1, quaternion_mul(q2, q3, prm), prm)
    assert a == b


@settings(max_examples=200)
@given(quaternions, params)
def test_definite_norm_positive(q, prm):
    if q != Quaternion():
        assert reduced_norm(q, prm) > 0


@settings(max_examples=200)
@given(quaternions, quaternions, params)
def test_left_mult_is_homomorphism(q1, q2, prm):
    m12 = left_mult_matrix(quaternion_mul(q1, q2, prm), prm)
    m1 = left_mult_matrix(q1, prm)
    m2 = left_mult_matrix(q2, prm)
    tol = 1e-9 * (1 + np.linalg.norm(m1) * np.linalg.norm(m2))
    assert np.max(np.abs(m12 - m1 @ m2)) <= tol


@settings(max_examples=300)
@given(gammas)
def test_gamma_norm_and_embedding(g):
    q = gamma_to_quaternion(g)
    x, z = g.x0.u, g.x0.v
    y, t = g.x1.u, g.x1.v
    assert reduced_norm(q, EISENSTEIN_ALGEBRA) == (x * x + x * z + z * z) + (y * y + y * t + t * t)
    assert quaternion_to_gamma(q) == g
    np.testing.assert_allclose(embed_gamma(g), left_mult_matrix(q, EISENSTEIN_ALGEBRA), atol=1e-9)
    m = embed_gamma(g)
    assert m[1, 1] == m[0, 0].conjugate()
    assert m[0, 1] == -m[1, 0].conjugate()


@settings(max_examples=300)
@given(gammas, gammas)
def test_gamma_closed_under_products(g1, g2):
    q = quaternion_mul(gamma_to_quaternion(g1), gamma_to_quaternion(g2), EISENSTEIN_ALGEBRA)
    g = quaternion_to_gamma(q)
    assert gamma_to_quaternion(g) == q
    assert g.norm == g1.norm * g2.norm


@settings(max_examples=200)
@given(eis)
def test_i_twists_scalars_by_conjugation(x):
    # i x = conj(x) i for x in Q(sqrt(-3)) embedded as x.u + x.v (1 + j)/2
    prm = EISENSTEIN_ALGEBRA
    as_q = gamma_to_quaternion(GammaElement(x, EisensteinInteger(0, 0)))
    conj_q = gamma_to_quaternion(GammaElement(x.conj(), EisensteinInteger(0, 0)))
    assert quaternion_mul(I, as_q, prm) == quaternion_mul(conj_q, I, prm)
