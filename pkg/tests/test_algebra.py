"""Quaternion arithmetic, structural sets, and frame coordinates."""
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fueterlab.algebra import (ComplexQuaternion, Quaternion, StructuralSet, psi_coords,
                               psi_scalar_product, psi_synth, qinverse, qmul,
                               scalar_product, validate_structural_set)
from fueterlab.errors import NotOrthonormalError, ZeroDivisorError

ONE = Quaternion(1, 0, 0, 0)
I = Quaternion(0, 1, 0, 0)
J = Quaternion(0, 0, 1, 0)
K = Quaternion(0, 0, 0, 1)

finite = st.floats(min_value=-10, max_value=10, allow_nan=False, allow_infinity=False)
quaternions = st.builds(Quaternion, finite, finite, finite, finite)


def test_multiplication_table():
    assert qmul(I, J) == K
    assert qmul(J, I) == -K
    assert qmul(J, K) == I
    assert qmul(K, I) == J
    for unit in (I, J, K):
        assert qmul(unit, unit) == Quaternion(-1, 0, 0, 0)


def test_unit_element():
    q = Quaternion(0.3, -1.2, 4.0, 2.5)
    assert qmul(ONE, q) == q
    assert qmul(q, ONE) == q


def test_norm_via_conjugate():
    q = Quaternion(1, 2, 3, 4)
    prod = qmul(q, q.conj())
    assert prod == Quaternion(30, 0, 0, 0)  # 1 + 4 + 9 + 16


@given(quaternions, quaternions)
def test_conjugation_antihomomorphism(q, x):
    lhs = qmul(q, x).conj()
    rhs = qmul(x.conj(), q.conj())
    scale = max(q.abs() * x.abs(), 1.0)
    assert np.abs(lhs.components - rhs.components).max() <= 4 * np.finfo(float).eps * scale


@given(quaternions, quaternions, quaternions)
@settings(max_examples=50)
def test_associativity_and_distributivity(a, b, c):
    scale = max(a.abs() * b.abs() * c.abs(), 1.0)
    tol = 8 * np.finfo(float).eps * scale
    assoc = qmul(qmul(a, b), c).components - qmul(a, qmul(b, c)).components
    assert np.abs(assoc).max() <= tol
    dist = qmul(a, b + c).components - (qmul(a, b) + qmul(a, c)).components
    assert np.abs(dist).max() <= tol


def test_complex_unit_commutes():
    cq = ComplexQuaternion.from_parts(Quaternion(1, 0, 0, 0), Quaternion(0, 0, 1, 0))
    q = Quaternion(0, 1, 0, 0)
    left = qmul(cq, q)
    # (1 + I j) i = i + I (j i) = i - I k
    assert left == ComplexQuaternion.from_parts(Quaternion(0, 1, 0, 0), Quaternion(0, 0, 0, -1))


def test_real_embedding():
    a = Quaternion(1, 2, 3, 4)
    b = Quaternion(-2, 0.5, 1, 7)
    ca = ComplexQuaternion.from_parts(a, Quaternion())
    cb = ComplexQuaternion.from_parts(b, Quaternion())
    assert np.array_equal(qmul(ca, cb).components.real, qmul(a, b).components)
    assert np.all(qmul(ca, cb).components.imag == 0)


def test_inverse_examples():
    assert qinverse(I) == -I
    assert qinverse(Quaternion(2, 0, 0, 0)) == Quaternion(0.5, 0, 0, 0)
    q = Quaternion(0.5, -1, 2, 0.25)
    prod = qmul(q, qinverse(q))
    assert np.abs(prod.components - ONE.components).max() < 1e-14


def test_zero_divisor_detected():
    zd = ComplexQuaternion.from_parts(Quaternion(1, 0, 0, 0), Quaternion(0, 1, 0, 0))
    assert zd.norm2() == 0
    with pytest.raises(ZeroDivisorError):
        qinverse(zd)


def test_scalar_product_examples():
    assert scalar_product(I, I) == 1
    assert scalar_product(I, J) == 0
    one_plus_i = Quaternion(1, 1, 0, 0)
    one_minus_i = Quaternion(1, -1, 0, 0)
    assert scalar_product(one_plus_i, one_minus_i) == 0


def test_validate_standard_frame():
    psi = validate_structural_set([ONE, I, J, K])
    assert psi.sgn == 1
    assert np.array_equal(psi.matrix, np.eye(4))


def test_validate_rejects_repeated_element():
    with pytest.raises(NotOrthonormalError):
        validate_structural_set([ONE, I, J, I])


def test_sign_flip_frame():
    psi = validate_structural_set([ONE, -I, J, K])
    assert psi.sgn == -1


def test_coordinate_matrix_orthogonal():
    c = 1 / np.sqrt(2)
    psi = validate_structural_set([
        Quaternion(c, c, 0, 0), Quaternion(-c, c, 0, 0), J, K])
    m = psi.matrix
    assert np.abs(m @ m.T - np.eye(4)).max() < 1e-10


def test_psi_coords_standard():
    psi = StructuralSet.standard()
    q = Quaternion(1, 2, 3, 4)
    assert np.array_equal(psi_coords(psi, q), np.array([1, 2, 3, 4.0]))


def test_psi_coords_permuted_frame():
    psi = validate_structural_set([I, ONE, J, K])
    coords = psi_coords(psi, ONE)
    assert np.array_equal(coords, np.array([0, 1, 0, 0.0]))


@given(quaternions)
def test_coords_round_trip(x):
    c = 1 / np.sqrt(2)
    psi = validate_structural_set([
        Quaternion(1, 0, 0, 0), Quaternion(0, c, c, 0), Quaternion(0, -c, c, 0), K])
    back = psi_synth(psi, psi_coords(psi, x))
    assert np.abs(back.components - x.components).max() <= 1e-12 * max(x.abs(), 1.0)


def test_frame_scalar_product_matches_euclidean_for_standard():
    psi = StructuralSet.standard()
    q = Quaternion(1, -2, 0.5, 3)
    x = Quaternion(0.25, 4, -1, 2)
    assert psi_scalar_product(psi, q, x) == pytest.approx(scalar_product(q, x), rel=1e-14)


def test_conjugate_frame_flips_orientation():
    psi = StructuralSet.standard()
    conj = psi.conjugate()
    assert conj.sgn == -1
    revalidated = validate_structural_set([conj.psi(k) for k in range(4)])
    assert revalidated.sgn == -1
