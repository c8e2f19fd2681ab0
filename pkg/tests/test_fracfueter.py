"""Anchored fractional operators, potentials, and their interrelations."""
import numpy as np
import pytest
from scipy.special import gamma

from fueterlab.algebra import StructuralSet, validate_structural_set
from fueterlab.corpus import standard_corpus
from fueterlab.errors import DomainError, OrderOutOfRangeError
from fueterlab.fracfueter import (AnchoredPoint, FracOrderVec, cal_i, cal_i_field,
                                  cal_i_quadrature_oracle, frac_fueter_left,
                                  frac_fueter_right, frac_integral_j, verify_frac_identity)
from fueterlab.fueter import Field
from fueterlab.geometry import Box4
from fueterlab.quadrature import QuadratureSpec

UNIT = Box4(np.zeros(4), np.ones(4))
PSI = StructuralSet.standard()
CORPUS = {f.name: f for f in standard_corpus(UNIT)}
SPEC = QuadratureSpec(nodes_per_axis=10)
HALF = FracOrderVec.uniform(0.5)
Q = UNIT.center
X = np.array([0.55, 0.6, 0.45, 0.5])
ANCH = AnchoredPoint(Q, X)


def test_order_vector_validation():
    with pytest.raises(OrderOutOfRangeError):
        FracOrderVec(np.array([0.5, 0.5, 0.5, 1.2]))
    with pytest.raises(OrderOutOfRangeError):
        FracOrderVec.uniform(-0.1)
    v = FracOrderVec(np.array([0.25, 0.5, 0.75, 0.5 + 0.2j]))
    assert v[3] == 0.5 + 0.2j


def test_operator_on_constant_is_axiswise_power_law():
    # each axis contributes psi_j (x_j - a_j)^(-1/2) / Gamma(1/2)
    anch = AnchoredPoint(Q, np.ones(4))
    got = frac_fueter_left(PSI, HALF, CORPUS["const-1"], UNIT, anch, SPEC)
    want = np.full(4, 1 / np.sqrt(np.pi))
    assert np.abs(got.real - want).max() < 1e-10


def test_operator_on_zero():
    from fueterlab.fueter import constant_field
    zero = constant_field(0.0, UNIT)
    got = frac_fueter_left(PSI, HALF, zero, UNIT, ANCH, SPEC)
    assert np.abs(got).max() == 0.0


def test_operator_coordinate_field_closed_form():
    # axis-1 term: i * Gamma(2)/Gamma(1.5) x1^(1/2); frozen constant value q1
    # on the other axes contributes via the power law of the constant
    anch = AnchoredPoint(Q, np.array([1.0, 1.0, 1.0, 1.0]))
    got = frac_fueter_left(PSI, HALF, CORPUS["coord-x1"], UNIT, anch, SPEC)
    c = 1 / np.sqrt(np.pi)
    expect = np.array([Q[1] * c, 2 / np.sqrt(np.pi), Q[1] * c, Q[1] * c])
    assert np.abs(got.real - expect).max() < 1e-9


def test_right_operator_mirrors_multipliers():
    f = CORPUS["sin-x0"]
    left = frac_fueter_left(PSI, HALF, f, UNIT, ANCH, SPEC)
    right = frac_fueter_right(PSI, HALF, f, UNIT, ANCH, SPEC)
    # scalar-valued field: multipliers commute with scalar 1D derivatives
    assert np.abs(left - right).max() < 1e-12


def test_domain_error_at_corner():
    bad = AnchoredPoint(Q, np.array([0.0, 0.5, 0.5, 0.5]))
    with pytest.raises(DomainError):
        frac_fueter_left(PSI, HALF, CORPUS["const-1"], UNIT, bad, SPEC)


def test_axis_integral_constant_high_order_limit():
    # orders -> 1: only the axis whose frame vector has a real part survives
    near_one = FracOrderVec.uniform(1 - 1e-6)
    anch = AnchoredPoint(Q, np.ones(4))
    got = frac_integral_j(PSI, near_one, CORPUS["const-1"], UNIT, anch, SPEC)
    assert got[0].real == pytest.approx(1.0, abs=1e-4)
    assert np.abs(got[1:]).max() < 1e-10


def test_axis_integral_zero():
    from fueterlab.fueter import constant_field
    got = frac_integral_j(PSI, HALF, constant_field(0.0, UNIT), UNIT, ANCH, SPEC)
    assert np.abs(got).max() == 0.0


def test_potential_constant_closed_form():
    # sum_k (x_k - a_k)^(1 - alpha) / Gamma(2 - alpha), frozen test value
    anch = AnchoredPoint(Q, np.ones(4))
    got = cal_i(PSI, HALF, CORPUS["const-1"], UNIT, anch, SPEC)
    want = 4.513516668382050  # 4 / Gamma(1.5)
    assert got[0].real == pytest.approx(want, rel=1e-10)
    assert np.abs(got[1:]).max() < 1e-12


def test_potential_low_order_limit_is_plain_antiderivative():
    near_zero = FracOrderVec.uniform(1e-6)
    anch = AnchoredPoint(Q, np.ones(4))
    got = cal_i(PSI, near_zero, CORPUS["const-1"], UNIT, anch, SPEC)
    assert got[0].real == pytest.approx(4.0, abs=1e-4)


def test_potential_4d_quadrature_oracle():
    got = cal_i(PSI, HALF, CORPUS["sin-x0"], UNIT, ANCH, SPEC)
    oracle = cal_i_quadrature_oracle(PSI, HALF, CORPUS["sin-x0"], UNIT, ANCH, nodes=64)
    assert np.abs(got - oracle).max() / np.abs(got).max() < 5e-3


def test_anchor_locality():
    # values off the four axis segments through q must not matter
    f = CORPUS["sinexp-x0x1"]

    def gated(pts):
        on_axis = np.zeros(pts.shape[0], dtype=bool)
        for j in range(4):
            others = [k for k in range(4) if k != j]
            on_axis |= np.all(np.abs(pts[:, others] - Q[others]) < 1e-12, axis=1)
        vals = f(pts)
        vals[~on_axis] = 777.0  # poison off-segment values
        return vals

    def gated_partial(axis):
        def p(pts):
            return f.partial(axis, pts)
        return p

    poisoned = Field(value=gated, box=UNIT,
                     partials=tuple(gated_partial(a) for a in range(4)), name="poisoned")
    clean = frac_fueter_left(PSI, HALF, f, UNIT, ANCH, SPEC)
    dirty = frac_fueter_left(PSI, HALF, poisoned, UNIT, ANCH, SPEC)
    assert np.array_equal(clean, dirty)


def test_frame_equivariance():
    # a rotated frame changes only the multipliers of the same 1D derivatives
    c = 1 / np.sqrt(2)
    rot = validate_structural_set([
        np.array([1.0, 0, 0, 0]), np.array([0, c, c, 0.0]),
        np.array([0, -c, c, 0.0]), np.array([0.0, 0, 0, 1])])
    from fueterlab.fraccalc import rl_derivative_left
    f = CORPUS["sin-x0"]
    got = frac_fueter_left(rot, HALF, f, UNIT, ANCH, SPEC)
    manual = np.zeros(4, dtype=complex)
    from fueterlab.algebra import qmul_arr
    for j in range(4):
        dj = rl_derivative_left(f.profile(j, Q), 0.5, 0.0, float(X[j]), SPEC)
        manual = manual + qmul_arr(rot.matrix[j], dj)
    assert np.array_equal(got, manual)


@pytest.mark.parametrize("ident", ["eq5", "eq6", "eq7", "laplacian"])
@pytest.mark.parametrize("fname", ["const-1", "coord-x1", "sin-x0", "quadratic-x1x2"])
def test_relations_on_corpus(ident, fname):
    rep = verify_frac_identity(ident, PSI, HALF, CORPUS[fname], UNIT, ANCH, SPEC)
    assert rep.passed, f"{ident} on {fname}: rel={rep.residual_rel:.2e}"


def test_reconstruction_at_anchor_returns_field_value():
    rep = verify_frac_identity("eq7", PSI, HALF, CORPUS["exp-x2"], UNIT, ANCH, SPEC)
    assert rep.residual_rel <= 1e-3


@pytest.mark.parametrize("ident", ["eq8", "eq9"])
def test_composition_vs_summed_order(ident):
    quarter = FracOrderVec.uniform(0.25)
    rep = verify_frac_identity(ident, PSI, quarter, CORPUS["coord-x1"], UNIT, ANCH,
                               SPEC, beta=quarter)
    assert rep.passed
    # monomial oracle: D^{1/2} t at x equals Gamma(2)/Gamma(1.5) sqrt(x)
    from fueterlab.fraccalc import rl_monomial_derivative_oracle
    want = rl_monomial_derivative_oracle(0.5, 1.0, 0.0, float(X[1]))
    assert abs(want - gamma(2) / gamma(1.5) * X[1] ** 0.5) < 1e-12


def test_composition_rejects_orders_leaving_strip():
    with pytest.raises(OrderOutOfRangeError):
        verify_frac_identity("eq8", PSI, HALF, CORPUS["coord-x1"], UNIT, ANCH, SPEC,
                             beta=FracOrderVec.uniform(0.75))


def test_gradient_identity_multiple_anchors():
    rng = np.random.default_rng(42)
    for _ in range(3):
        anchor = 0.25 + 0.5 * rng.random(4)
        rep = verify_frac_identity("eq5", PSI, HALF, CORPUS["exp-x2"], UNIT,
                                   AnchoredPoint(anchor, X), SPEC)
        assert rep.passed
