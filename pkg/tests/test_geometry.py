"""Boxes, quadrature rules, and the boundary form."""
import numpy as np
import pytest

from fueterlab.algebra import StructuralSet, validate_structural_set
from fueterlab.errors import SingularityOnGridError
from fueterlab.geometry import (Box4, boundary_integral, box_measure, faces,
                                volume_integral)
from fueterlab.quadrature import QuadratureSpec, product_weights

UNIT = Box4(np.zeros(4), np.ones(4))
SPEC = QuadratureSpec(nodes_per_axis=10)


def scalar_integrand(fn):
    def integrand(pts):
        out = np.zeros((pts.shape[0], 4))
        out[:, 0] = fn(pts)
        return out
    return integrand


ONE = scalar_integrand(lambda p: np.ones(p.shape[0]))


def test_box_measure():
    assert box_measure(UNIT) == 1.0
    assert box_measure(Box4(np.zeros(4), np.array([2, 1, 1, 1.0]))) == 2.0


def test_degenerate_box_rejected():
    with pytest.raises(ValueError):
        Box4(np.zeros(4), np.array([1, 0, 1, 1.0]))


def test_boundary_faces_partition():
    fs = list(faces(UNIT))
    assert len(fs) == 8
    assert sorted((f.axis, f.side) for f in fs) == [(a, s) for a in range(4) for s in (-1, 1)]


def test_volume_of_constant():
    v = volume_integral(UNIT, ONE, SPEC)
    assert v[0].real == pytest.approx(1.0, rel=1e-12)


def test_volume_of_coordinate():
    v = volume_integral(UNIT, scalar_integrand(lambda p: p[:, 0]), SPEC)
    assert v[0].real == pytest.approx(0.5, rel=1e-12)


def test_volume_with_exponential_weight():
    v = volume_integral(UNIT, ONE, SPEC, weight=lambda p: np.exp(p[:, 0]))
    assert v[0].real == pytest.approx(np.e - 1.0, rel=1e-10)


def test_weight_one_reproduces_unweighted_bitwise():
    integrand = scalar_integrand(lambda p: np.sin(p[:, 1]) + p[:, 3])
    plain = volume_integral(UNIT, integrand, SPEC)
    weighted = volume_integral(UNIT, integrand, SPEC, weight=lambda p: np.ones(p.shape[0]))
    assert np.array_equal(plain, weighted)


def test_boundary_opposite_faces_cancel():
    v = boundary_integral(UNIT, ONE, ONE, StructuralSet.standard(), SPEC)
    assert np.abs(v).max() == 0.0


def test_boundary_divergence_oracle():
    # int_bd sigma x0 = psi_0 * int d_0 x0 dV = 1
    x0 = scalar_integrand(lambda p: p[:, 0])
    v = boundary_integral(UNIT, None, x0, StructuralSet.standard(), SPEC)
    assert np.abs(v.real - np.array([1, 0, 0, 0])).max() < 1e-12

    x1 = scalar_integrand(lambda p: p[:, 1])
    v = boundary_integral(UNIT, None, x1, StructuralSet.standard(), SPEC)
    assert np.abs(v.real - np.array([0, 1, 0, 0])).max() < 1e-12


def test_boundary_divergence_oracle_flipped_frame():
    psi = validate_structural_set([
        np.array([1.0, 0, 0, 0]), np.array([0.0, -1, 0, 0]),
        np.array([0.0, 0, 1, 0]), np.array([0.0, 0, 0, 1])])
    x1 = scalar_integrand(lambda p: p[:, 1])
    v = boundary_integral(UNIT, None, x1, psi, SPEC)
    # frame coordinate 1 integrates against psi_1 = -i
    assert np.abs(v.real - np.array([0, -1, 0, 0])).max() < 1e-12


def test_exclusion_ball_consistency():
    # halving the exclusion radius changes the Cauchy-type integral by a
    # first-order-in-epsilon amount once the shell is resolved
    from fueterlab.fueter import kernel_at
    from fueterlab.algebra import qmul_arr
    psi = StructuralSet.standard()
    x = np.array([0.42, 0.55, 0.48, 0.61])  # asymmetric interior point

    def integrand(pts):
        kv = kernel_at(psi, pts - x)
        fv = np.zeros_like(kv)
        fv[:, 0] = 1.0 + pts[:, 2]
        return qmul_arr(kv, fv)

    spec = QuadratureSpec(nodes_per_axis=24, rule="graded-trapezoid", grading_exponent=3.0)
    vals = {}
    for eps in (0.16, 0.08, 0.04, 0.02):
        vals[eps] = volume_integral(UNIT, integrand, spec, singular_at=x,
                                    exclusion_radius=eps)
    diffs = [np.abs(vals[e] - vals[e / 2]).max() for e in (0.16, 0.08, 0.04)]
    ratios = [d1 / d2 for d1, d2 in zip(diffs, diffs[1:])]
    for r in ratios:
        assert 1.4 <= r <= 2.7


def test_singularity_on_grid_raises():
    x = UNIT.center  # graded mesh places a node exactly at the target

    def integrand(pts):
        r2 = ((pts - x) ** 2).sum(axis=1)
        out = np.zeros((pts.shape[0], 4))
        out[:, 0] = 1.0 / np.maximum(r2, 1e-300)
        return out

    with pytest.raises(SingularityOnGridError):
        volume_integral(UNIT, integrand, QuadratureSpec(nodes_per_axis=8,
                                                        rule="graded-trapezoid"),
                        singular_at=x, exclusion_radius=0.0)


def test_product_weights_exact_on_piecewise_linear():
    # int_0^1 t (1-t)^(mu-1) dt = 1/(mu(mu+1)) for linear t
    t = np.linspace(0, 1, 17)
    for mu in (0.5, 0.25, 1.5):
        w = product_weights(t, 1.0, mu)
        got = (w * t).sum()
        assert got == pytest.approx(1.0 / (mu * (mu + 1)), rel=1e-12)


def test_quadrature_spec_validation():
    with pytest.raises(ValueError):
        QuadratureSpec(nodes_per_axis=1)
    with pytest.raises(ValueError):
        QuadratureSpec(rule="midpoint")
    with pytest.raises(ValueError):
        QuadratureSpec(grading_exponent=0.5)
    assert QuadratureSpec(nodes_per_axis=12).n1d == 48
    assert QuadratureSpec(nodes_1d=80).n1d == 80
