"""Fueter operators, the Cauchy kernel, volume transforms, classical identities."""
import numpy as np
import pytest

from fueterlab.algebra import StructuralSet, validate_structural_set
from fueterlab.corpus import polynomial_corpus, scalar_field, standard_corpus
from fueterlab.errors import SingularPointError, UndefinedOnBoundaryError
from fueterlab.fueter import (Field, borel_pompeiu_classical_residual, cauchy_kernel,
                              constant_field, fueter_left, fueter_right, kernel_at,
                              laplacian, stokes_classical_residual, teodorescu_field,
                              teodorescu_left)
from fueterlab.geometry import Box4
from fueterlab.quadrature import QuadratureSpec

UNIT = Box4(np.zeros(4), np.ones(4))
PSI = StructuralSet.standard()
CORPUS = {f.name: f for f in standard_corpus(UNIT)}
SPEC = QuadratureSpec(nodes_per_axis=10)


def test_fueter_of_constant_vanishes():
    f = constant_field(np.array([1.0, -2.0, 0.5, 3.0]), UNIT)
    assert np.abs(fueter_left(PSI, f, UNIT.center)).max() == 0.0
    assert np.abs(fueter_right(PSI, f, UNIT.center)).max() == 0.0


def test_fueter_of_square_coordinate():
    wide = Box4(np.full(4, -5.0), np.full(4, 5.0))
    f = scalar_field(wide, "x0sq", lambda p: p[:, 0] ** 2,
                     (lambda p: 2 * p[:, 0], None, None, None))
    got = fueter_left(PSI, f, np.array([3.0, 0.0, 0.0, 0.0]))
    assert np.abs(got - np.array([6, 0, 0, 0])).max() < 1e-12


def test_fueter_annihilates_null_field():
    got = fueter_left(PSI, CORPUS["hyperholomorphic-linear"], np.array([0.3, 0.4, 0.5, 0.6]))
    assert np.abs(got).max() == 0.0


def test_fd_path_matches_analytic_partials():
    f = CORPUS["sinexp-x0x1"]
    bare = Field(value=f.value, box=UNIT, name="fd-only")
    x = UNIT.center
    an = fueter_left(PSI, f, x)
    fd = fueter_left(PSI, bare, x)
    assert np.abs(an - fd).max() < 1e-9
    assert bare.smoothness_tag == "fd-only" and f.smoothness_tag == "analytic-partials"


def test_kernel_point_value():
    kv = cauchy_kernel(PSI, np.array([1.0, 0, 0, 0]), np.zeros(4))
    assert kv.value[0] == pytest.approx(0.05066059182116889, rel=1e-12)
    assert np.abs(kv.value[1:]).max() == 0.0


def test_kernel_magnitude_law():
    d = np.array([0.3, -0.2, 0.5, 0.1])
    r = np.sqrt((d ** 2).sum())
    val = kernel_at(PSI, d)
    assert np.sqrt((val ** 2).sum()) == pytest.approx(r ** -3 / (2 * np.pi ** 2), rel=1e-12)


def test_kernel_homogeneity():
    d = np.array([0.3, -0.2, 0.5, 0.1])
    assert np.abs(kernel_at(PSI, 2 * d) - kernel_at(PSI, d) / 8).max() < 1e-12


def test_kernel_singular_point():
    with pytest.raises(SingularPointError):
        cauchy_kernel(PSI, np.zeros(4), np.zeros(4))


def test_teodorescu_of_zero():
    zero = constant_field(0.0, UNIT)
    assert np.abs(teodorescu_left(PSI, zero, UNIT, UNIT.center, SPEC)).max() == 0.0


def test_teodorescu_scaling_bit_exact():
    f = CORPUS["coord-x1"]
    from fueterlab.fueter import multiply_field
    v1 = teodorescu_left(PSI, f, UNIT, UNIT.center, SPEC)
    v2 = teodorescu_left(PSI, multiply_field(np.array([2.0, 0, 0, 0]), f, "left"),
                         UNIT, UNIT.center, SPEC)
    assert np.array_equal(2.0 * v1, v2)


@pytest.mark.parametrize("frame", ["std", "rot", "flip"])
def test_stokes_polynomial_exact(frame):
    frames = {
        "std": PSI,
        "rot": validate_structural_set([
            np.array([1.0, 0, 0, 0]),
            np.array([0, 1, 1, 0]) / np.sqrt(2),
            np.array([0, -1, 1, 0]) / np.sqrt(2),
            np.array([0.0, 0, 0, 1])]),
        "flip": validate_structural_set([
            np.array([1.0, 0, 0, 0]), np.array([0.0, -1, 0, 0]),
            np.array([0.0, 0, 1, 0]), np.array([0.0, 0, 0, 1])]),
    }
    psi = frames[frame]
    polys = {f.name: f for f in polynomial_corpus(UNIT)}
    rep = stokes_classical_residual(psi, polys["coord-x1"], polys["quadratic-x1x2"],
                                    UNIT, QuadratureSpec(nodes_per_axis=12))
    assert rep.residual_rel <= 1e-10
    rep = stokes_classical_residual(psi, polys["quadratic-x0sq"], polys["const-q"],
                                    UNIT, QuadratureSpec(nodes_per_axis=12))
    assert rep.residual_rel <= 1e-10


def test_stokes_constants_roundoff():
    rep = stokes_classical_residual(PSI, CORPUS["const-1"], CORPUS["const-q"], UNIT, SPEC)
    assert rep.residual_abs <= 1e-14


def test_stokes_smooth_field():
    rep = stokes_classical_residual(PSI, CORPUS["sin-x0"], CORPUS["const-1"], UNIT,
                                    QuadratureSpec(nodes_per_axis=12), tolerance=1e-8)
    assert rep.passed


def test_borel_pompeiu_interior():
    rep = borel_pompeiu_classical_residual(PSI, CORPUS["coord-x1"], CORPUS["const-1"],
                                           UNIT, UNIT.center,
                                           QuadratureSpec(nodes_per_axis=12))
    assert rep.residual_rel <= 1e-4  # smooth pair reproduces sharply


def test_borel_pompeiu_trivial_zero():
    zero = constant_field(0.0, UNIT)
    rep = borel_pompeiu_classical_residual(PSI, zero, zero, UNIT, UNIT.center, SPEC)
    assert rep.residual_abs == 0.0


def test_borel_pompeiu_exterior():
    rep = borel_pompeiu_classical_residual(PSI, CORPUS["const-1"], CORPUS["const-1"], UNIT,
                                           np.array([2.5, 0.5, 0.5, 0.5]),
                                           QuadratureSpec(nodes_per_axis=16))
    assert rep.residual_rel <= 1e-3


def test_borel_pompeiu_boundary_probe_rejected():
    with pytest.raises(UndefinedOnBoundaryError):
        borel_pompeiu_classical_residual(PSI, CORPUS["const-1"], CORPUS["const-1"],
                                         UNIT, np.array([0.0, 0.5, 0.5, 0.5]), SPEC)


def test_left_right_scalar_symmetry():
    # for a real scalar field, the left-slot and right-slot residuals of the
    # reproduction formula agree up to quadrature noise
    f = CORPUS["sin-x0"]
    zero = constant_field(0.0, UNIT)
    spec = QuadratureSpec(nodes_per_axis=12)
    left = borel_pompeiu_classical_residual(PSI, f, zero, UNIT, UNIT.center, spec)
    right = borel_pompeiu_classical_residual(PSI, zero, f, UNIT, UNIT.center, spec)
    assert left.passed and right.passed
    assert abs(left.residual_abs - right.residual_abs) <= 0.5 * max(
        left.residual_abs, right.residual_abs) + 1e-12


def test_fueter_inverse_ladder():
    f = CORPUS["exp-x2"]
    resids = []
    for n in (8, 12, 16):
        T = teodorescu_field(PSI, f, UNIT, QuadratureSpec(nodes_per_axis=n))
        got = fueter_left(PSI, T, UNIT.center)
        want = f(UNIT.center[None, :])[0]
        resids.append(np.abs(got - want).max() / np.abs(want).max())
    assert resids[-1] <= 5e-2
    assert resids[0] / resids[1] >= 1.5
    assert resids[1] / resids[2] >= 1.5


def test_fueter_inverse_right():
    f = CORPUS["coord-x1"]
    T = teodorescu_field(PSI, f, UNIT, QuadratureSpec(nodes_per_axis=12), side="right")
    got = fueter_right(PSI, T, UNIT.center)
    want = f(UNIT.center[None, :])[0]
    assert np.abs(got - want).max() / np.abs(want).max() <= 5e-2


def test_teodorescu_field_partials_match_fd():
    # exact derivative of the discrete object vs finite differences of it
    f = CORPUS["coord-x1"]
    T = teodorescu_field(PSI, f, UNIT, QuadratureSpec(nodes_per_axis=8))
    x = UNIT.center
    h = 1e-4
    for axis in range(2):
        e = np.zeros(4)
        e[axis] = h
        fd = (-T(x + 2 * e) + 8 * T(x + e) - 8 * T(x - e) + T(x - 2 * e))[0] / (12 * h)
        an = T.partial(axis, x[None, :])[0]
        assert np.abs(an - fd).max() < 1e-6 * max(np.abs(an).max(), 1.0) + 1e-9


def test_conjugate_composition_is_laplacian():
    # conjugate-multiplier operator after the plain one equals the Laplacian
    f = CORPUS["quadratic-x0sq"]
    x = UNIT.center
    inner = Field(value=lambda p: fueter_left(PSI, f, p), box=UNIT, fd_step=1e-3)
    got = fueter_left(PSI, inner, x, conjugate=True)
    want = laplacian(f, x, step=1e-3)
    assert np.abs(got - want).max() < 1e-5 * max(np.abs(want).max(), 1.0)
