"""One-dimensional Riemann-Liouville operators against closed forms."""
import numpy as np
import pytest
from scipy.special import gamma

from fueterlab.errors import DomainError
from fueterlab.fraccalc import (FracOrder, Profile1D, Segment1D, rl_const_derivative_oracle,
                                rl_derivative_left, rl_derivative_right, rl_integral_left,
                                rl_integral_right, rl_monomial_derivative_oracle)
from fueterlab.quadrature import QuadratureSpec

SPEC = QuadratureSpec(nodes_per_axis=12)
COMPOSE_SPEC = QuadratureSpec(nodes_1d=96)

ONE = Profile1D(lambda t: np.ones_like(t), lambda t: np.zeros_like(t))
IDENT = Profile1D(lambda t: t, lambda t: np.ones_like(t))
SQUARE = Profile1D(lambda t: t ** 2, lambda t: 2 * t)
SINE = Profile1D(np.sin, np.cos)


def scalar(result):
    assert np.abs(result[1:]).max() < 1e-14
    return complex(result[0])


def test_integral_order_one_is_plain_integral():
    v = scalar(rl_integral_left(ONE, 1.0 - 1e-12, 0.0, 2.0, SPEC))
    assert v == pytest.approx(2.0, rel=1e-9)


def test_integral_left_constant_half_order():
    # (x-a)^alpha / Gamma(alpha+1) = 1/Gamma(1.5)
    v = scalar(rl_integral_left(ONE, 0.5, 0.0, 1.0, SPEC))
    assert v == pytest.approx(1.1283791670955126, rel=1e-9)


def test_integral_left_linear_half_order():
    # Gamma(2)/Gamma(2.5) at x = 1
    v = scalar(rl_integral_left(IDENT, 0.5, 0.0, 1.0, SPEC))
    assert v == pytest.approx(0.7522527780636751, rel=1e-9)


def test_integral_right_mirrors():
    v = scalar(rl_integral_right(ONE, 1.0 - 1e-12, 2.0, 0.0, SPEC))
    assert v == pytest.approx(2.0, rel=1e-9)
    v = scalar(rl_integral_right(ONE, 0.5, 1.0, 0.0, SPEC))
    assert v == pytest.approx(1.1283791670955126, rel=1e-9)


def test_integral_linearity_zero():
    zero = Profile1D(lambda t: np.zeros_like(t))
    assert np.all(rl_integral_right(zero, 0.7, 1.0, 0.2, SPEC) == 0)


def test_integral_domain_errors():
    with pytest.raises(DomainError):
        rl_integral_left(ONE, 0.5, 0.0, -0.1, SPEC)
    with pytest.raises(DomainError):
        rl_integral_left(ONE, 0.5, 0.0, 0.0, SPEC)
    with pytest.raises(DomainError):
        rl_integral_right(ONE, 0.5, 1.0, 1.0, SPEC)


def test_derivative_left_constant():
    v = scalar(rl_derivative_left(ONE, 0.5, 0.0, 1.0, SPEC))
    assert v == pytest.approx(0.5641895835477563, rel=1e-10)  # 1/sqrt(pi)


def test_derivative_left_linear():
    v = scalar(rl_derivative_left(IDENT, 0.5, 0.0, 1.0, SPEC))
    assert v == pytest.approx(1.1283791670955126, rel=1e-10)  # 2/sqrt(pi)


def test_derivative_right_constant():
    v = scalar(rl_derivative_right(ONE, 0.5, 1.0, 0.0, SPEC))
    assert v == pytest.approx(0.5641895835477563, rel=1e-10)


def test_derivative_right_reflected_linear():
    prof = Profile1D(lambda t: 1.0 - t, lambda t: -np.ones_like(t))
    v = scalar(rl_derivative_right(prof, 0.5, 1.0, 0.0, SPEC))
    assert v == pytest.approx(1.1283791670955126, rel=1e-10)


def test_derivative_fd_fallback_matches_ac_path():
    got_fd = scalar(rl_derivative_left(lambda t: t ** 2, 0.5, 0.0, 1.0, SPEC))
    got_ac = scalar(rl_derivative_left(SQUARE, 0.5, 0.0, 1.0, SPEC))
    assert got_fd == pytest.approx(got_ac, rel=1e-3)


def test_const_derivative_oracle():
    assert rl_const_derivative_oracle(0.5, 0.0, 1.0) == pytest.approx(0.5641895835477563)
    assert rl_const_derivative_oracle(0.5, 0.0, 4.0) == pytest.approx(0.28209479177387814)
    # identity limit on constants
    assert rl_const_derivative_oracle(1e-6, 0.0, 1.0) == pytest.approx(1.0, abs=1e-4)


def test_complex_order_against_monomial_oracle():
    al = 0.5 + 0.2j
    got = scalar(rl_integral_left(IDENT, al, 0.0, 1.0, QuadratureSpec(nodes_1d=96)))
    want = gamma(2) / gamma(2 + al)
    assert abs(got - want) < 1e-10
    got = scalar(rl_derivative_left(IDENT, al, 0.0, 0.8, SPEC))
    want = rl_monomial_derivative_oracle(al, 1.0, 0.0, 0.8)
    assert abs(got - want) / abs(want) < 1e-10


@pytest.mark.parametrize("alpha", [0.25, 0.5, 0.75])
@pytest.mark.parametrize("profile,fn", [(ONE, lambda x: 1.0), (IDENT, lambda x: x),
                                        (SQUARE, lambda x: x ** 2), (SINE, np.sin)])
def test_fundamental_theorem_left(alpha, profile, fn):
    x = 0.7

    def integral_profile(ts):
        return np.stack([rl_integral_left(profile, alpha, 0.0, float(t), COMPOSE_SPEC,
                                          _allow_endpoint=True) for t in np.atleast_1d(ts)])

    got = scalar(rl_derivative_left(Profile1D(integral_profile), alpha, 0.0, x, COMPOSE_SPEC))
    assert got == pytest.approx(fn(x), rel=1e-3, abs=1e-3)


@pytest.mark.parametrize("alpha", [0.25, 0.5, 0.75])
def test_fundamental_theorem_right(alpha):
    x, b = 0.3, 1.0

    def integral_profile(ts):
        return np.stack([rl_integral_right(SINE, alpha, b, float(t), COMPOSE_SPEC,
                                           _allow_endpoint=True) for t in np.atleast_1d(ts)])

    got = scalar(rl_derivative_right(Profile1D(integral_profile), alpha, b, x, COMPOSE_SPEC))
    assert got == pytest.approx(np.sin(x), rel=1e-3)


def test_semigroup_on_monomials():
    # D^a D^b (t-a)^mu = D^(a+b) (t-a)^mu via the Gamma-ratio closed form
    for mu in (1.0, 2.0):
        for a_ord, b_ord in ((0.25, 0.25), (0.3, 0.45)):
            prof = Profile1D(lambda t, _m=mu: t ** _m,
                             lambda t, _m=mu: _m * t ** (_m - 1))
            inner_vals = lambda ts, _p=prof, _b=b_ord: np.stack(
                [rl_derivative_left(_p, _b, 0.0, float(t), SPEC) if t > 0
                 else np.zeros(4, dtype=complex) for t in np.atleast_1d(ts)])
            got = scalar(rl_derivative_left(Profile1D(inner_vals), a_ord, 0.0, 0.9, SPEC))
            want = rl_monomial_derivative_oracle(a_ord + b_ord, mu, 0.0, 0.9)
            assert abs(got - want) / abs(want) < 1e-3


def test_linearity_ulp_scale():
    c = 2.5 + 0.5j
    base = scalar(rl_integral_left(SINE, 0.5, 0.0, 1.0, SPEC))
    scaled_prof = Profile1D(lambda t: c * np.sin(t))
    scaled = scalar(rl_integral_left(scaled_prof, 0.5, 0.0, 1.0, SPEC))
    assert abs(scaled - c * base) <= 8 * np.finfo(float).eps * abs(c * base)


def test_convergence_under_node_doubling():
    want = gamma(3) / gamma(2.5)  # D^0.5 t^2 at x=1
    errs = []
    for n in (24, 48, 96):
        got = scalar(rl_derivative_left(lambda t: t ** 2, 0.5, 0.0, 1.0,
                                        QuadratureSpec(nodes_1d=n)))
        errs.append(abs(got - want))
    assert errs[0] / errs[1] >= 1.8
    assert errs[1] / errs[2] >= 1.8


def test_profile_derivative_consistency():
    # analytic derivative must agree with a central difference at probes
    for t in (0.3, 0.6):
        h = 1e-5
        fd = (SINE(np.array([t + h]))[0] - SINE(np.array([t - h]))[0]) / (2 * h)
        an = Profile1D(SINE.derivative)(np.array([t]))[0]
        assert np.abs(fd - an).max() < 1e-6 * max(np.abs(an).max(), 1.0)


def test_types_validate():
    with pytest.raises(ValueError):
        Segment1D(1.0, 1.0)
    with pytest.raises(DomainError):
        FracOrder(1.5).require_derivative()
    with pytest.raises(DomainError):
        FracOrder(-0.5).require_integral()
    assert FracOrder(0.5 + 0.3j).require_derivative() == 0.5 + 0.3j
