"""Riemann-Liouville fractional integrals and derivatives of complex order on a segment.

Operators act on quaternion-valued profiles of one real variable.  Integrals
use a product-integration rule that handles the weight (x - tau)^(alpha - 1)
exactly against piecewise-linear interpolants on a mesh graded into the
singular endpoint.  Derivatives prefer the absolutely-continuous
representation

    D_a+^alpha f(x) = [ f(a) (x-a)^(-alpha) + int_a^x f'(tau) (x-tau)^(-alpha) dtau ] / Gamma(1-alpha)

whenever an analytic derivative is supplied, and otherwise differentiate the
order-(1-alpha) integral with a five-point stencil.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy.special import gamma

from .algebra import as_components
from .errors import DomainError
from .quadrature import (QuadratureSpec, graded_nodes_toward, mirror_product_weights,
                         product_weights, two_sided_graded_nodes)

DEFAULT_SPEC = QuadratureSpec()

ProfileFn = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class FracOrder:
    """Complex fractional order; derivatives need 0 < Re < 1, integrals Re > 0."""

    alpha: complex

    def require_integral(self) -> complex:
        if self.alpha.real <= 0:
            raise DomainError(f"integral order needs Re(alpha) > 0, got {self.alpha}")
        return self.alpha

    def require_derivative(self) -> complex:
        if not 0 < self.alpha.real < 1:
            raise DomainError(f"derivative order needs 0 < Re(alpha) < 1, got {self.alpha}")
        return self.alpha


@dataclass(frozen=True)
class Segment1D:
    a: float
    b: float

    def __post_init__(self):
        if not self.a < self.b:
            raise ValueError(f"need a < b, got [{self.a}, {self.b}]")


@dataclass(frozen=True)
class Profile1D:
    """Quaternion-valued function of one variable, with optional analytic derivative.

    ``value`` maps a node array (N,) to components (N, 4); scalar-valued
    profiles embed in the first component.
    """

    value: ProfileFn
    derivative: Optional[ProfileFn] = None

    def __call__(self, t: np.ndarray) -> np.ndarray:
        out = np.asarray(self.value(np.asarray(t, dtype=float)))
        if out.ndim == 1:  # scalar profile
            z = np.zeros(out.shape + (4,), dtype=out.dtype)
            z[..., 0] = out
            return z
        return out


def _as_profile(f) -> Profile1D:
    if isinstance(f, Profile1D):
        return f
    if callable(f):
        return Profile1D(value=f)
    c = as_components(f)  # constant profile

    def const(t):
        return np.broadcast_to(c, t.shape + (4,)).copy()

    return Profile1D(value=const)


def _alpha_of(alpha) -> complex:
    return alpha.alpha if isinstance(alpha, FracOrder) else complex(alpha)


def _integral_nodes(a: float, x: float, spec: QuadratureSpec):
    # clustered at x (singular weight) and at a (composed operands typically
    # carry a power kink at the lower terminal)
    return two_sided_graded_nodes(a, x, spec.n1d, spec.grading_exponent + 1.0,
                                  spec.grading_exponent)


def _integral_nodes_right(x: float, b: float, spec: QuadratureSpec):
    # mirror: weight singular at x, kink at b
    return two_sided_graded_nodes(x, b, spec.n1d, spec.grading_exponent,
                                  spec.grading_exponent + 1.0)


def rl_integral_left(f, alpha, a: float, x: float, spec: QuadratureSpec = DEFAULT_SPEC,
                     _allow_endpoint: bool = False) -> np.ndarray:
    """(I_a+^alpha f)(x) = int_a^x f(tau)(x-tau)^(alpha-1) dtau / Gamma(alpha)."""
    al = _alpha_of(alpha)
    if al.real <= 0:
        raise DomainError(f"Re(alpha) must be positive, got {al}")
    if x <= a:
        if _allow_endpoint and x == a:
            return np.zeros(4, dtype=complex)
        raise DomainError(f"need x > a, got x={x}, a={a}")
    prof = _as_profile(f)
    t = _integral_nodes(a, x, spec)
    w = product_weights(t, x, al)
    return (w[:, None] * prof(t)).sum(axis=0) / gamma(al)


def rl_integral_right(f, alpha, b: float, x: float, spec: QuadratureSpec = DEFAULT_SPEC,
                      _allow_endpoint: bool = False) -> np.ndarray:
    """(I_b-^alpha f)(x) = int_x^b f(tau)(tau-x)^(alpha-1) dtau / Gamma(alpha)."""
    al = _alpha_of(alpha)
    if al.real <= 0:
        raise DomainError(f"Re(alpha) must be positive, got {al}")
    if x >= b:
        if _allow_endpoint and x == b:
            return np.zeros(4, dtype=complex)
        raise DomainError(f"need x < b, got x={x}, b={b}")
    prof = _as_profile(f)
    t = _integral_nodes_right(x, b, spec)
    w = mirror_product_weights(t, x, al)
    return (w[:, None] * prof(t)).sum(axis=0) / gamma(al)


def _stencil_derivative(g: Callable[[float], np.ndarray], x: float, h: float) -> np.ndarray:
    """Five-point (fourth-order) central first derivative."""
    return (-g(x + 2 * h) + 8 * g(x + h) - 8 * g(x - h) + g(x - 2 * h)) / (12 * h)


def rl_derivative_left(f, alpha, a: float, x: float, spec: QuadratureSpec = DEFAULT_SPEC) -> np.ndarray:
    """(D_a+^alpha f)(x) = d/dx (I_a+^(1-alpha) f)(x) for 0 < Re(alpha) < 1."""
    al = FracOrder(_alpha_of(alpha)).require_derivative()
    if x <= a:
        raise DomainError(f"need x > a, got x={x}, a={a}")
    prof = _as_profile(f)
    if prof.derivative is not None:
        t = _integral_nodes(a, x, spec)
        w = product_weights(t, x, 1 - al)
        fa = prof(np.array([a]))[0]
        deriv = Profile1D(prof.derivative)
        return (fa * (x - a) ** (-al) + (w[:, None] * deriv(t)).sum(axis=0)) / gamma(1 - al)
    h = 1e-3 * (x - a)

    def g(z):
        return rl_integral_left(prof, 1 - al, a, z, spec, _allow_endpoint=True)

    return _stencil_derivative(g, x, h)


def rl_derivative_right(f, alpha, b: float, x: float, spec: QuadratureSpec = DEFAULT_SPEC) -> np.ndarray:
    """(D_b-^alpha f)(x) = -d/dx (I_b-^(1-alpha) f)(x) for 0 < Re(alpha) < 1."""
    al = FracOrder(_alpha_of(alpha)).require_derivative()
    if x >= b:
        raise DomainError(f"need x < b, got x={x}, b={b}")
    prof = _as_profile(f)
    if prof.derivative is not None:
        # -d/dx I^(1-al) = [ f(b)(b-x)^(-al) - int_x^b f'(tau)(tau-x)^(-al) dtau ] / Gamma(1-al)
        t = _integral_nodes_right(x, b, spec)
        w = mirror_product_weights(t, x, 1 - al)
        fb = prof(np.array([b]))[0]
        deriv = Profile1D(prof.derivative)
        return (fb * (b - x) ** (-al) - (w[:, None] * deriv(t)).sum(axis=0)) / gamma(1 - al)
    h = 1e-3 * (b - x)

    def g(z):
        return rl_integral_right(prof, 1 - al, b, z, spec, _allow_endpoint=True)

    return -_stencil_derivative(g, x, h)


def rl_const_derivative_oracle(alpha, a: float, x: float) -> complex:
    """Closed form (D_a+^alpha 1)(x) = (x-a)^(-alpha) / Gamma(1-alpha)."""
    al = _alpha_of(alpha)
    if x <= a:
        raise DomainError(f"need x > a, got x={x}, a={a}")
    return (x - a) ** (-al) / gamma(1 - al)


def rl_monomial_derivative_oracle(alpha, mu, a: float, x: float) -> complex:
    """Closed form D_a+^alpha (t-a)^mu = Gamma(mu+1)/Gamma(mu+1-alpha) (x-a)^(mu-alpha)."""
    al = _alpha_of(alpha)
    if x <= a:
        raise DomainError(f"need x > a, got x={x}, a={a}")
    return gamma(mu + 1) / gamma(mu + 1 - al) * (x - a) ** (mu - al)


def rl_monomial_integral_oracle(alpha, mu, a: float, x: float) -> complex:
    """Closed form I_a+^alpha (t-a)^mu = Gamma(mu+1)/Gamma(mu+1+alpha) (x-a)^(mu+alpha)."""
    al = _alpha_of(alpha)
    if x <= a:
        raise DomainError(f"need x > a, got x={x}, a={a}")
    return gamma(mu + 1) / gamma(mu + 1 + al) * (x - a) ** (mu + al)
