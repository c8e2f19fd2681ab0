"""Fractional Fueter operators with a frozen anchor point, the axiswise
fractional integrals, the gradient potential, and verifiers for their
interrelations.

All fractional operators here act axis by axis: the operand is restricted to
the segment through the anchor ``q`` along one axis, a one-dimensional
Riemann-Liouville operator with lower terminal at the box corner is applied,
and frame vectors multiply the outcome.  Compositions of two fractional
operators pair the axes (the j-th outer derivative acts on the j-th inner
component); this is the reading under which the stated composition identities
hold, since a Riemann-Liouville derivative of a frozen constant does not
vanish.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy.special import gamma

from .algebra import StructuralSet, qconj_arr, qmul_arr
from .errors import DomainError, OrderOutOfRangeError
from .fraccalc import Profile1D, rl_derivative_left, rl_integral_left, rl_monomial_derivative_oracle
from .fueter import FD_STEP_FRACTION, Field, fueter_left, fueter_right, laplacian
from .geometry import Box4
from .quadrature import QuadratureSpec, gauss_rule, graded_nodes_toward, product_weights
from .reports import IdentityReport, residual_report


@dataclass(frozen=True)
class FracOrderVec:
    """Order vector (alpha_0..alpha_3) with 0 < Re(alpha_k) < 1."""

    alphas: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.alphas, dtype=complex).copy()
        if a.shape != (4,):
            raise ValueError("order vector needs 4 entries")
        if np.any(a.real <= 0) or np.any(a.real >= 1):
            raise OrderOutOfRangeError(f"orders must satisfy 0 < Re < 1, got {a}")
        a.setflags(write=False)
        object.__setattr__(self, "alphas", a)

    @classmethod
    def uniform(cls, alpha) -> "FracOrderVec":
        return cls(np.full(4, complex(alpha)))

    def __getitem__(self, k: int) -> complex:
        return complex(self.alphas[k])

    def __add__(self, other: "FracOrderVec") -> "FracOrderVec":
        return FracOrderVec(self.alphas + other.alphas)


@dataclass(frozen=True)
class AnchoredPoint:
    """Frozen anchor q and active point x, both interior to the working box."""

    q: np.ndarray
    x: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "q", np.asarray(self.q, dtype=float))
        object.__setattr__(self, "x", np.asarray(self.x, dtype=float))

    def validate(self, box: Box4, x_may_be_exterior: bool = False):
        if not box.contains(self.q):
            raise DomainError("anchor q must be interior to the box")
        if not x_may_be_exterior and not box.contains(self.x):
            raise DomainError("active point x must be interior to the box")
        return self


# ---------------------------------------------------------------------------
# batched product integration (affine self-similarity of the graded mesh)
# ---------------------------------------------------------------------------

class BatchIntegrator:
    """Evaluates s -> (I_a+^mu prof)(s) at many points with one weight table.

    The graded mesh t_m(x) = a + (x - a) c_m is affine in the upper limit, so
    the product-integration weights scale as (x - a)^mu times fixed unit
    weights.  One profile evaluation per (point, node) pair remains.
    """

    def __init__(self, mu: complex, a: float, spec: QuadratureSpec):
        self.mu = complex(mu)
        if self.mu.real <= 0:
            raise DomainError(f"Re(mu) must be positive, got {mu}")
        self.a = float(a)
        from .quadrature import two_sided_graded_nodes
        unit = two_sided_graded_nodes(0.0, 1.0, spec.n1d, spec.grading_exponent + 1.0,
                                      spec.grading_exponent)
        self.rel = unit  # c_m in [0, 1]
        self.unit_weights = product_weights(unit, 1.0, self.mu) / gamma(self.mu)

    def __call__(self, prof: Profile1D, xs: np.ndarray) -> np.ndarray:
        xs = np.atleast_1d(np.asarray(xs, dtype=float))
        if np.any(xs < self.a):
            raise DomainError("upper limits must satisfy x >= a")
        span = xs - self.a
        nodes = self.a + span[:, None] * self.rel[None, :]
        vals = prof(nodes.ravel()).reshape(xs.size, self.rel.size, 4)
        out = np.einsum("m,xmc->xc", self.unit_weights, vals)
        scale = np.zeros(xs.size, dtype=complex)
        pos = span > 0
        scale[pos] = span[pos].astype(complex) ** self.mu
        return out * scale[:, None]


class BatchFracDerivative:
    """(D_a+^alpha prof) at many points via the absolutely-continuous form.

    Requires an analytic profile derivative; the boundary term and the
    order-(1-alpha) integral of the derivative are both batched.
    """

    def __init__(self, alpha: complex, a: float, spec: QuadratureSpec):
        self.alpha = complex(alpha)
        if not 0 < self.alpha.real < 1:
            raise OrderOutOfRangeError(f"derivative order must lie in the strip, got {alpha}")
        self.a = float(a)
        self.integ = BatchIntegrator(1 - self.alpha, a, spec)

    def __call__(self, prof: Profile1D, xs: np.ndarray) -> np.ndarray:
        if prof.derivative is None:
            raise DomainError("batched derivative needs an analytic profile derivative")
        xs = np.atleast_1d(np.asarray(xs, dtype=float))
        if np.any(xs <= self.a):
            raise DomainError("points must lie strictly above the lower terminal")
        fa = prof(np.array([self.a]))[0]
        head = fa[None, :] * ((xs - self.a).astype(complex) ** (-self.alpha))[:, None] \
            / gamma(1 - self.alpha)
        return head + self.integ(Profile1D(prof.derivative), xs)


# ---------------------------------------------------------------------------
# operators
# ---------------------------------------------------------------------------

def _check_axis_domain(box: Box4, x: np.ndarray):
    if np.any(x <= box.a):
        raise DomainError(f"every x_k must exceed the lower corner, got x={x}, a={box.a}")


def frac_fueter_left(psi: StructuralSet, alpha: FracOrderVec, f: Field, box: Box4,
                     anchored: AnchoredPoint, spec: QuadratureSpec,
                     conjugate: bool = False) -> np.ndarray:
    """sum_j psi_j (D_{a_j+}^{alpha_j} f)(q_0,..,x_j,..,q_3)."""
    q, x = anchored.q, anchored.x
    _check_axis_domain(box, x)
    mult = psi.conjugate_rows() if conjugate else psi.matrix
    out = np.zeros(4, dtype=complex)
    for j in range(4):
        dj = rl_derivative_left(f.profile(j, q), alpha[j], float(box.a[j]), float(x[j]), spec)
        out = out + qmul_arr(mult[j], dj)
    return out


def frac_fueter_right(psi: StructuralSet, alpha: FracOrderVec, f: Field, box: Box4,
                      anchored: AnchoredPoint, spec: QuadratureSpec,
                      conjugate: bool = False) -> np.ndarray:
    """sum_j (D_{a_j+}^{alpha_j} f)(q_0,..,x_j,..,q_3) psi_j."""
    q, x = anchored.q, anchored.x
    _check_axis_domain(box, x)
    mult = psi.conjugate_rows() if conjugate else psi.matrix
    out = np.zeros(4, dtype=complex)
    for j in range(4):
        dj = rl_derivative_left(f.profile(j, q), alpha[j], float(box.a[j]), float(x[j]), spec)
        out = out + qmul_arr(dj, mult[j])
    return out


def frac_integral_j(psi: StructuralSet, alpha: FracOrderVec, f: Field, box: Box4,
                    anchored: AnchoredPoint, spec: QuadratureSpec) -> np.ndarray:
    """sum_j (1/2Gamma(a_j)) int [conj(psi_j) f + conj(f) psi_j] (x_j-t)^(a_j-1) dt."""
    q, x = anchored.q, anchored.x
    _check_axis_domain(box, x)
    out = np.zeros(4, dtype=complex)
    conj_rows = psi.conjugate_rows()
    for j in range(4):
        ij = rl_integral_left(f.profile(j, q), alpha[j], float(box.a[j]), float(x[j]), spec,
                              _allow_endpoint=True)
        term = 0.5 * (qmul_arr(conj_rows[j], ij) + qmul_arr(qconj_arr(ij), psi.matrix[j]))
        out = out + term
    return out


def frac_integral_j_component(psi: StructuralSet, alpha: FracOrderVec, f: Field, box: Box4,
                              q: np.ndarray, j: int) -> Profile1D:
    """The j-th axis component of the integral above as a 1D profile of x_j."""
    prof = f.profile(j, q)
    conj_j = psi.conjugate_rows()[j]
    psi_j = psi.matrix[j]

    def value(ts):
        ts = np.atleast_1d(ts)
        out = np.empty((ts.size, 4), dtype=complex)
        for m, t in enumerate(ts):
            ij = rl_integral_left(prof, alpha[j], float(box.a[j]), float(t),
                                  _allow_endpoint=True)
            out[m] = 0.5 * (qmul_arr(conj_j, ij) + qmul_arr(qconj_arr(ij), psi_j))
        return out

    return Profile1D(value=value)


def cal_i(psi: StructuralSet, alpha: FracOrderVec, f: Field, box: Box4,
          anchored: AnchoredPoint, spec: QuadratureSpec) -> np.ndarray:
    """Gradient potential sum_k (I_{a_k+}^{1-alpha_k} f)(q_0,..,x_k,..,q_3).

    Axiswise antiderivative of the fractional operator: applying the frame
    gradient in x recovers the fractional operator exactly.  Each term is a
    one-dimensional integral of order 1 - alpha_k along the k-th segment
    through the anchor.
    """
    q, x = anchored.q, anchored.x
    _check_axis_domain(box, x)
    out = np.zeros(4, dtype=complex)
    for k in range(4):
        out = out + rl_integral_left(f.profile(k, q), 1 - alpha[k], float(box.a[k]),
                                     float(x[k]), spec, _allow_endpoint=True)
    return out


def cal_i_field(psi: StructuralSet, alpha: FracOrderVec, f: Field, box: Box4,
                q: np.ndarray, spec: QuadratureSpec,
                fd_step: Optional[float] = None) -> Field:
    """The potential as a field of the active point (anchor frozen)."""
    q = np.asarray(q, dtype=float)
    integrators = [BatchIntegrator(1 - alpha[k], float(box.a[k]), spec) for k in range(4)]
    profiles = [f.profile(k, q) for k in range(4)]

    def value(pts):
        pts = np.atleast_2d(pts)
        out = np.zeros((pts.shape[0], 4), dtype=complex)
        for k in range(4):
            out = out + integrators[k](profiles[k], pts[:, k])
        return out

    step = fd_step if fd_step is not None else float(box.edges.max()) / (4 * spec.nodes_per_axis)
    return Field(value=value, box=box, partials=None, name=f"calI[{f.name}]", fd_step=step)


def cal_i_quadrature_oracle(psi: StructuralSet, alpha: FracOrderVec, f: Field, box: Box4,
                            anchored: AnchoredPoint, nodes: int = 48,
                            grading: float = 3.0) -> np.ndarray:
    """Independent evaluation of the potential by direct quadrature of its
    weighted-volume form over the sub-box from the corner to x:

        (1/m) int_{J_a^x} sum_k f(q_{tau,k}) (x_k - tau_k)^(-alpha_k) (x_k - a_k)
                                 / Gamma(1 - alpha_k) d tau

    Uses a per-axis mesh graded into the singular face tau_k = x_k.
    """
    q, x = anchored.q, anchored.x
    _check_axis_domain(box, x)
    rules = [ (graded_nodes_toward(float(box.a[k]), float(x[k]), nodes, grading)) for k in range(4) ]
    from .quadrature import trapezoid_weights
    weights = [trapezoid_weights(t) for t in rules]
    m = float(np.prod(x - box.a))
    total = np.zeros(4, dtype=complex)
    t1, t2, t3 = rules[1], rules[2], rules[3]
    g1, g2, g3 = np.meshgrid(t1, t2, t3, indexing="ij")
    w123 = (weights[1][:, None, None] * weights[2][None, :, None] * weights[3][None, None, :]).ravel()
    tau = np.empty((g1.size, 4))
    tau[:, 1] = g1.ravel()
    tau[:, 2] = g2.ravel()
    tau[:, 3] = g3.ravel()
    for i0 in range(rules[0].size):
        tau[:, 0] = rules[0][i0]
        acc = np.zeros((tau.shape[0], 4), dtype=complex)
        for k in range(4):
            pts = np.broadcast_to(q, tau.shape).copy()
            pts[:, k] = tau[:, k]
            d = x[k] - tau[:, k]
            wk = np.zeros(tau.shape[0], dtype=complex)
            ok = d > 1e-14
            wk[ok] = d[ok] ** (-alpha[k]) * (x[k] - box.a[k]) / gamma(1 - alpha[k])
            acc = acc + f(pts) * wk[:, None]
        total = total + weights[0][i0] * (w123[:, None] * acc).sum(axis=0)
    return total / m


# ---------------------------------------------------------------------------
# nested axis compositions
# ---------------------------------------------------------------------------

def nested_rl_derivative(prof: Profile1D, outer, inner, a: float, x: float,
                         spec: QuadratureSpec) -> np.ndarray:
    """(D^outer (D^inner prof))(x) along one axis.

    The inner derivative splits into the closed-form power carried by prof(a)
    and a bounded remainder (the order-(1-inner) integral of prof'), keeping
    the outer integrand finite at the lower terminal.  The remainder's outer
    derivative is computed fully numerically.
    """
    outer, inner = complex(outer), complex(inner)
    if prof.derivative is None:
        raise DomainError("nested composition needs an analytic profile derivative")
    fa = prof(np.array([a]))[0]
    head = fa * rl_monomial_derivative_oracle(outer, -inner, a, x) / gamma(1 - inner)
    deriv = Profile1D(prof.derivative)

    def remainder(ts):
        ts = np.atleast_1d(ts)
        out = np.empty((ts.size, 4), dtype=complex)
        for m, t in enumerate(ts):
            out[m] = rl_integral_left(deriv, 1 - inner, a, float(t), spec, _allow_endpoint=True)
        return out

    tail = rl_derivative_left(Profile1D(remainder), outer, a, x, spec)
    return head + tail


def integral_of_axis_derivative(alpha_k, beta_k, prof: Profile1D, a: float, x: float,
                                spec: QuadratureSpec) -> np.ndarray:
    """(I^{1-alpha_k} D^{beta_k} prof)(x) along one axis.

    The derivative's corner-value singularity (s-a)^(-beta_k) is integrated in
    closed form so the outer product rule only sees the bounded remainder.
    """
    al, be = complex(alpha_k), complex(beta_k)
    if prof.derivative is None:
        raise DomainError("axis composition needs an analytic profile derivative")
    fa = prof(np.array([a]))[0]
    head = fa * (x - a) ** (1 - al - be) / gamma(2 - al - be)
    integ = BatchIntegrator(1 - be, a, spec)
    deriv = Profile1D(prof.derivative)

    def remainder(ts):
        return integ(deriv, np.atleast_1d(ts))

    tail = rl_integral_left(Profile1D(remainder), 1 - al, a, x, spec, _allow_endpoint=True)
    return head + tail


# ---------------------------------------------------------------------------
# identity verifiers
# ---------------------------------------------------------------------------

FRAC_IDENTITIES = ("eq5", "eq6", "eq7", "laplacian", "eq8", "eq9")


def verify_frac_identity(identity: str, psi: StructuralSet, alpha: FracOrderVec,
                         f: Field, box: Box4, anchored: AnchoredPoint,
                         spec: QuadratureSpec, beta: Optional[FracOrderVec] = None,
                         tolerance: float = 1e-3) -> IdentityReport:
    """Compute both sides of one stated relation by independent numerical paths."""
    if identity not in FRAC_IDENTITIES:
        raise ValueError(f"unknown identity {identity!r}")
    q, x = anchored.q, anchored.x
    meta = dict(nodes=spec.nodes_per_axis, corpus=f.name, probe_points=[x])

    if identity == "eq5":
        pot = cal_i_field(psi, alpha, f, box, q, spec)
        lhs = fueter_left(psi, pot, x)
        rhs = frac_fueter_left(psi, alpha, f, box, anchored, spec)
        rep = residual_report("eq5", lhs, rhs, tolerance, **meta)
        rep.fd_step = pot.fd_step
        return rep

    if identity in ("eq6", "eq7"):
        pt = q if identity == "eq7" else x
        lhs = np.zeros(4, dtype=complex)
        for j in range(4):
            comp = frac_integral_j_component(psi, alpha, f, box, q, j)
            dj = rl_derivative_left(comp, alpha[j], float(box.a[j]), float(pt[j]), spec)
            lhs = lhs + qmul_arr(psi.matrix[j], dj)
        if identity == "eq7":
            rhs = f(q[None, :])[0]
        else:
            rhs = np.zeros(4, dtype=complex)
            for j in range(4):
                pj = np.array(q, copy=True)
                pj[j] = x[j]
                coords = psi.coords(f(pj[None, :])[0])
                rhs = rhs + coords[j] * psi.matrix[j]
        return residual_report(identity, lhs, rhs, tolerance, **meta)

    if identity == "laplacian":
        op_field = Field(
            value=lambda pts: np.stack([
                frac_fueter_left(psi, alpha, f, box, AnchoredPoint(q, p), spec) for p in np.atleast_2d(pts)
            ]),
            box=box, name="fracop", fd_step=float(box.edges.max()) / (4 * spec.nodes_per_axis))
        lhs = fueter_left(psi, op_field, x, conjugate=True)
        pot = cal_i_field(psi, alpha, f, box, q, spec)
        rhs = laplacian(pot, x, step=float(box.edges.max()) / (4 * spec.nodes_per_axis))
        rep = residual_report("laplacian", lhs, rhs, tolerance, **meta)
        rep.fd_step = op_field.fd_step
        return rep

    # eq8 / eq9: composition against the single operator of summed order
    if beta is None:
        raise ValueError(f"{identity} needs a second order vector")
    total = alpha.alphas + beta.alphas
    if np.any(total.real >= 1) or np.any(total.real <= 0):
        raise OrderOutOfRangeError(f"summed orders must stay in the strip, got {total}")
    conjugate_outer = identity == "eq9"
    mult = psi.conjugate_rows() if conjugate_outer else psi.matrix
    lhs = np.zeros(4, dtype=complex)
    rhs = np.zeros(4, dtype=complex)
    for j in range(4):
        prof = f.profile(j, q)
        nested = nested_rl_derivative(prof, alpha[j], beta[j], float(box.a[j]), float(x[j]), spec)
        lhs = lhs + qmul_arr(mult[j], qmul_arr(psi.matrix[j], nested))
        direct = rl_derivative_left(prof, complex(total[j]), float(box.a[j]), float(x[j]), spec)
        rhs = rhs + qmul_arr(mult[j], qmul_arr(psi.matrix[j], direct))
    return residual_report(identity, lhs, rhs, tolerance, **meta)
