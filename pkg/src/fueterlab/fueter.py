"""Fueter operators for a structural set, the Cauchy kernel, Teodorescu
transforms, and verifiers for the classical Stokes and Borel-Pompeiu identities.

Conventions.  Points are frame-coordinate vectors; a field value is a
quaternion component array.  For a frame psi, the left operator is
sum_k psi_k d/dx_k with x_k the frame coordinates, the right operator
multiplies psi_k from the right, and ``conjugate=True`` replaces the
multipliers psi_k by conj(psi_k) while keeping the same coordinates.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Callable, Optional, Sequence

import numpy as np

from .algebra import StructuralSet, qconj_arr, qmul_arr
from .errors import BoundaryTooCloseError, SingularPointError, UndefinedOnBoundaryError
from .fraccalc import Profile1D
from .geometry import Box4, PointFn, QuadratureSpec, boundary_integral, volume_integral
from .quadrature import gauss_rule, smoothstep, smoothstep_deriv
from .reports import IdentityReport, residual_report

TWO_PI2 = 2.0 * np.pi ** 2
FD_STEP_FRACTION = 1e-4


@dataclass(frozen=True)
class Field:
    """Evaluatable function on a box, with optional analytic first partials.

    ``fd_step`` overrides the finite-difference step used when no analytic
    partials are available (default: 1e-4 of the box edge).
    """

    value: PointFn
    box: Box4
    partials: Optional[Sequence[PointFn]] = None
    name: str = "field"
    fd_step: Optional[float] = None

    @property
    def smoothness_tag(self) -> str:
        return "analytic-partials" if self.partials is not None else "fd-only"

    def __call__(self, pts: np.ndarray) -> np.ndarray:
        return np.asarray(self.value(np.atleast_2d(pts)))

    def partial(self, axis: int, pts: np.ndarray) -> np.ndarray:
        pts = np.atleast_2d(pts)
        if self.partials is not None:
            return np.asarray(self.partials[axis](pts))
        h = self.fd_step if self.fd_step is not None else FD_STEP_FRACTION * float(self.box.edges[axis])
        lo, hi = self.box.a[axis], self.box.b[axis]
        if np.any(pts[:, axis] - 2 * h < lo) or np.any(pts[:, axis] + 2 * h > hi):
            raise BoundaryTooCloseError(
                f"finite-difference stencil along axis {axis} leaves the box")
        e = np.zeros(4)
        e[axis] = h
        return (-self(pts + 2 * e) + 8 * self(pts + e)
                - 8 * self(pts - e) + self(pts - 2 * e)) / (12 * h)

    def profile(self, axis: int, anchor: np.ndarray) -> Profile1D:
        """Restriction t -> f(anchor with coordinate ``axis`` replaced by t)."""
        anchor = np.asarray(anchor, dtype=float)

        def embed(t):
            pts = np.broadcast_to(anchor, (np.size(t), 4)).copy()
            pts[:, axis] = t
            return pts

        value = lambda t: self(embed(t))
        if self.partials is not None:
            partial = self.partials[axis]
            return Profile1D(value=value, derivative=lambda t: np.asarray(partial(embed(t))))
        return Profile1D(value=value)


def constant_field(value, box: Box4, name: str = "const") -> Field:
    c = np.asarray(value, dtype=complex if np.iscomplexobj(np.asarray(value)) else float)
    if c.ndim == 0:
        comp = np.zeros(4, dtype=c.dtype)
        comp[0] = c
        c = comp

    def val(pts):
        return np.broadcast_to(c, (pts.shape[0], 4)).copy()

    def zero(pts):
        return np.zeros((pts.shape[0], 4), dtype=c.dtype)

    return Field(value=val, box=box, partials=(zero, zero, zero, zero), name=name)


def multiply_field(h, f: Field, side: str = "left", name: Optional[str] = None) -> Field:
    """Pointwise h*f or f*h for a constant quaternion h; derivatives carry through."""
    hc = np.asarray(h, dtype=complex)
    if hc.ndim == 0:
        comp = np.zeros(4, dtype=complex)
        comp[0] = hc
        hc = comp

    def mul(vals):
        hb = np.broadcast_to(hc, vals.shape)
        return qmul_arr(hb, vals) if side == "left" else qmul_arr(vals, hb)

    partials = None
    if f.partials is not None:
        partials = tuple(
            (lambda ax: (lambda pts: mul(np.asarray(f.partials[ax](pts)))))(ax) for ax in range(4)
        )
    return Field(value=lambda pts: mul(f(pts)), box=f.box, partials=partials,
                 name=name or f"{'h*' if side == 'left' else ''}{f.name}{'*h' if side == 'right' else ''}")


# ---------------------------------------------------------------------------
# Fueter operators
# ---------------------------------------------------------------------------

def _multipliers(psi: StructuralSet, conjugate: bool) -> np.ndarray:
    return psi.conjugate_rows() if conjugate else psi.matrix


def fueter_left(psi: StructuralSet, f: Field, x, conjugate: bool = False) -> np.ndarray:
    """sum_k psi_k (d f / d x_k)(x); analytic partials when the field has them."""
    x = np.atleast_2d(np.asarray(x, dtype=float))
    mult = _multipliers(psi, conjugate)
    out = np.zeros((x.shape[0], 4), dtype=complex)
    for k in range(4):
        pk = np.broadcast_to(mult[k], (x.shape[0], 4))
        out = out + qmul_arr(pk, f.partial(k, x))
    return out[0] if out.shape[0] == 1 else out


def fueter_right(psi: StructuralSet, f: Field, x, conjugate: bool = False) -> np.ndarray:
    """sum_k (d f / d x_k)(x) psi_k."""
    x = np.atleast_2d(np.asarray(x, dtype=float))
    mult = _multipliers(psi, conjugate)
    out = np.zeros((x.shape[0], 4), dtype=complex)
    for k in range(4):
        pk = np.broadcast_to(mult[k], (x.shape[0], 4))
        out = out + qmul_arr(f.partial(k, x), pk)
    return out[0] if out.shape[0] == 1 else out


def laplacian(f: Field, x, step: Optional[float] = None) -> np.ndarray:
    """Componentwise 4D Laplacian by 4th-order finite differences."""
    x = np.atleast_2d(np.asarray(x, dtype=float))
    out = np.zeros((x.shape[0], 4), dtype=complex)
    for k in range(4):
        h = step if step is not None else FD_STEP_FRACTION ** 0.5 * float(f.box.edges[k])
        e = np.zeros(4)
        e[k] = h
        out = out + (-f(x + 2 * e) + 16 * f(x + e) - 30 * f(x)
                     + 16 * f(x - e) - f(x - 2 * e)) / (12 * h * h)
    return out[0] if out.shape[0] == 1 else out


# ---------------------------------------------------------------------------
# Cauchy kernel
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class KernelValue:
    value: np.ndarray
    source_point: np.ndarray
    field_point: np.ndarray


def kernel_at(psi: StructuralSet, diffs: np.ndarray) -> np.ndarray:
    """K(d) = conj(sum_k psi_k d_k) / (2 pi^2 |d|^4) for coordinate differences d."""
    diffs = np.asarray(diffs)
    q = psi.synth(diffs)
    r2 = (diffs ** 2).sum(axis=-1, keepdims=True)
    return qconj_arr(q) / (TWO_PI2 * r2 * r2)


def kernel_grad_at(psi: StructuralSet, diffs: np.ndarray, axis: int) -> np.ndarray:
    """d/d d_axis of the Cauchy kernel at coordinate differences d."""
    diffs = np.asarray(diffs)
    q = psi.synth(diffs)
    r2 = (diffs ** 2).sum(axis=-1, keepdims=True)
    e_conj = qconj_arr(psi.matrix[axis])
    return (e_conj / (r2 * r2)
            - 4.0 * qconj_arr(q) * diffs[..., axis:axis + 1] / (r2 ** 3)) / TWO_PI2


def cauchy_kernel(psi: StructuralSet, tau, x) -> KernelValue:
    """Pointwise kernel value; raises SingularPointError when |tau - x| < 1e-14."""
    tau = np.asarray(tau, dtype=float)
    x = np.asarray(x, dtype=float)
    d = tau - x
    if np.sqrt((d ** 2).sum()) < 1e-14:
        raise SingularPointError("Cauchy kernel evaluated at its singular point")
    return KernelValue(value=kernel_at(psi, d), source_point=tau, field_point=x)


# ---------------------------------------------------------------------------
# Teodorescu transforms
# ---------------------------------------------------------------------------

def teodorescu_left(psi: StructuralSet, f: Field, box: Box4, x, spec: QuadratureSpec,
                    exclusion_radius: Optional[float] = None,
                    smooth_exclusion: bool = True) -> np.ndarray:
    """T[f](x) = int K(x - y) f(y) dy over the box.

    The kernel argument orientation is the one for which the left operator
    inverts the transform (sum_k psi_k d/dx_k T[f] = f).
    """
    x = np.asarray(x, dtype=float)

    def integrand(pts):
        return qmul_arr(kernel_at(psi, x - pts), f(pts))

    return volume_integral(box, integrand, spec, singular_at=x,
                           exclusion_radius=exclusion_radius,
                           smooth_exclusion=smooth_exclusion)


def teodorescu_right(psi: StructuralSet, f: Field, box: Box4, x, spec: QuadratureSpec,
                     exclusion_radius: Optional[float] = None,
                     smooth_exclusion: bool = True) -> np.ndarray:
    """T_r[f](x) = int f(y) K(x - y) dy over the box."""
    x = np.asarray(x, dtype=float)

    def integrand(pts):
        return qmul_arr(f(pts), kernel_at(psi, x - pts))

    return volume_integral(box, integrand, spec, singular_at=x,
                           exclusion_radius=exclusion_radius,
                           smooth_exclusion=smooth_exclusion)


def _cell24() -> np.ndarray:
    """Vertices of the 24-cell: a spherical 5-design on S^3 with equal weights."""
    pts = []
    for k in range(4):
        for s in (1.0, -1.0):
            v = np.zeros(4)
            v[k] = s
            pts.append(v)
    for m in range(16):
        signs = [(0.5 if (m >> b) & 1 == 0 else -0.5) for b in range(4)]
        pts.append(np.array(signs))
    return np.array(pts)

_CELL24 = _cell24()


class _HybridTeodorescu:
    """Differentiable Teodorescu evaluation around a reference probe region.

    Far field: the box integrand with a wide C^2 radial cutoff rho on
    [e0, e1], handled by the tensor Gauss rule (the cutoff integrand is
    globally smooth).  Near field: the ball |z| < e1 in kernel-centered
    coordinates, radial Gauss nodes times the 24-cell angular design.  The
    ring of the cutoff carries the reproducing mass, and both pieces have
    exact derivatives, so the object differentiates cleanly.
    """

    def __init__(self, psi: StructuralSet, f: Field, box: Box4, spec: QuadratureSpec,
                 reference_point, side: str = "left", ring_fraction: float = 0.35):
        self.psi, self.f, self.box, self.side = psi, f, box, side
        ref = np.asarray(reference_point, dtype=float)
        dist = box.boundary_distance(ref)
        if dist <= 0:
            raise UndefinedOnBoundaryError("reference point must be interior to the box")
        self.e1 = 0.9 * dist
        self.e0 = ring_fraction * self.e1
        n = spec.nodes_per_axis
        self.axis_rules = [gauss_rule(float(box.a[k]), float(box.b[k]), n) for k in range(4)]
        self.n_radial = max(16, 2 * n)

    def _mul(self, kv, fv):
        return qmul_arr(kv, fv) if self.side == "left" else qmul_arr(fv, kv)

    def _far(self, x, want_grads):
        (t0, w0), (t1, w1), (t2, w2), (t3, w3) = self.axis_rules
        g1, g2, g3 = np.meshgrid(t1, t2, t3, indexing="ij")
        w123 = (w1[:, None, None] * w2[None, :, None] * w3[None, None, :]).ravel()
        base = np.empty((g1.size, 4))
        base[:, 1] = g1.ravel()
        base[:, 2] = g2.ravel()
        base[:, 3] = g3.ravel()
        val = np.zeros(4, dtype=complex)
        grads = [np.zeros(4, dtype=complex) for _ in range(4)] if want_grads else None
        for i0 in range(t0.size):
            base[:, 0] = t0[i0]
            d = x - base
            r = np.sqrt((d ** 2).sum(axis=1))
            keep = r > self.e0
            db, rb, wb = d[keep], r[keep], w123[keep]
            rho = smoothstep(rb, self.e0, self.e1)
            kv = kernel_at(self.psi, db)
            fv = self.f(base[keep])
            kf = self._mul(kv, fv)
            val = val + w0[i0] * ((wb * rho)[:, None] * kf).sum(axis=0)
            if want_grads:
                drho = smoothstep_deriv(rb, self.e0, self.e1)
                for c in range(4):
                    term = ((wb * rho)[:, None] * self._mul(kernel_grad_at(self.psi, db, c), fv)
                            + (wb * drho * db[:, c] / rb)[:, None] * kf)
                    grads[c] = grads[c] + w0[i0] * term.sum(axis=0)
        return val, grads

    def _near(self, x, want_grads):
        r, wr = gauss_rule(0.0, self.e1, self.n_radial)
        hole = 1.0 - smoothstep(r, self.e0, self.e1)
        pts = x[None, None, :] + r[:, None, None] * _CELL24[None, :, :]
        flat = pts.reshape(-1, 4)
        komega = qconj_arr(self.psi.synth(_CELL24))  # r^3 K(r w) = conj(w_psi)/(2 pi^2)
        val = np.zeros(4, dtype=complex)
        grads = [np.zeros(4, dtype=complex) for _ in range(4)] if want_grads else None
        fv = self.f(flat).reshape(self.n_radial, 24, 4)
        contrib = self._mul(np.broadcast_to(komega, fv.shape), fv).mean(axis=1) / TWO_PI2
        val = ((wr * hole)[:, None] * contrib).sum(axis=0)
        if want_grads:
            for c in range(4):
                gv = self.f.partial(c, flat).reshape(self.n_radial, 24, 4)
                gc = self._mul(np.broadcast_to(komega, gv.shape), gv).mean(axis=1) / TWO_PI2
                grads[c] = ((wr * hole)[:, None] * gc).sum(axis=0)
        return val, grads

    def value(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return self._far(x, False)[0] + self._near(x, False)[0]

    def value_and_grads(self, x):
        x = np.asarray(x, dtype=float)
        vf, gf = self._far(x, True)
        vn, gn = self._near(x, True)
        return vf + vn, [gf[c] + gn[c] for c in range(4)]


def teodorescu_field(psi: StructuralSet, f: Field, box: Box4, spec: QuadratureSpec,
                     reference_point=None, side: str = "left") -> Field:
    """T[f] (or T_r[f]) as a Field with exact partial derivatives of the
    discrete quadrature object, valid near ``reference_point`` (default: box
    center).  Evaluation points should stay within the reference region."""
    ref = box.center if reference_point is None else np.asarray(reference_point, dtype=float)
    hyb = _HybridTeodorescu(psi, f, box, spec, ref, side=side)

    def value(pts):
        pts = np.atleast_2d(pts)
        return np.stack([hyb.value(p) for p in pts])

    def make_partial(axis):
        def partial(pts):
            pts = np.atleast_2d(pts)
            return np.stack([hyb.value_and_grads(p)[1][axis] for p in pts])
        return partial

    name = f"T[{f.name}]" if side == "left" else f"Tr[{f.name}]"
    return Field(value=value, box=box, partials=tuple(make_partial(c) for c in range(4)),
                 name=name)


# ---------------------------------------------------------------------------
# classical identity verifiers
# ---------------------------------------------------------------------------

def stokes_classical_residual(psi: StructuralSet, f: Field, g: Field, box: Box4,
                              spec: QuadratureSpec, tolerance: float = 1e-8) -> IdentityReport:
    """Boundary integral of g sigma f minus the volume integral of
    g (D f) + (D_r g) f; the residual pins the sigma sign convention."""
    lhs = boundary_integral(box, g.value, f.value, psi, spec)

    def integrand(pts):
        return (qmul_arr(g(pts), fueter_left(psi, f, pts))
                + qmul_arr(fueter_right(psi, g, pts), f(pts)))

    rhs = volume_integral(box, integrand, spec)
    return residual_report("stokes-classical", lhs, rhs, tolerance,
                           nodes=spec.nodes_per_axis, corpus=f"g={g.name},f={f.name}")


def borel_pompeiu_classical_residual(psi: StructuralSet, f: Field, g: Field, box: Box4,
                                     x, spec: QuadratureSpec,
                                     tolerance: float = 5e-2) -> IdentityReport:
    """Residual of: boundary(K sigma f + g sigma K) - volume(K Df + D_r[g] K)
    = f(x) + g(x) inside the box, or 0 outside."""
    x = np.asarray(x, dtype=float)
    if not (box.contains(x) or box.strictly_outside(x)):
        raise UndefinedOnBoundaryError("probe point lies on (or numerically at) the boundary")
    interior = box.contains(x)

    bnd = boundary_integral(box, lambda p: kernel_at(psi, p - x), f.value, psi, spec)
    bnd = bnd + boundary_integral(box, g.value, lambda p: kernel_at(psi, p - x), psi, spec)

    def vol_integrand(pts):
        kv = kernel_at(psi, pts - x)
        return (qmul_arr(kv, fueter_left(psi, f, pts))
                + qmul_arr(fueter_right(psi, g, pts), kv))

    sing = x if interior else None
    eps = spec.exclusion_radius
    vol = volume_integral(box, vol_integrand, spec, singular_at=sing, exclusion_radius=eps)

    rhs = (f(x[None, :])[0] + g(x[None, :])[0]) if interior else np.zeros(4)
    lhs = bnd - vol
    rep = residual_report("borel-pompeiu-classical", lhs, rhs, tolerance,
                          nodes=spec.nodes_per_axis,
                          corpus=f"f={f.name},g={g.name}",
                          probe_points=[x])
    rep.extra["interior"] = interior
    if interior:
        from .geometry import default_exclusion_radius
        rep.epsilon = eps if eps is not None else default_exclusion_radius(box, spec)
    # exterior scale: compare against the field size, not the zero vector
    if not interior:
        scaled = float(max(np.abs(f(x[None, :])).max(), np.abs(g(x[None, :])).max(), 1.0))
        rep.scale = scaled
    return rep
