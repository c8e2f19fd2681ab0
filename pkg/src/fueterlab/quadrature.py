"""One-dimensional quadrature building blocks shared by the 1D and 4D integrators."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class QuadratureSpec:
    """Grid parameters for every integral in the library.

    nodes_per_axis   tensor-rule node count per axis of a 4D box
    rule             "gauss" for smooth integrands, "graded-trapezoid" near singularities
    exclusion_radius ball radius around a singular point (None = derive from the grid)
    grading_exponent clustering strength of graded meshes (>= 1)
    nodes_1d         node count of 1D product-integration rules (None = 4*nodes_per_axis,
                     clamped to [48, 256])
    """

    nodes_per_axis: int = 12
    rule: str = "gauss"
    exclusion_radius: float | None = None
    grading_exponent: float = 2.0
    nodes_1d: int | None = None

    def __post_init__(self):
        if self.nodes_per_axis < 2:
            raise ValueError("nodes_per_axis must be >= 2")
        if self.rule not in ("gauss", "graded-trapezoid"):
            raise ValueError(f"unknown rule {self.rule!r}")
        if self.grading_exponent < 1.0:
            raise ValueError("grading_exponent must be >= 1")

    @property
    def n1d(self) -> int:
        if self.nodes_1d is not None:
            return self.nodes_1d
        return int(np.clip(4 * self.nodes_per_axis, 48, 256))

    def with_nodes(self, nodes_per_axis: int) -> "QuadratureSpec":
        return QuadratureSpec(nodes_per_axis, self.rule, self.exclusion_radius,
                              self.grading_exponent, self.nodes_1d)


def gauss_rule(lo: float, hi: float, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights on [lo, hi]."""
    x, w = np.polynomial.legendre.leggauss(n)
    return 0.5 * (hi - lo) * (x + 1.0) + lo, 0.5 * (hi - lo) * w


def graded_nodes_toward(a: float, x: float, n: int, grading: float) -> np.ndarray:
    """n+1 nodes on [a, x] clustered at x: t_m = x - (x-a)((n-m)/n)^grading."""
    m = np.arange(n + 1)
    return x - (x - a) * ((n - m) / n) ** grading


def trapezoid_weights(t: np.ndarray) -> np.ndarray:
    """Trapezoid weights on an arbitrary increasing mesh."""
    w = np.zeros_like(t)
    h = np.diff(t)
    w[:-1] += 0.5 * h
    w[1:] += 0.5 * h
    return w


def graded_rule_toward(lo: float, hi: float, s: float, n: int,
                       grading: float) -> tuple[np.ndarray, np.ndarray]:
    """Trapezoid rule on [lo, hi] with nodes clustered toward s (clamped into the span).

    Splits the node budget between [lo, s] and [s, hi] in proportion to length,
    so the mesh resolves a point singularity at s from both sides.
    """
    s = float(np.clip(s, lo, hi))
    if s <= lo:
        t = lo + (hi - lo) * (np.arange(n + 1) / n) ** grading
    elif s >= hi:
        t = graded_nodes_toward(lo, hi, n, grading)
    else:
        frac = (s - lo) / (hi - lo)
        nl = int(np.clip(round(n * frac), 1, n - 1))
        nr = n - nl
        left = graded_nodes_toward(lo, s, nl, grading)
        u = np.arange(nr + 1) / nr
        right = s + (hi - s) * u ** grading
        t = np.concatenate([left, right[1:]])
    return t, trapezoid_weights(t)


def graded_midpoint_rule_toward(lo: float, hi: float, s: float, n: int,
                                grading: float) -> tuple[np.ndarray, np.ndarray]:
    """Midpoint rule on cells graded toward s; nodes stay strictly interior.

    Suits integrands with integrable endpoint/face singularities that must
    never be evaluated on the boundary itself.
    """
    edges, _ = graded_rule_toward(lo, hi, s, n, grading)
    nodes = 0.5 * (edges[:-1] + edges[1:])
    return nodes, np.diff(edges)


def both_ends_edges(lo: float, hi: float, n: int, grading: float) -> np.ndarray:
    """Cell edges on [lo, hi] clustered at both endpoints."""
    u = np.arange(n + 1) / n
    blend = u ** grading / (u ** grading + (1 - u) ** grading)
    return lo + (hi - lo) * blend


def doubly_graded_midpoint(lo: float, hi: float, s: float, n: int,
                           grading: float) -> tuple[np.ndarray, np.ndarray]:
    """Midpoint cells on [lo, hi] clustered at lo and at an interior point s.

    Resolves simultaneously a face singularity at the lower endpoint and a
    tube/point singularity at s.
    """
    s = float(np.clip(s, lo, hi))
    if s <= lo or s >= hi:
        return graded_midpoint_rule_toward(lo, hi, s, n, grading)
    nl = int(np.clip(round(n * (s - lo) / (hi - lo)), 2, n - 2))
    nr = n - nl
    e1 = both_ends_edges(lo, s, nl, grading)
    u = np.arange(nr + 1) / nr
    e2 = s + (hi - s) * u ** grading
    edges = np.concatenate([e1, e2[1:]])
    return 0.5 * (edges[:-1] + edges[1:]), np.diff(edges)


def two_sided_graded_nodes(a: float, x: float, n: int, grading_lower: float,
                           grading_upper: float) -> np.ndarray:
    """Nodes on [a, x] clustered at both terminals (product-integration mesh)."""
    mid = 0.5 * (a + x)
    nl = n // 2
    lower = a + (mid - a) * (np.arange(nl + 1) / nl) ** grading_lower
    upper = graded_nodes_toward(mid, x, n - nl, grading_upper)
    return np.concatenate([lower, upper[1:]])


def icosahedron_vertices() -> np.ndarray:
    """The 12 icosahedron vertices: an antipodal spherical design on S^2."""
    phi = (1.0 + np.sqrt(5.0)) / 2.0
    raw = []
    for a, b in ((1.0, phi), (-1.0, phi), (1.0, -phi), (-1.0, -phi)):
        raw.extend([(0.0, a, b), (a, b, 0.0), (b, 0.0, a)])
    pts = np.array(raw) / np.sqrt(1.0 + phi * phi)
    return pts


def smoothstep(r: np.ndarray, e0: float, e1: float) -> np.ndarray:
    """C^2 quintic ramp: 0 for r <= e0, 1 for r >= e1."""
    u = np.clip((r - e0) / (e1 - e0), 0.0, 1.0)
    return u * u * u * (10.0 + u * (-15.0 + 6.0 * u))


def smoothstep_deriv(r: np.ndarray, e0: float, e1: float) -> np.ndarray:
    """Radial derivative of ``smoothstep``."""
    u = np.clip((r - e0) / (e1 - e0), 0.0, 1.0)
    return 30.0 * u * u * (1.0 - u) ** 2 / (e1 - e0)


def product_weights(t: np.ndarray, x: float, mu: complex) -> np.ndarray:
    """Weights w with sum w_m f(t_m) ~ int_t0^tN f(tau) (x - tau)^(mu - 1) dtau.

    Exact whenever f is piecewise linear on the mesh; requires Re(mu) > 0 and
    t increasing with t[-1] <= x.  Powers are taken of positive reals, so the
    principal branch is unambiguous for complex mu.
    """
    d = (x - t).astype(complex if np.iscomplexobj(np.asarray(mu)) or isinstance(mu, complex) else float)
    h = np.diff(t)
    dm, dp = d[:-1], d[1:]
    with np.errstate(invalid="ignore"):
        pm, pp = dm ** mu, dp ** mu
        qm, qp = dm ** (mu + 1), dp ** (mu + 1)
    # d == 0 contributes 0 for Re(mu) > 0; 0**complex yields nan in numpy
    pp = np.where(dp == 0, 0.0, pp)
    qp = np.where(dp == 0, 0.0, qp)
    mu0 = (pm - pp) / mu
    mu1 = (qm - qp) / (mu + 1)
    w = np.zeros(t.size, dtype=mu0.dtype)
    w[:-1] += (mu1 - dp * mu0) / h
    w[1:] += (dm * mu0 - mu1) / h
    return w


def mirror_product_weights(t: np.ndarray, x: float, mu: complex) -> np.ndarray:
    """Weights for int f(tau) (tau - x)^(mu - 1) dtau on a mesh with t[0] >= x."""
    # reflect tau -> 2x - tau maps it to the left-sided problem
    tr = np.flip(2.0 * x - t)
    wr = product_weights(tr, x, mu)
    return np.flip(wr)
