"""4D boxes, their boundary faces, and tensor-rule volume/boundary quadrature.

Points are frame-coordinate vectors of shape (4,); integrands and boundary
factors are vectorized callables mapping point batches (N, 4) to quaternion
component batches (N, 4).  All reductions run in a fixed order, so results
are bit-reproducible for a given spec.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterator, Optional

import numpy as np

from .algebra import StructuralSet, qmul_arr
from .errors import SingularityOnGridError
from .quadrature import QuadratureSpec, gauss_rule, graded_rule_toward, smoothstep

PointFn = Callable[[np.ndarray], np.ndarray]
WeightFn = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class Box4:
    """Open hyperrectangle prod_k (a_k, b_k) in frame coordinates."""

    a: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.a, dtype=float).copy()
        b = np.asarray(self.b, dtype=float).copy()
        if a.shape != (4,) or b.shape != (4,):
            raise ValueError("box corners must be 4-vectors")
        if not np.all(a < b):
            raise ValueError(f"need a_k < b_k for all k, got a={a}, b={b}")
        a.setflags(write=False)
        b.setflags(write=False)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def edges(self) -> np.ndarray:
        return self.b - self.a

    @property
    def measure(self) -> float:
        return float(np.prod(self.edges))

    @property
    def center(self) -> np.ndarray:
        return 0.5 * (self.a + self.b)

    def contains(self, x, margin: float = 0.0) -> bool:
        x = np.asarray(x)
        return bool(np.all(x > self.a + margin) & np.all(x < self.b - margin))

    def strictly_outside(self, x, margin: float = 0.0) -> bool:
        x = np.asarray(x)
        return bool(np.any(x < self.a - margin) | np.any(x > self.b + margin))

    def boundary_distance(self, x) -> float:
        x = np.asarray(x)
        return float(min((x - self.a).min(), (self.b - x).min()))


def box_measure(box: Box4) -> float:
    """m(J) = product of edge lengths."""
    return box.measure


@dataclass(frozen=True)
class BoundaryFace:
    """One of the 8 faces: coordinate ``axis`` frozen at the low or high bound."""

    axis: int
    side: int  # -1 low face, +1 high face

    def coordinate(self, box: Box4) -> float:
        return float(box.a[self.axis] if self.side < 0 else box.b[self.axis])

    @property
    def normal_coordinate(self) -> int:
        return self.side


def faces(box: Box4) -> Iterator[BoundaryFace]:
    for axis in range(4):
        for side in (-1, 1):
            yield BoundaryFace(axis, side)


def _axis_rules(box: Box4, spec: QuadratureSpec, singular_at: Optional[np.ndarray]):
    rules = []
    for k in range(4):
        lo, hi = float(box.a[k]), float(box.b[k])
        if singular_at is not None and spec.rule == "graded-trapezoid":
            rules.append(graded_rule_toward(lo, hi, float(singular_at[k]),
                                            spec.nodes_per_axis, spec.grading_exponent))
        else:
            rules.append(gauss_rule(lo, hi, spec.nodes_per_axis))
    return rules


def default_exclusion_radius(box: Box4, spec: QuadratureSpec) -> float:
    return 2.0 * float(box.edges.max()) / spec.nodes_per_axis


def volume_integral(box: Box4, integrand: PointFn, spec: QuadratureSpec,
                    weight: Optional[WeightFn] = None,
                    singular_at=None,
                    exclusion_radius: Optional[float] = None,
                    smooth_exclusion: bool = False,
                    lower_corner_graded: bool = False) -> np.ndarray:
    """Tensor-rule integral of ``integrand * weight`` over the box.

    With ``singular_at`` set, the mesh is graded toward the singular point
    (when the spec asks for the graded rule) and a ball of radius
    ``exclusion_radius`` around it is excluded: hard-masked by default, or
    removed by a C^2 radial ramp on [radius, 2*radius] when
    ``smooth_exclusion`` is true (keeps the result differentiable in the
    singular point's location).
    """
    sing = None if singular_at is None else np.asarray(singular_at, dtype=float)
    spec_eff = spec
    if sing is not None and spec.rule == "gauss":
        spec_eff = QuadratureSpec(spec.nodes_per_axis, "graded-trapezoid",
                                  spec.exclusion_radius, spec.grading_exponent, spec.nodes_1d)
    if lower_corner_graded:
        # integrands carrying integrable (y_k - a_k)^(-mu) face factors: cells
        # graded into every lower face, nodes strictly interior
        from .quadrature import graded_midpoint_rule_toward
        rules = [graded_midpoint_rule_toward(float(box.a[k]), float(box.b[k]),
                                             float(box.a[k]), spec.nodes_per_axis, 2.5)
                 for k in range(4)]
    else:
        rules = _axis_rules(box, spec_eff, sing)
    eps = exclusion_radius
    if sing is not None and eps is None:
        eps = spec.exclusion_radius
        if eps is None:
            eps = default_exclusion_radius(box, spec)

    (t0, w0), (t1, w1), (t2, w2), (t3, w3) = rules
    g1, g2, g3 = np.meshgrid(t1, t2, t3, indexing="ij")
    w123 = (w1[:, None, None] * w2[None, :, None] * w3[None, None, :]).ravel()
    base = np.empty((g1.size, 4))
    base[:, 1] = g1.ravel()
    base[:, 2] = g2.ravel()
    base[:, 3] = g3.ravel()

    total = np.zeros(4, dtype=complex)
    for i0 in range(t0.size):  # slab over axis 0 keeps memory at O(nodes^3)
        base[:, 0] = t0[i0]
        wts = w123
        pts = base
        if sing is not None:
            r = np.sqrt(((base - sing) ** 2).sum(axis=1))
            if eps == 0.0:
                if np.any(r < 1e-14):
                    raise SingularityOnGridError(
                        "quadrature node within 1e-14 of the singular point and no exclusion ball")
                keep = slice(None)
                ramp = None
            elif smooth_exclusion:
                keep = r > eps
                ramp = smoothstep(r[keep], eps, 2.0 * eps)
            else:
                keep = r >= eps
                ramp = None
            pts = base[keep]
            wts = w123[keep] if not isinstance(keep, slice) else w123
            if ramp is not None:
                wts = wts * ramp
            if pts.shape[0] == 0:
                continue
        vals = np.asarray(integrand(pts))
        if weight is not None:
            vals = vals * np.asarray(weight(pts))[:, None]
        total = total + w0[i0] * (wts[:, None] * vals).sum(axis=0)
    return total


def face_sigma(psi: StructuralSet, face: BoundaryFace) -> np.ndarray:
    """Quaternion value of the boundary form on a face: psi_axis * (outward normal).

    The surface-measure realization of the 3-volume form; the overall sign is
    the one that makes the integral Stokes identity hold on monomials for
    every orthonormal frame, of either orientation.
    """
    return face.normal_coordinate * psi.matrix[face.axis]


def boundary_integral(box: Box4, left: Optional[PointFn], right: Optional[PointFn],
                      psi: StructuralSet, spec: QuadratureSpec,
                      weight: Optional[WeightFn] = None) -> np.ndarray:
    """Sum over the 8 faces of int left * sigma * right (* weight) dS.

    ``left``/``right`` may be None for a constant factor 1; the noncommutative
    order left . sigma . right is preserved exactly.
    """
    n = spec.nodes_per_axis
    total = np.zeros(4, dtype=complex)
    for face in faces(box):
        others = [k for k in range(4) if k != face.axis]
        rules = [gauss_rule(float(box.a[k]), float(box.b[k]), n) for k in others]
        (t1, w1), (t2, w2), (t3, w3) = rules
        g1, g2, g3 = np.meshgrid(t1, t2, t3, indexing="ij")
        wts = (w1[:, None, None] * w2[None, :, None] * w3[None, None, :]).ravel()
        pts = np.empty((g1.size, 4))
        pts[:, others[0]] = g1.ravel()
        pts[:, others[1]] = g2.ravel()
        pts[:, others[2]] = g3.ravel()
        pts[:, face.axis] = face.coordinate(box)

        sigma = face_sigma(psi, face)
        if left is None:
            vals = np.broadcast_to(sigma, (pts.shape[0], 4))
        else:
            vals = qmul_arr(np.asarray(left(pts)), np.broadcast_to(sigma, (pts.shape[0], 4)))
        if right is not None:
            vals = qmul_arr(vals, np.asarray(right(pts)))
        if weight is not None:
            vals = vals * np.asarray(weight(pts))[:, None]
        total = total + (wts[:, None] * vals).sum(axis=0)
    return total
