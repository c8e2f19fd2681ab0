"""The fixed corpus of test fields used by every identity suite.

Constants, coordinate fields, quadratics, separable exp/sin fields, and one
hyperholomorphic linear field.  Each entry carries analytic partials so the
absolutely-continuous derivative paths apply everywhere; all fields are real
quaternion valued on the suite box.
"""
from __future__ import annotations

from typing import Callable, Sequence

import numpy as np

from .fueter import Field
from .geometry import Box4


def _embed(component: int, fn: Callable[[np.ndarray], np.ndarray]):
    def wrapped(pts):
        out = np.zeros((pts.shape[0], 4))
        out[:, component] = fn(pts)
        return out
    return wrapped


def _zero(pts):
    return np.zeros((pts.shape[0], 4))


def scalar_field(box: Box4, name: str, fn, dfns) -> Field:
    """Real scalar field with analytic partials; dfns is a 4-tuple (None = 0)."""
    partials = tuple(_zero if d is None else _embed(0, d) for d in dfns)
    return Field(value=_embed(0, fn), box=box, partials=partials, name=name)


def component_field(box: Box4, name: str, comps, dcomps) -> Field:
    """Field with per-component callables comps[c] and partials dcomps[k][c]."""
    def value(pts):
        out = np.zeros((pts.shape[0], 4))
        for c, fn in enumerate(comps):
            if fn is not None:
                out[:, c] = fn(pts)
        return out

    def make_partial(k):
        def partial(pts):
            out = np.zeros((pts.shape[0], 4))
            for c, fn in enumerate(dcomps[k]):
                if fn is not None:
                    out[:, c] = fn(pts)
            return out
        return partial

    return Field(value=value, box=box, partials=tuple(make_partial(k) for k in range(4)),
                 name=name)


def standard_corpus(box: Box4) -> list[Field]:
    """The versioned suite corpus; identities must hold for all of it."""
    one = lambda p: np.ones(p.shape[0])
    fields = [
        scalar_field(box, "const-1", one, (None, None, None, None)),
        component_field(
            box, "const-q",
            comps=(lambda p: np.full(p.shape[0], 1.0),
                   lambda p: np.full(p.shape[0], -0.5),
                   lambda p: np.full(p.shape[0], 0.25),
                   lambda p: np.full(p.shape[0], 2.0)),
            dcomps=[(None,) * 4] * 4,
        ),
        scalar_field(box, "coord-x0", lambda p: p[:, 0], (one, None, None, None)),
        scalar_field(box, "coord-x1", lambda p: p[:, 1], (None, one, None, None)),
        scalar_field(box, "quadratic-x0sq", lambda p: p[:, 0] ** 2,
                     (lambda p: 2 * p[:, 0], None, None, None)),
        scalar_field(box, "quadratic-x1x2", lambda p: p[:, 1] * p[:, 2],
                     (None, lambda p: p[:, 2], lambda p: p[:, 1], None)),
        scalar_field(box, "sin-x0", lambda p: np.sin(p[:, 0]),
                     (lambda p: np.cos(p[:, 0]), None, None, None)),
        scalar_field(box, "exp-x2", lambda p: np.exp(p[:, 2]),
                     (None, None, lambda p: np.exp(p[:, 2]), None)),
        scalar_field(box, "sinexp-x0x1", lambda p: np.sin(p[:, 0]) * np.exp(p[:, 1]),
                     (lambda p: np.cos(p[:, 0]) * np.exp(p[:, 1]),
                      lambda p: np.sin(p[:, 0]) * np.exp(p[:, 1]), None, None)),
        # left null solution of the standard-frame operator: D(x1 - i x0) = 0
        component_field(
            box, "hyperholomorphic-linear",
            comps=(lambda p: p[:, 1], lambda p: -p[:, 0], None, None),
            dcomps=[
                (None, lambda p: -np.ones(p.shape[0]), None, None),
                (one, None, None, None),
                (None,) * 4,
                (None,) * 4,
            ],
        ),
    ]
    return fields


def polynomial_corpus(box: Box4) -> list[Field]:
    """Degree <= 2 subset on which the Gauss rule is exact for Stokes checks."""
    keep = {"const-1", "const-q", "coord-x0", "coord-x1", "quadratic-x0sq", "quadratic-x1x2"}
    return [f for f in standard_corpus(box) if f.name in keep]


def smooth_pairs(box: Box4) -> list[tuple[Field, Field]]:
    """(g, f) pairs exercised by the classical Stokes and Borel-Pompeiu checks."""
    by_name = {f.name: f for f in standard_corpus(box)}
    return [
        (by_name["const-1"], by_name["coord-x1"]),
        (by_name["coord-x1"], by_name["quadratic-x1x2"]),
        (by_name["const-q"], by_name["sin-x0"]),
        (by_name["exp-x2"], by_name["const-1"]),
    ]


def select(fields: Sequence[Field], names: Sequence[str]) -> list[Field]:
    by_name = {f.name: f for f in fields}
    missing = [n for n in names if n not in by_name]
    if missing:
        raise KeyError(f"unknown corpus fields: {missing}")
    return [by_name[n] for n in names]
