"""Real and complex quaternion arithmetic, structural sets and frame coordinates.

Values are carried as component arrays of shape (..., 4) over the standard
basis {1, i, j, k}.  Components may be real (``float64``) or complex
(``complex128``); the complex unit commutes with the quaternion units, so the
same Hamilton product formula covers both cases.  The thin ``Quaternion`` /
``ComplexQuaternion`` wrappers give an operator-overloaded view of single
values; hot paths work on raw arrays via the ``q*`` helpers.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotOrthonormalError, ZeroDivisorError

ORTHONORMALITY_TOL = 1e-10


# ---------------------------------------------------------------------------
# array helpers (broadcast over leading axes)
# ---------------------------------------------------------------------------

def qmul_arr(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Hamilton product of component arrays, shape (..., 4) x (..., 4)."""
    a0, a1, a2, a3 = a[..., 0], a[..., 1], a[..., 2], a[..., 3]
    b0, b1, b2, b3 = b[..., 0], b[..., 1], b[..., 2], b[..., 3]
    return np.stack(
        (
            a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
            a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
            a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
            a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
        ),
        axis=-1,
    )


def qconj_arr(a: np.ndarray) -> np.ndarray:
    """Quaternionic conjugation (components 1..3 negated; never complex-conjugates)."""
    out = np.array(a, copy=True)
    out[..., 1:] = -out[..., 1:]
    return out


def qnorm2_arr(a: np.ndarray) -> np.ndarray:
    """q * conj(q) as a scalar: sum of squared components (complex for H(C))."""
    return (a * a).sum(axis=-1)


def qabs_arr(a: np.ndarray) -> np.ndarray:
    """Magnitude sqrt(sum |component|^2); a nonnegative real even for H(C)."""
    return np.sqrt((a * np.conj(a)).real.sum(axis=-1))


def qscalar_arr(q: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Quaternionic scalar product (conj(q)x + conj(x)q)/2 = sum q_k x_k."""
    return (q * x).sum(axis=-1)


def qinv_arr(a: np.ndarray) -> np.ndarray:
    """Inverse conj(a)/(a conj(a)); raises ZeroDivisorError on zero divisors."""
    s = qnorm2_arr(a)
    if np.any(s == 0):
        raise ZeroDivisorError("q*conj(q) = 0: zero divisor has no inverse")
    return qconj_arr(a) / np.asarray(s)[..., None]


def as_components(value) -> np.ndarray:
    """Coerce scalars / sequences / wrapper objects to a (..., 4) component array."""
    if isinstance(value, (Quaternion, ComplexQuaternion)):
        return value.components
    arr = np.asarray(value)
    if arr.ndim == 0:
        out = np.zeros(4, dtype=np.result_type(arr, np.float64))
        out[0] = arr
        return out
    if arr.shape[-1] != 4:
        raise ValueError(f"expected trailing dimension 4, got shape {arr.shape}")
    return arr


# ---------------------------------------------------------------------------
# wrapper classes
# ---------------------------------------------------------------------------

class _QuaternionBase:
    """Shared arithmetic for the single-value wrappers."""

    __slots__ = ("_c",)
    _dtype: type = np.float64

    def __init__(self, x0=0.0, x1=0.0, x2=0.0, x3=0.0):
        c = np.array([x0, x1, x2, x3], dtype=self._dtype)
        c.setflags(write=False)
        self._c = c

    @classmethod
    def from_components(cls, components):
        obj = cls.__new__(cls)
        c = np.asarray(components, dtype=cls._dtype).copy()
        if c.shape != (4,):
            raise ValueError(f"expected 4 components, got shape {c.shape}")
        c.setflags(write=False)
        obj._c = c
        return obj

    @property
    def components(self) -> np.ndarray:
        return self._c

    @property
    def x0(self):
        return self._c[0]

    @property
    def x1(self):
        return self._c[1]

    @property
    def x2(self):
        return self._c[2]

    @property
    def x3(self):
        return self._c[3]

    def conj(self):
        return self._wrap(qconj_arr(self._c))

    def norm2(self):
        """q * conj(q); real for Quaternion, complex scalar for ComplexQuaternion."""
        s = qnorm2_arr(self._c)
        return complex(s) if np.iscomplexobj(self._c) else float(s)

    def abs(self) -> float:
        return float(qabs_arr(self._c))

    __abs__ = abs

    def inverse(self):
        return self._wrap(qinv_arr(self._c))

    def _coerce(self, other):
        if isinstance(other, _QuaternionBase):
            return other._c
        if isinstance(other, (int, float)):
            return np.array([other, 0.0, 0.0, 0.0])
        if isinstance(other, complex):
            return np.array([other, 0.0, 0.0, 0.0], dtype=complex)
        return NotImplemented

    @staticmethod
    def _wrap(c: np.ndarray):
        cls = ComplexQuaternion if np.iscomplexobj(c) else Quaternion
        return cls.from_components(c)

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._wrap(self._c + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._wrap(self._c - o)

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._wrap(o - self._c)

    def __mul__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._wrap(qmul_arr(self._c, o))

    def __rmul__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._wrap(qmul_arr(o, self._c))

    def __truediv__(self, other):
        if isinstance(other, (int, float, complex)):
            return self._wrap(self._c / other)
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self._wrap(qmul_arr(self._c, qinv_arr(o)))

    def __neg__(self):
        return self._wrap(-self._c)

    def __eq__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else bool(np.array_equal(self._c, o))

    def __hash__(self):
        return hash(self._c.tobytes())

    def __repr__(self):
        name = type(self).__name__
        return f"{name}({self._c[0]!r}, {self._c[1]!r}, {self._c[2]!r}, {self._c[3]!r})"


class Quaternion(_QuaternionBase):
    """Real quaternion x0 + x1 i + x2 j + x3 k."""

    _dtype = np.float64

    def scalar_product(self, other) -> float:
        """<q, x> = (conj(q)x + conj(x)q)/2 = sum of componentwise products."""
        return float(qscalar_arr(self._c, as_components(other)))


class ComplexQuaternion(_QuaternionBase):
    """Element of H(C): q1 + I q2 with q1, q2 real quaternions, I the commuting unit."""

    _dtype = np.complex128

    @classmethod
    def from_parts(cls, re, im) -> "ComplexQuaternion":
        return cls.from_components(as_components(re) + 1j * as_components(im))

    @property
    def re(self) -> Quaternion:
        return Quaternion.from_components(self._c.real)

    @property
    def im(self) -> Quaternion:
        return Quaternion.from_components(self._c.imag)

    def scalar_product(self, other) -> complex:
        return complex(qscalar_arr(self._c, as_components(other)))


def qmul(a, b):
    """Product of two quaternion-like values (spec surface for the wrappers)."""
    return _QuaternionBase._wrap(qmul_arr(as_components(a), as_components(b)))


def qinverse(a):
    """Multiplicative inverse; raises ZeroDivisorError when a*conj(a) = 0."""
    return _QuaternionBase._wrap(qinv_arr(as_components(a)))


def scalar_product(q, x):
    """Symmetric complex-bilinear scalar product of quaternion-like values."""
    s = qscalar_arr(as_components(q), as_components(x))
    return complex(s) if np.iscomplexobj(s) else float(s)


# ---------------------------------------------------------------------------
# structural sets
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class StructuralSet:
    """Orthonormal quaternion 4-frame; row k of ``matrix`` holds psi_k's components.

    The rows are orthonormal for the quaternionic scalar product (which equals
    the Euclidean one on components), so ``matrix`` is an orthogonal 4x4 real
    matrix and ``sgn`` is the sign of its determinant.
    """

    matrix: np.ndarray
    sgn: int

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=np.float64).copy()
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @classmethod
    def standard(cls) -> "StructuralSet":
        return cls(np.eye(4), 1)

    def psi(self, k: int) -> Quaternion:
        return Quaternion.from_components(self.matrix[k])

    @property
    def psi0(self) -> Quaternion:
        return self.psi(0)

    @property
    def psi1(self) -> Quaternion:
        return self.psi(1)

    @property
    def psi2(self) -> Quaternion:
        return self.psi(2)

    @property
    def psi3(self) -> Quaternion:
        return self.psi(3)

    def coords(self, values: np.ndarray) -> np.ndarray:
        """Frame coordinates of standard-component values, shape (..., 4)."""
        return values @ self.matrix.T

    def synth(self, coords: np.ndarray) -> np.ndarray:
        """Standard components of sum_k coords_k psi_k, shape (..., 4)."""
        return coords @ self.matrix

    def conjugate_rows(self) -> np.ndarray:
        """Components of the conjugated frame vectors conj(psi_k), shape (4, 4)."""
        rows = self.matrix.copy()
        rows[:, 1:] = -rows[:, 1:]
        return rows

    def conjugate(self) -> "StructuralSet":
        """The conjugated frame as a structural set (orientation sign flips)."""
        return StructuralSet(self.conjugate_rows(), -self.sgn)


def validate_structural_set(candidates, tol: float = ORTHONORMALITY_TOL) -> StructuralSet:
    """Build a StructuralSet from four quaternions, or raise NotOrthonormalError."""
    rows = np.stack([as_components(c) for c in candidates])
    if np.iscomplexobj(rows):
        if np.any(rows.imag != 0.0):
            raise NotOrthonormalError("structural sets consist of real quaternions")
        rows = rows.real
    gram = rows @ rows.T
    dev = np.abs(gram - np.eye(4)).max()
    if dev > tol:
        raise NotOrthonormalError(f"frame deviates from orthonormality by {dev:.3e} > {tol:.1e}")
    sgn = 1 if np.linalg.det(rows) > 0 else -1
    return StructuralSet(rows, sgn)


def psi_coords(psi: StructuralSet, x) -> np.ndarray:
    """Coordinates of x in the frame psi (complex for complex quaternions)."""
    return psi.coords(as_components(x))


def psi_synth(psi: StructuralSet, coords):
    """Value sum_k coords_k psi_k from frame coordinates."""
    return _QuaternionBase._wrap(psi.synth(np.asarray(coords)))


def psi_scalar_product(psi: StructuralSet, q, x):
    """<q, x>_psi = sum q_k x_k over frame coordinates."""
    qc = psi_coords(psi, q)
    xc = psi_coords(psi, x)
    s = (qc * xc).sum()
    return complex(s) if np.iscomplexobj(s) else float(s)
