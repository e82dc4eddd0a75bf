"""Octonions, the almost complex structure of S^6, and CP^1 inside it.

The multiplication table is the Cayley-Dickson double of the quaternions
span(e0, e1, e2, e3) with e4 the new unit and e_{4+k} = e_k e4:

    (a, b)(c, d) = (ac - conj(d) b, d a + b conj(c))

which gives e1e2 = e3, e1e4 = e5, e2e4 = e6, e3e4 = e7.  The full signed
table is available from :func:`multiplication_table` and as CSV from
:func:`table_csv`.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from ..acs import invariance_defect
from ..errors import PreconditionError

__all__ = [
    "Octonion", "multiplication_table", "structure_constants", "table_csv",
    "octonion_mul", "left_mul_matrix", "s6_acs", "fibonacci_sphere",
    "CP1Report", "cp1_in_s6", "StereographicStructure", "stereographic_pushforward",
]


def _qmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    a0, a1, a2, a3 = a
    b0, b1, b2, b3 = b
    return np.array([
        a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
        a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
        a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
        a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
    ])


def _qconj(a: np.ndarray) -> np.ndarray:
    return np.array([a[0], -a[1], -a[2], -a[3]])


def _cayley_dickson(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    a, b = x[:4], x[4:]
    c, d = y[:4], y[4:]
    return np.concatenate([_qmul(a, c) - _qmul(_qconj(d), b), _qmul(d, a) + _qmul(b, _qconj(c))])


def _build_constants() -> np.ndarray:
    eye = np.eye(8)
    C = np.zeros((8, 8, 8))
    for i in range(8):
        for j in range(8):
            C[i, j] = _cayley_dickson(eye[i], eye[j])
    return C


_C = _build_constants()
_C.setflags(write=False)


def structure_constants() -> np.ndarray:
    """C[i, j, k]: coefficient of e_k in e_i e_j."""
    return _C


def multiplication_table() -> Tuple[Tuple[Tuple[int, int], ...], ...]:
    """table[i][j] = (sign, k) with e_i e_j = sign * e_k."""
    rows = []
    for i in range(8):
        row = []
        for j in range(8):
            k = int(np.flatnonzero(_C[i, j])[0])
            row.append((int(_C[i, j, k]), k))
        rows.append(tuple(row))
    return tuple(rows)


def table_csv() -> str:
    """Signed basis products as CSV: one row per left factor, entries like '-e3'."""
    buf = io.StringIO()
    buf.write("," + ",".join(f"e{j}" for j in range(8)) + "\n")
    for i, row in enumerate(multiplication_table()):
        cells = [("-" if s < 0 else "") + f"e{k}" for s, k in row]
        buf.write(f"e{i}," + ",".join(cells) + "\n")
    return buf.getvalue()


def octonion_mul(a, b) -> np.ndarray:
    """Product of two octonions given as length-8 real arrays."""
    return np.einsum("i,j,ijk->k", np.asarray(a, float), np.asarray(b, float), _C)


@dataclass(frozen=True)
class Octonion:
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs, float)
        if c.shape != (8,):
            raise ValueError("an octonion has 8 real components")
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def basis(cls, k: int) -> "Octonion":
        return cls(np.eye(8)[k])

    def __mul__(self, other):
        if isinstance(other, Octonion):
            return Octonion(octonion_mul(self.coeffs, other.coeffs))
        return Octonion(self.coeffs * float(other))

    __rmul__ = lambda self, c: Octonion(self.coeffs * float(c))

    def __add__(self, other: "Octonion") -> "Octonion":
        return Octonion(self.coeffs + other.coeffs)

    def __sub__(self, other: "Octonion") -> "Octonion":
        return Octonion(self.coeffs - other.coeffs)

    def __neg__(self) -> "Octonion":
        return Octonion(-self.coeffs)

    def conj(self) -> "Octonion":
        c = -self.coeffs
        c[0] = self.coeffs[0]
        return Octonion(c)

    def norm(self) -> float:
        return float(np.linalg.norm(self.coeffs))

    @property
    def real(self) -> float:
        return float(self.coeffs[0])

    @property
    def imag(self) -> np.ndarray:
        return self.coeffs[1:].copy()

    def __repr__(self) -> str:
        terms = [f"{c:+.6g}e{k}" for k, c in enumerate(self.coeffs) if c != 0]
        return "Octonion(" + (" ".join(terms) or "0") + ")"


def _imag8(v7) -> np.ndarray:
    return np.concatenate([[0.0], np.asarray(v7, float)])


def left_mul_matrix(p7) -> np.ndarray:
    """7 x 7 matrix of v -> Im(p v) on Im O = R^7 (coordinates e1..e7)."""
    p8 = _imag8(p7)
    L = np.einsum("i,ijk->kj", p8, _C)  # L[k, j]: coefficient of e_k in p e_j
    return L[1:, 1:]


def s6_acs(p, v, tol: float = 1e-9) -> np.ndarray:
    """J_p v = p v for a unit imaginary octonion p and an imaginary v orthogonal to p.

    Inputs and output are length-8 arrays (real part first).
    """
    p = np.asarray(p, float)
    v = np.asarray(v, float)
    if abs(np.linalg.norm(p) - 1) > tol or abs(p[0]) > tol:
        raise PreconditionError("p must be a unit imaginary octonion")
    if abs(v[0]) > tol or abs(p @ v) > tol * max(1.0, np.linalg.norm(v)):
        raise PreconditionError("v must be imaginary and orthogonal to p")
    return octonion_mul(p, v)


def fibonacci_sphere(N: int) -> np.ndarray:
    """N nearly uniform points on the unit 2-sphere, shape (N, 3)."""
    k = np.arange(N) + 0.5
    z = 1 - 2 * k / N
    r = np.sqrt(1 - z * z)
    phi = np.pi * (1 + 5**0.5) * k
    return np.column_stack([r * np.cos(phi), r * np.sin(phi), z])


@dataclass(frozen=True)
class CP1Report:
    plane: Tuple[int, int, int]
    points: np.ndarray  # (N, 7) points of S^6 in Im O
    defects: np.ndarray  # J-invariance defect of each tangent plane

    @property
    def max_defect(self) -> float:
        return float(self.defects.max())


def _sphere_in_plane(plane: Sequence[int], N: int) -> Tuple[np.ndarray, np.ndarray]:
    """Points of S^6 in span(e_a, e_b, e_c) and an orthonormal tangent basis at each."""
    E = np.eye(7)[[k - 1 for k in plane]]  # 3 x 7
    pts3 = fibonacci_sphere(N)
    points = pts3 @ E
    tangents = []
    for x in pts3:
        # orthonormal complement of x in R^3
        Q, _ = np.linalg.qr(np.column_stack([x, np.eye(3)]))
        tangents.append((Q[:, 1:3].T @ E).T)  # 7 x 2
    return points, np.array(tangents)


def cp1_in_s6(N: int = 500, plane: Tuple[int, int, int] = (1, 2, 3)) -> CP1Report:
    """S^6 intersected with span(e_a, e_b, e_c), with tangent-plane J-invariance defects.

    For the quaternion plane (1, 2, 3) the defects vanish: the sphere is a
    pseudo-holomorphic CP^1.  Other planes, e.g. (1, 2, 4), serve as controls.
    """
    points, tangents = _sphere_in_plane(plane, N)
    defects = np.array([invariance_defect(left_mul_matrix(p), T) for p, T in zip(points, tangents)])
    return CP1Report(tuple(plane), points, defects)


class StereographicStructure:
    """Stereographic projection of S^6 from a pole, and the pushed-forward J on R^6.

    The pole is a basis vector e_k of Im O (default e4, off the quaternion
    plane).  R^6 carries the coordinates of the remaining six imaginary units
    in increasing order.
    """

    def __init__(self, pole: int = 4, guard: float = 1e6):
        if not 1 <= pole <= 7:
            raise ValueError("pole must be one of e1..e7")
        self.pole = pole
        self.guard = guard
        self.N = np.eye(7)[pole - 1]
        self.P = np.delete(np.eye(7), pole - 1, axis=0)  # 6 x 7 coordinates on pole^perp

    def forward(self, x) -> np.ndarray:
        x = np.asarray(x, float)
        s = x @ self.N
        if 1 - s < 1 / self.guard:
            raise PreconditionError("point too close to the projection pole")
        return self.P @ x / (1 - s)

    def inverse(self, q) -> np.ndarray:
        q = np.asarray(q, float)
        r2 = q @ q
        if r2 > self.guard**2:
            raise PreconditionError("query too close to the image of the pole")
        return (2 * self.P.T @ q + (r2 - 1) * self.N) / (r2 + 1)

    def d_forward(self, x) -> np.ndarray:
        """6 x 7 derivative of the projection at x."""
        x = np.asarray(x, float)
        s = x @ self.N
        return self.P / (1 - s) + np.outer(self.P @ x, self.N) / (1 - s) ** 2

    def d_inverse(self, q) -> np.ndarray:
        """7 x 6 derivative of the inverse projection at q."""
        q = np.asarray(q, float)
        r2 = q @ q
        num = 2 * self.P.T @ q + (r2 - 1) * self.N
        return (2 * self.P.T + 2 * np.outer(self.N, q)) / (r2 + 1) - np.outer(num, 2 * q) / (r2 + 1) ** 2

    def J(self, q) -> np.ndarray:
        """Pushed-forward structure Dpi . J_x . Dpi^-1 at q, x = pi^-1(q)."""
        x = self.inverse(q)
        return self.d_forward(x) @ left_mul_matrix(x) @ self.d_inverse(q)

    def push_surface(self, plane=(1, 2, 3), N: int = 500):
        """Images of the sphere in ``plane`` and of its tangent planes: (q points, 6 x 2 bases)."""
        if self.pole in plane:
            raise PreconditionError("the pole lies on the sphere being pushed")
        points, tangents = _sphere_in_plane(plane, N)
        qs = np.array([self.forward(x) for x in points])
        bases = np.array([self.d_forward(x) @ T for x, T in zip(points, tangents)])
        return qs, bases

    def surface_defects(self, plane=(1, 2, 3), N: int = 500) -> np.ndarray:
        qs, bases = self.push_surface(plane, N)
        return np.array([invariance_defect(self.J(q), B) / np.linalg.norm(self.J(q), 2) for q, B in zip(qs, bases)])


def stereographic_pushforward(pole: int = 4) -> StereographicStructure:
    return StereographicStructure(pole)
