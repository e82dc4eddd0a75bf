"""Complexified exterior algebra at a point, and differential-form fields.

Multi-indices are strictly increasing tuples of 0-based coordinate indices,
so ``(0, 1)`` denotes ``dx1 ^ dx2``.  Wedge products use the determinant
convention: ``(dx1 ^ dx2)(e1, e2) = 1``.
"""

from __future__ import annotations

from itertools import combinations
from typing import Callable, Dict, Iterable, Mapping, Sequence, Tuple

import numpy as np

from .jet import ScalarField, ScalarJet

__all__ = [
    "MultiIndex", "AltTensor", "FormField", "wedge", "conj", "apply", "d",
    "pullback", "pullback_linear", "canonical_index", "merge_sign",
]

MultiIndex = Tuple[int, ...]


def canonical_index(indices: Iterable[int]) -> Tuple[MultiIndex, int]:
    """Sort ``indices``; return (sorted tuple, permutation sign) or ((), 0) on repeats."""
    idx = list(indices)
    if len(set(idx)) != len(idx):
        return (), 0
    sign = 1
    for i in range(len(idx)):
        for j in range(i + 1, len(idx)):
            if idx[i] > idx[j]:
                sign = -sign
    return tuple(sorted(idx)), sign


def merge_sign(a: MultiIndex, b: MultiIndex) -> int:
    """Sign of the shuffle sorting ``a + b`` (0 if they share an index)."""
    inversions = 0
    for i in a:
        for j in b:
            if i == j:
                return 0
            if i > j:
                inversions += 1
    return -1 if inversions % 2 else 1


def _wedge_dicts(a: Mapping, b: Mapping) -> Dict:
    # products and sums are ordered by the partition K = I u J alone, so
    # a ^ b and b ^ a agree bit for bit up to the sign; a partition occurs at
    # most twice (I from a or from b) and two-term sums commute exactly
    terms: Dict = {}
    for I, x in a.items():
        for J, y in b.items():
            s = merge_sign(I, J)
            if s == 0:
                continue
            K = tuple(sorted(I + J))
            prod = x * y if I <= J else y * x
            term = prod if s > 0 else -prod
            part = terms.setdefault(K, {})
            key = min(I, J)
            part[key] = part[key] + term if key in part else term
    out: Dict = {}
    for K, part in terms.items():
        keys = sorted(part)
        total = part[keys[0]]
        for key in keys[1:]:
            total = total + part[key]
        out[K] = total
    return out


class AltTensor:
    """Element of the complexified exterior algebra of (R^dim)^* in degree ``degree``.

    Coefficients live in a sparse dict keyed by multi-indices; exact zeros
    are dropped.
    """

    __slots__ = ("dim", "degree", "coeffs")

    def __init__(self, dim: int, degree: int, coeffs: Mapping[MultiIndex, complex] = None):
        self.dim = int(dim)
        self.degree = int(degree)
        clean = {}
        for key, value in (coeffs or {}).items():
            key = tuple(int(i) for i in key)
            if len(key) != degree:
                raise ValueError(f"multi-index {key} has wrong degree for a {degree}-form")
            if any(b <= a for a, b in zip(key, key[1:])) or (key and (key[0] < 0 or key[-1] >= dim)):
                raise ValueError(f"multi-index {key} is not strictly increasing within 0..{dim - 1}")
            value = complex(value)
            if value != 0:
                clean[key] = value
        self.coeffs = clean

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, dim: int, degree: int) -> "AltTensor":
        return cls(dim, degree)

    @classmethod
    def scalar(cls, dim: int, value) -> "AltTensor":
        return cls(dim, 0, {(): value})

    @classmethod
    def basis(cls, dim: int, *indices: int) -> "AltTensor":
        """``dx^{i1} ^ ... ^ dx^{ir}`` for 0-based indices in any order."""
        key, sign = canonical_index(indices)
        if sign == 0:
            return cls(dim, len(indices))
        return cls(dim, len(indices), {key: sign})

    @classmethod
    def one_form(cls, components: Sequence[complex]) -> "AltTensor":
        return cls(len(components), 1, {(k,): c for k, c in enumerate(components)})

    # -- algebra ----------------------------------------------------------

    def _check(self, other: "AltTensor", same_degree=True):
        if not isinstance(other, AltTensor):
            raise TypeError(f"expected AltTensor, got {type(other).__name__}")
        if other.dim != self.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")
        if same_degree and other.degree != self.degree:
            raise ValueError(f"degree mismatch: {self.degree} vs {other.degree}")

    def __add__(self, other: "AltTensor") -> "AltTensor":
        self._check(other)
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, 0) + v
        return AltTensor(self.dim, self.degree, out)

    def __neg__(self) -> "AltTensor":
        return AltTensor(self.dim, self.degree, {k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other: "AltTensor") -> "AltTensor":
        return self + (-other)

    def __mul__(self, c) -> "AltTensor":
        if isinstance(c, AltTensor):
            return NotImplemented
        c = complex(c)
        return AltTensor(self.dim, self.degree, {k: c * v for k, v in self.coeffs.items()})

    __rmul__ = __mul__

    def __truediv__(self, c) -> "AltTensor":
        return self * (1.0 / complex(c))

    def __xor__(self, other: "AltTensor") -> "AltTensor":
        return wedge(self, other)

    def conj(self) -> "AltTensor":
        return AltTensor(self.dim, self.degree, {k: v.conjugate() for k, v in self.coeffs.items()})

    def __call__(self, *vectors) -> complex:
        return apply(self, *vectors)

    # -- inspection -------------------------------------------------------

    def __getitem__(self, key) -> complex:
        key, sign = canonical_index(key)
        return sign * self.coeffs.get(key, 0j)

    def norm(self) -> float:
        """Euclidean norm of the coefficient vector."""
        if not self.coeffs:
            return 0.0
        return float(np.sqrt(sum(abs(v) ** 2 for v in self.coeffs.values())))

    def components(self) -> np.ndarray:
        """Dense coefficient vector for a 1-form (length ``dim``)."""
        if self.degree != 1:
            raise ValueError("components() is defined for 1-forms only")
        out = np.zeros(self.dim, complex)
        for (k,), v in self.coeffs.items():
            out[k] = v
        return out

    def top_coefficient(self) -> complex:
        """Coefficient on dx^1 ^ ... ^ dx^dim for a top-degree form."""
        if self.degree != self.dim:
            raise ValueError("not a top-degree form")
        return self.coeffs.get(tuple(range(self.dim)), 0j)

    def allclose(self, other: "AltTensor", atol: float = 1e-12) -> bool:
        return (self - other).norm() <= atol

    def __eq__(self, other) -> bool:
        if not isinstance(other, AltTensor):
            return NotImplemented
        return (self.dim, self.degree, self.coeffs) == (other.dim, other.degree, other.coeffs)

    def __repr__(self) -> str:
        if not self.coeffs:
            return f"AltTensor(dim={self.dim}, degree={self.degree}, 0)"
        terms = " + ".join(
            f"({v:.6g})dx^{''.join(str(i + 1) for i in k) or '∅'}" for k, v in sorted(self.coeffs.items())
        )
        return f"AltTensor(dim={self.dim}, degree={self.degree}, {terms})"


def _det(m: np.ndarray):
    n = m.shape[0]
    if n == 1:
        return m[0, 0]
    if n == 2:
        return m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    if n == 3:
        return (m[0, 0] * (m[1, 1] * m[2, 2] - m[1, 2] * m[2, 1])
                - m[0, 1] * (m[1, 0] * m[2, 2] - m[1, 2] * m[2, 0])
                + m[0, 2] * (m[1, 0] * m[2, 1] - m[1, 1] * m[2, 0]))
    return np.linalg.det(m)


def apply(a: AltTensor, *vectors) -> complex:
    """Evaluate the alternating form on ``degree`` vectors (determinant convention)."""
    if len(vectors) != a.degree:
        raise ValueError(f"{a.degree}-form applied to {len(vectors)} vectors")
    if a.degree == 0:
        return a.coeffs.get((), 0j)
    V = np.array([np.asarray(v) for v in vectors])
    if V.shape[1] != a.dim:
        raise ValueError(f"vectors must lie in R^{a.dim}")
    total = 0j
    for I, c in a.coeffs.items():
        total += c * _det(V[:, list(I)])
    return complex(total)


def pullback_linear(a: AltTensor, L: np.ndarray) -> AltTensor:
    """Pull ``a`` back along the linear map with matrix ``L`` (shape dim x k).

    The coefficient on the output multi-index K is sum_I a_I det(L[I, K]).
    """
    L = np.asarray(L)
    dim, k = L.shape
    if dim != a.dim:
        raise ValueError(f"map has {dim} rows, form lives on R^{a.dim}")
    r = a.degree
    if r == 0:
        return AltTensor(k, 0, a.coeffs)
    if r > k:
        return AltTensor(k, r)
    out = {}
    for K in combinations(range(k), r):
        total = 0j
        cols = list(K)
        for I, c in a.coeffs.items():
            total += c * _det(L[np.ix_(list(I), cols)])
        out[K] = total
    return AltTensor(k, r, out)


# -- form fields ---------------------------------------------------------------

Evaluator = Callable[[np.ndarray, int], Dict[MultiIndex, ScalarJet]]


class FormField:
    """A differential form on R^dim whose coefficients are smooth fields.

    Internally a form is an evaluator ``(p, order) -> {multi-index: ScalarJet}``
    so that derived forms (wedge, d, sums) evaluate each parent once per point.
    """

    __slots__ = ("dim", "degree", "_eval", "max_order", "label")

    def __init__(self, dim: int, degree: int, evaluator: Evaluator, max_order: int = 2, label=None):
        self.dim = int(dim)
        self.degree = int(degree)
        self._eval = evaluator
        self.max_order = max_order
        self.label = label

    @classmethod
    def from_coefficients(cls, dim: int, degree: int, coeffs: Mapping) -> "FormField":
        """Build from ``{multi-index: field | expression text | number}``.

        Multi-indices may be unsorted; the permutation sign is applied.
        """
        fields: Dict[MultiIndex, list] = {}
        for key, c in coeffs.items():
            K, sign = canonical_index(key)
            if len(key) != degree:
                raise ValueError(f"multi-index {key} has wrong degree for a {degree}-form")
            if sign == 0:
                continue
            f = ScalarField.coerce(c, dim)
            fields.setdefault(K, []).append(f if sign > 0 else -f)
        merged = {}
        for K, fs in fields.items():
            total = fs[0]
            for f in fs[1:]:
                total = total + f
            merged[K] = total
        max_order = min((f.max_order for f in merged.values()), default=99)

        def evaluator(p, order):
            return {K: f._fn(p, order) for K, f in merged.items()}

        return cls(dim, degree, evaluator, max_order)

    @classmethod
    def one_form(cls, dim: int, components: Sequence) -> "FormField":
        return cls.from_coefficients(dim, 1, {(k,): c for k, c in enumerate(components) if not _is_zero(c)})

    @classmethod
    def from_complex(cls, dim: int, dz: Sequence, dzbar: Sequence) -> "FormField":
        """The 1-form sum_k a_k dz_k + b_k dzbar_k.

        With z_k = x_{2k-1} + i x_{2k} this has dx-components a_k + b_k and
        i(a_k - b_k) on the pair of real coordinates of z_k.
        """
        n = dim // 2
        if len(dz) != n or len(dzbar) != n:
            raise ValueError(f"expected {n} dz and {n} dzbar coefficients")
        comps: Dict[MultiIndex, ScalarField] = {}
        for k in range(n):
            a_zero, b_zero = _is_zero(dz[k]), _is_zero(dzbar[k])
            if a_zero and b_zero:
                continue
            a = ScalarField.coerce(0 if a_zero else dz[k], dim)
            b = ScalarField.coerce(0 if b_zero else dzbar[k], dim)
            comps[(2 * k,)] = a + b
            comps[(2 * k + 1,)] = (a - b) * 1j
        return cls.from_coefficients(dim, 1, comps)

    @classmethod
    def constant(cls, value: AltTensor) -> "FormField":
        coeffs = dict(value.coeffs)
        dim = value.dim

        def evaluator(p, order):
            return {K: ScalarJet.constant(c, dim, order) for K, c in coeffs.items()}

        return cls(dim, value.degree, evaluator, max_order=99)

    # -- evaluation -------------------------------------------------------

    def jets(self, p, order: int = 2) -> Dict[MultiIndex, ScalarJet]:
        if order > self.max_order:
            raise ValueError(f"form carries coefficient derivatives only up to order {self.max_order}")
        p = np.asarray(p, dtype=float)
        if p.shape != (self.dim,):
            raise ValueError(f"expected a point of R^{self.dim}, got shape {p.shape}")
        return self._eval(p, order)

    def at(self, p) -> AltTensor:
        return AltTensor(self.dim, self.degree, {K: j.value for K, j in self.jets(p, 0).items()})

    __call__ = at

    # -- algebra ----------------------------------------------------------

    def _combine(self, other: "FormField", op) -> "FormField":
        if other.dim != self.dim or other.degree != self.degree:
            raise ValueError("forms must share dimension and degree")
        a, b = self, other

        def evaluator(p, order):
            x, y = a._eval(p, order), b._eval(p, order)
            out = dict(x)
            for K, v in y.items():
                out[K] = op(out[K], v) if K in out else op(0, v)
            return out

        return FormField(self.dim, self.degree, evaluator, min(a.max_order, b.max_order))

    def __add__(self, other):
        return self._combine(other, lambda x, y: x + y)

    def __sub__(self, other):
        return self._combine(other, lambda x, y: x - y)

    def __neg__(self):
        return self * -1

    def __mul__(self, c):
        """Multiply by a number or a scalar field."""
        a = self
        if isinstance(c, (ScalarField, str)):
            f = ScalarField.coerce(c, self.dim)

            def evaluator(p, order):
                s = f._fn(p, order)
                return {K: s * v for K, v in a._eval(p, order).items()}

            return FormField(self.dim, self.degree, evaluator, min(a.max_order, f.max_order))
        c = complex(c)
        return FormField(self.dim, self.degree, lambda p, order: {K: v * c for K, v in a._eval(p, order).items()},
                         a.max_order)

    __rmul__ = __mul__

    def __xor__(self, other):
        return wedge(self, other)

    def conj(self) -> "FormField":
        a = self
        return FormField(self.dim, self.degree, lambda p, order: {K: v.conj() for K, v in a._eval(p, order).items()},
                         a.max_order)

    def __repr__(self) -> str:
        return f"FormField(dim={self.dim}, degree={self.degree}{', ' + self.label if self.label else ''})"


def _is_zero(c) -> bool:
    if isinstance(c, str):
        return c.strip() in ("0", "0.0")
    return not isinstance(c, ScalarField) and c == 0


def wedge(a, b):
    """Graded-anticommutative product of two AltTensors or two FormFields."""
    if isinstance(a, AltTensor) and isinstance(b, AltTensor):
        if a.dim != b.dim:
            raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")
        return AltTensor(a.dim, a.degree + b.degree, _wedge_dicts(a.coeffs, b.coeffs))
    if isinstance(a, FormField) and isinstance(b, FormField):
        if a.dim != b.dim:
            raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")

        def evaluator(p, order):
            return _wedge_dicts(a._eval(p, order), b._eval(p, order))

        return FormField(a.dim, a.degree + b.degree, evaluator, min(a.max_order, b.max_order))
    raise TypeError("wedge needs two AltTensors or two FormFields")


def conj(a):
    """Coefficient-wise complex conjugation."""
    return a.conj()


def d(F: FormField) -> FormField:
    """Exterior derivative: d(f dx^I) = sum_k (df/dx_k) dx^k ^ dx^I."""
    dim = F.dim

    def evaluator(p, order):
        out: Dict[MultiIndex, ScalarJet] = {}
        for I, jet in F._eval(p, order + 1).items():
            for k in range(dim):
                s = merge_sign((k,), I)
                if s == 0:
                    continue
                K = tuple(sorted((k,) + I))
                term = jet.partial(k)
                term = term if s > 0 else -term
                out[K] = out[K] + term if K in out else term
        return out

    return FormField(dim, F.degree + 1, evaluator, F.max_order - 1)


def pullback(F, S, params) -> AltTensor:
    """Pull a form back along a parametrised surface at the given parameters.

    ``F`` may be a FormField (evaluated at ``S.position(params)``) or an
    AltTensor already evaluated there.  The result lives on parameter space.
    """
    params = np.asarray(params, dtype=float)
    value = F.at(S.position(params)) if isinstance(F, FormField) else F
    return pullback_linear(value, S.jacobian(params))
