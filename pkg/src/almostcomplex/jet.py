"""Second-order forward-mode jets over real coordinates.

A :class:`ScalarJet` holds the value of a complex function of ``m`` real
variables together with its gradient and Hessian.  Derivatives are always
taken with respect to the real coordinates, so non-holomorphic operations
such as conjugation are first class.

``order`` controls how much is carried: 0 (value), 1 (+ gradient) or
2 (+ Hessian).  Binary operations truncate to the lower order of the two
operands.
"""

from __future__ import annotations

import cmath
from typing import Callable, Optional

import numpy as np

from .errors import EvaluationError

__all__ = ["ScalarJet", "ScalarField", "coordinate_jet"]


class ScalarJet:
    """Value, gradient and Hessian of a complex function at one point."""

    __slots__ = ("value", "grad", "hess")

    def __init__(self, value, grad=None, hess=None):
        self.value = complex(value)
        self.grad = grad
        if grad is None or hess is None:
            self.hess = None
        else:
            # rounding in the product rules can leave the two triangles apart
            self.hess = 0.5 * (hess + hess.T)

    @property
    def order(self) -> int:
        if self.grad is None:
            return 0
        return 1 if self.hess is None else 2

    @classmethod
    def constant(cls, value, dim: int, order: int = 2) -> "ScalarJet":
        grad = np.zeros(dim, complex) if order >= 1 else None
        hess = np.zeros((dim, dim), complex) if order >= 2 else None
        return cls(value, grad, hess)

    def truncate(self, order: int) -> "ScalarJet":
        if order >= self.order:
            return self
        if order == 0:
            return ScalarJet(self.value)
        return ScalarJet(self.value, self.grad)

    def partial(self, k: int) -> "ScalarJet":
        """Jet of the k-th partial derivative (one order lower)."""
        if self.grad is None:
            raise ValueError("jet carries no derivatives")
        if self.hess is None:
            return ScalarJet(self.grad[k])
        return ScalarJet(self.grad[k], self.hess[k].copy())

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, ScalarJet):
            return ScalarJet(self.value + other, self.grad, self.hess)
        order = min(self.order, other.order)
        grad = self.grad + other.grad if order >= 1 else None
        hess = self.hess + other.hess if order >= 2 else None
        return ScalarJet(self.value + other.value, grad, hess)

    __radd__ = __add__

    def __neg__(self):
        grad = -self.grad if self.grad is not None else None
        hess = -self.hess if self.hess is not None else None
        return ScalarJet(-self.value, grad, hess)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, ScalarJet):
            c = complex(other)
            grad = c * self.grad if self.grad is not None else None
            hess = c * self.hess if self.hess is not None else None
            return ScalarJet(c * self.value, grad, hess)
        a, b = self, other
        order = min(a.order, b.order)
        grad = hess = None
        if order >= 1:
            grad = a.value * b.grad + b.value * a.grad
        if order >= 2:
            cross = np.outer(a.grad, b.grad)
            hess = a.value * b.hess + b.value * a.hess + (cross + cross.T)
        return ScalarJet(a.value * b.value, grad, hess)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, ScalarJet):
            if other == 0:
                raise EvaluationError("division by zero")
            return self * (1.0 / complex(other))
        return self * other.reciprocal()

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def __pow__(self, n: int):
        return self.ipow(n)

    def conjugate(self) -> "ScalarJet":
        grad = self.grad.conj() if self.grad is not None else None
        hess = self.hess.conj() if self.hess is not None else None
        return ScalarJet(self.value.conjugate(), grad, hess)

    conj = conjugate

    @property
    def real(self) -> "ScalarJet":
        return (self + self.conj()) * 0.5

    @property
    def imag(self) -> "ScalarJet":
        return (self - self.conj()) * -0.5j

    def abs2(self) -> "ScalarJet":
        return self * self.conj()

    # -- holomorphic chain rule -------------------------------------------

    def compose(self, f0, f1, f2) -> "ScalarJet":
        """Apply a holomorphic function with value f0 and derivatives f1, f2 at self.value."""
        grad = hess = None
        if self.grad is not None:
            grad = f1 * self.grad
            if self.hess is not None:
                hess = f1 * self.hess + f2 * np.outer(self.grad, self.grad)
        return ScalarJet(f0, grad, hess)

    def reciprocal(self) -> "ScalarJet":
        a = self.value
        if a == 0:
            raise EvaluationError("division by zero")
        inv = 1.0 / a
        return self.compose(inv, -inv * inv, 2.0 * inv * inv * inv)

    def ipow(self, n: int) -> "ScalarJet":
        n = int(n)
        a = self.value
        if n == 0:
            return self.compose(1.0, 0.0, 0.0)
        if n < 0:
            if a == 0:
                raise EvaluationError("zero raised to a negative power")
            return self.reciprocal().ipow(-n)
        f1 = n * a ** (n - 1)
        f2 = n * (n - 1) * a ** (n - 2) if n >= 2 else 0.0
        return self.compose(a**n, f1, f2)

    def exp(self) -> "ScalarJet":
        e = cmath.exp(self.value)
        return self.compose(e, e, e)

    def sin(self) -> "ScalarJet":
        s, c = cmath.sin(self.value), cmath.cos(self.value)
        return self.compose(s, c, -s)

    def cos(self) -> "ScalarJet":
        s, c = cmath.sin(self.value), cmath.cos(self.value)
        return self.compose(c, -s, -c)

    def __repr__(self) -> str:
        return f"ScalarJet(value={self.value!r}, order={self.order})"


def coordinate_jet(p: np.ndarray, k: int, order: int = 2) -> ScalarJet:
    """Jet of the real coordinate function x_k (0-based) at p."""
    dim = len(p)
    grad = hess = None
    if order >= 1:
        grad = np.zeros(dim, complex)
        grad[k] = 1.0
    if order >= 2:
        hess = np.zeros((dim, dim), complex)
    return ScalarJet(p[k], grad, hess)


JetFn = Callable[[np.ndarray, int], ScalarJet]


class ScalarField:
    """A complex-valued function on R^dim evaluable to a :class:`ScalarJet`.

    Fields are immutable; arithmetic builds new fields lazily.
    """

    __slots__ = ("dim", "_fn", "label", "max_order")

    def __init__(self, dim: int, fn: JetFn, label: Optional[str] = None, max_order: int = 2):
        self.dim = int(dim)
        self._fn = fn
        self.label = label
        self.max_order = max_order

    def jet(self, p, order: int = 2) -> ScalarJet:
        if order > self.max_order:
            raise ValueError(f"field {self.label or '<anon>'} carries derivatives only up to order {self.max_order}")
        p = np.asarray(p, dtype=float)
        if p.shape != (self.dim,):
            raise ValueError(f"expected a point of R^{self.dim}, got shape {p.shape}")
        return self._fn(p, order)

    def __call__(self, p) -> complex:
        return self.jet(p, 0).value

    # -- constructors -----------------------------------------------------

    @classmethod
    def constant(cls, dim: int, value) -> "ScalarField":
        value = complex(value)
        return cls(dim, lambda p, order: ScalarJet.constant(value, dim, order), label=repr(value), max_order=99)

    @classmethod
    def from_expr(cls, source, dim: int, aliases=None) -> "ScalarField":
        from .expr import Expr, parse

        e = source if isinstance(source, Expr) else parse(source, dim, aliases=aliases)
        return e.field(dim)

    @classmethod
    def coerce(cls, obj, dim: int) -> "ScalarField":
        """Accept a field, an expression text, or a number."""
        if isinstance(obj, ScalarField):
            if obj.dim != dim:
                raise ValueError(f"field dimension {obj.dim} != {dim}")
            return obj
        if isinstance(obj, str):
            return cls.from_expr(obj, dim)
        return cls.constant(dim, obj)

    # -- arithmetic -------------------------------------------------------

    def _binary(self, other, op, name):
        other = ScalarField.coerce(other, self.dim)
        a, b = self, other
        return ScalarField(
            self.dim,
            lambda p, order: op(a._fn(p, order), b._fn(p, order)),
            label=f"({a.label} {name} {b.label})",
            max_order=min(a.max_order, b.max_order),
        )

    def __add__(self, other):
        return self._binary(other, lambda x, y: x + y, "+")

    def __radd__(self, other):
        return ScalarField.coerce(other, self.dim) + self

    def __sub__(self, other):
        return self._binary(other, lambda x, y: x - y, "-")

    def __rsub__(self, other):
        return ScalarField.coerce(other, self.dim) - self

    def __mul__(self, other):
        return self._binary(other, lambda x, y: x * y, "*")

    def __rmul__(self, other):
        return ScalarField.coerce(other, self.dim) * self

    def __truediv__(self, other):
        return self._binary(other, lambda x, y: x / y, "/")

    def __neg__(self):
        return self._unary(lambda x: -x, "-")

    def conj(self) -> "ScalarField":
        return self._unary(lambda x: x.conj(), "conj")

    def _unary(self, op, name):
        a = self
        return ScalarField(self.dim, lambda p, order: op(a._fn(p, order)), label=f"{name}({a.label})",
                           max_order=a.max_order)

    def partial(self, k: int) -> "ScalarField":
        """The field of the k-th partial derivative (0-based coordinate)."""
        a = self
        return ScalarField(
            self.dim,
            lambda p, order: a._fn(p, order + 1).partial(k),
            label=f"d{k}({a.label})",
            max_order=a.max_order - 1,
        )

    def pullback(self, chart: Callable[[np.ndarray, int], tuple], dim: int, label=None) -> "ScalarField":
        """Compose with a smooth map ``chart: R^dim -> R^self.dim``.

        ``chart(p, order)`` returns ``(y, dy, d2y)`` with shapes ``(m,)``,
        ``(m, dim)`` and ``(m, dim, dim)`` (the latter two may be None when
        not needed for ``order``).
        """
        a = self

        def fn(p, order):
            y, dy, d2y = chart(p, order)
            inner = a._fn(np.asarray(y, float), order)
            grad = hess = None
            if order >= 1:
                grad = dy.T @ inner.grad
            if order >= 2:
                hess = dy.T @ inner.hess @ dy + np.einsum("i,ijk->jk", inner.grad, d2y)
            return ScalarJet(inner.value, grad, hess)

        return ScalarField(dim, fn, label=label or f"{a.label}∘chart", max_order=a.max_order)

    def __repr__(self) -> str:
        return f"ScalarField(dim={self.dim}, {self.label})"
