"""Parametrised periodic immersions [0, 2pi)^k -> R^dim."""

from __future__ import annotations

from typing import Callable, Optional, Sequence

import numpy as np

from .expr import parse

__all__ = ["ParamSurface", "periodic_grid"]

TWO_PI = 2.0 * np.pi


def periodic_grid(N: int, n_params: int = 2) -> np.ndarray:
    """Equispaced periodic grid on [0, 2pi)^n_params, shape (N**n_params, n_params)."""
    axis = TWO_PI * np.arange(N) / N
    mesh = np.meshgrid(*([axis] * n_params), indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=-1)


class ParamSurface:
    """An immersion of a parameter box into R^dim with first partials.

    ``position(t)`` returns a point of R^dim, ``jacobian(t)`` the dim x k
    matrix of partial derivatives.  ``n_params`` is 2 for surfaces; product
    tori use 2n parameters.
    """

    def __init__(self, dim: int, position: Callable, jacobian: Callable, n_params: int = 2,
                 periodic: Sequence[bool] = None, name: Optional[str] = None):
        self.dim = int(dim)
        self.n_params = int(n_params)
        self._position = position
        self._jacobian = jacobian
        self.periodic = tuple(periodic) if periodic is not None else (True,) * self.n_params
        self.name = name

    def position(self, t) -> np.ndarray:
        return np.asarray(self._position(np.asarray(t, float)), float)

    def jacobian(self, t) -> np.ndarray:
        return np.asarray(self._jacobian(np.asarray(t, float)), float)

    def immersion_margin(self, t) -> float:
        """Smallest singular value of the Jacobian."""
        return float(np.linalg.svd(self.jacobian(t), compute_uv=False)[-1])

    def periodicity_defect(self, samples: int = 16) -> float:
        """Largest endpoint mismatch |S(t + 2pi e_k) - S(t)| over a few sample lines."""
        worst = 0.0
        rng = np.random.default_rng(0)
        for _ in range(samples):
            t = rng.uniform(0, TWO_PI, self.n_params)
            for k, per in enumerate(self.periodic):
                if per:
                    s = t.copy()
                    s[k] += TWO_PI
                    worst = max(worst, float(np.max(np.abs(self.position(s) - self.position(t)))))
        return worst

    def swapped(self) -> "ParamSurface":
        """The same surface with its two parameters exchanged (orientation reversed)."""
        if self.n_params != 2:
            raise ValueError("swapped() needs a 2-parameter surface")
        pos, jac = self._position, self._jacobian
        return ParamSurface(self.dim, lambda t: pos(t[::-1]), lambda t: jac(t[::-1])[:, ::-1], 2,
                            self.periodic[::-1], self.name and f"{self.name} (swapped)")

    @classmethod
    def from_expressions(cls, exprs: Sequence[str], name: Optional[str] = None) -> "ParamSurface":
        """Surface whose k-th coordinate is the expression ``exprs[k]`` in ``u`` and ``v``.

        ``u`` and ``v`` may also be written ``x1`` and ``x2``.
        """
        fields = [parse(e, 2, aliases={"u": 1, "v": 2}).field(2) for e in exprs]

        def position(t):
            return np.array([f.jet(t, 0).value.real for f in fields])

        def jacobian(t):
            return np.array([f.jet(t, 1).grad.real for f in fields])

        return cls(len(fields), position, jacobian, 2, name=name)

    def __repr__(self) -> str:
        return f"ParamSurface(dim={self.dim}, n_params={self.n_params}, name={self.name!r})"
