"""Deterministic point sets used by the checks."""

import numpy as np
from scipy.stats import qmc

from .surface import periodic_grid

__all__ = ["halton_box", "random_box", "near_torus_points", "periodic_grid"]


def halton_box(n: int, dim: int, half_width: float = 2.0) -> np.ndarray:
    """First n points of the unscrambled Halton sequence mapped to [-h, h]^dim."""
    pts = qmc.Halton(d=dim, scramble=False).random(n)
    return (2 * pts - 1) * half_width


def random_box(n: int, dim: int, half_width: float = 2.0, seed: int = 0) -> np.ndarray:
    return np.random.default_rng(seed).uniform(-half_width, half_width, (n, dim))


def near_torus_points(n: int, factors: int, seed: int = 0, rmin: float = 0.5, rmax: float = 1.5) -> np.ndarray:
    """Points of R^4k whose complex coordinates all have modulus in [rmin, rmax]."""
    rng = np.random.default_rng(seed)
    m = 2 * factors
    r = rng.uniform(rmin, rmax, (n, m))
    phi = rng.uniform(0, 2 * np.pi, (n, m))
    out = np.empty((n, 2 * m))
    out[:, 0::2] = r * np.cos(phi)
    out[:, 1::2] = r * np.sin(phi)
    return out
