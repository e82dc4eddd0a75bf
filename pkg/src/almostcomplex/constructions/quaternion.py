"""Transporting a normal field to a tangent field with the quaternionic structure of R^4.

J1, J2 are the two complex structures of R^4 exactly as displayed in the
construction, with J3 = J1 J2.  As written, J1 and J2 commute, so this J3
squares to +I rather than -I; only J1 and J2 enter the experiment.  At
each point the structure J is conjugated to J1 by a frame A (J = A J1 A^-1)
and the candidate tangent field is W = A J2 A^-1 V for a normal field V.
Whether W is actually tangent depends on choices the construction leaves
open, so the tangency defect is measured and reported, never asserted.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, List, Optional

import numpy as np

from ..acs import Coframe, j_at
from ..surface import ParamSurface, periodic_grid

__all__ = ["J1", "J2", "J3", "conjugating_frame", "FrameSample", "FrameExperiment", "quaternion_frame_experiment"]

J1 = np.array([[0, 0, -1, 0], [0, 0, 0, -1], [1, 0, 0, 0], [0, 1, 0, 0]], dtype=float)
J2 = np.array([[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]], dtype=float)
J3 = J1 @ J2


def conjugating_frame(J: np.ndarray) -> np.ndarray:
    """A with J = A J1 A^-1, built column by column.

    J1 sends e1 -> e3 and e2 -> e4, so A e1 = v1, A e3 = J v1, A e2 = v3,
    A e4 = J v3, with v1 = e1 and v3 the largest-norm projection of a basis
    vector onto the orthogonal complement of span(v1, J v1).  Ties go to the
    lowest index so the choice is reproducible.
    """
    eye = np.eye(4)
    norms = [np.linalg.norm(J @ e) for e in eye]
    v1 = eye[0] if norms[0] > 1e-12 else eye[int(np.argmax(norms))]
    Q, _ = np.linalg.qr(np.column_stack([v1, J @ v1]))
    residues = [e - Q @ (Q.T @ e) for e in eye]
    k = int(np.argmax([np.linalg.norm(r) for r in residues]))
    v3 = residues[k] / np.linalg.norm(residues[k])
    A = np.column_stack([v1, v3, J @ v1, J @ v3])
    if np.linalg.cond(A) > 1e10:
        raise np.linalg.LinAlgError("degenerate conjugating frame")
    return A


@dataclass(frozen=True)
class FrameSample:
    params: np.ndarray
    point: np.ndarray
    conjugacy_defect: float
    W: np.ndarray
    W_norm: float
    tangency_defect: float
    A: np.ndarray


@dataclass
class FrameExperiment:
    samples: List[FrameSample]
    skipped: List[np.ndarray]
    grid: int

    @property
    def min_W_norm(self) -> float:
        return min(s.W_norm for s in self.samples)

    @property
    def max_conjugacy_defect(self) -> float:
        return max(s.conjugacy_defect for s in self.samples)

    @property
    def max_tangency_defect(self) -> float:
        return max(s.tangency_defect for s in self.samples)

    def continuity(self) -> dict:
        """Largest jump of A and of W between grid neighbours (periodic in both directions)."""
        N = self.grid
        if len(self.samples) != N * N:
            return {"A": float("nan"), "W": float("nan")}
        A = np.array([s.A for s in self.samples]).reshape(N, N, 4, 4)
        W = np.array([s.W for s in self.samples]).reshape(N, N, 4)
        jumps_A = max(np.abs(np.roll(A, -1, axis=ax) - A).max() for ax in (0, 1))
        jumps_W = max(np.abs(np.roll(W, -1, axis=ax) - W).max() for ax in (0, 1))
        return {"A": float(jumps_A), "W": float(jumps_W)}


def quaternion_frame_experiment(C: Coframe, S: ParamSurface, V: Optional[Callable] = None,
                                grid: int = 16) -> FrameExperiment:
    """Evaluate W = A J2 A^-1 V on a grid over the surface ``S`` in R^4.

    ``V`` maps a point of R^4 to a normal vector; the default is the
    gradient of |z|^2 - 1, i.e. 2(x1, x2, 0, 0).
    """
    if C.dim != 4 or S.dim != 4:
        raise ValueError("the quaternionic frame experiment lives on R^4")
    V = V or (lambda x: np.array([2 * x[0], 2 * x[1], 0.0, 0.0]))
    samples, skipped = [], []
    for t in periodic_grid(grid):
        x = S.position(t)
        T = S.jacobian(t)
        v = np.asarray(V(x), float)
        if np.linalg.norm(v) == 0 or np.max(np.abs(T.T @ v)) > 1e-9 * np.linalg.norm(v) * np.linalg.norm(T):
            raise ValueError(f"V is not a nonvanishing normal field at {x.tolist()}")
        J = j_at(C, x).J
        try:
            A = conjugating_frame(J)
        except np.linalg.LinAlgError:
            skipped.append(t)
            continue
        Ainv = np.linalg.inv(A)
        conj_defect = float(np.max(np.abs(A @ J1 @ Ainv - J)))
        W = A @ J2 @ Ainv @ v
        Q, _ = np.linalg.qr(T)
        wn = float(np.linalg.norm(W))
        tangency = float(np.linalg.norm(W - Q @ (Q.T @ W)) / wn) if wn > 0 else float("inf")
        samples.append(FrameSample(t, x, conj_defect, W, wn, tangency, A))
    return FrameExperiment(samples, skipped, grid)
