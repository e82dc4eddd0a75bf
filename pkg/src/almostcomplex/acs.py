"""Almost complex structures defined by complex coframes.

A coframe {alpha_1..alpha_n} on R^2n determines J through the eigen-relation
alpha_i(J v) = i alpha_i(v).  Stacking the coframe with its conjugates into
the 2n x 2n complex matrix M gives J = Re(M^-1 diag(i, .., -i, ..) M).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Dict, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from .errors import DegenerateCoframeError
from .exterior import AltTensor, FormField, d, pullback_linear
from .jet import ScalarField, ScalarJet

__all__ = [
    "Coframe", "AcsPoint", "NijenhuisValue", "DSplit", "COND_CAP",
    "j_at", "dj_at", "nijenhuis", "nijenhuis_tensor", "nijenhuis_from_derivatives",
    "nijenhuis_fd", "max_nijenhuis_norm", "type_project", "bidegree_parts", "split_d",
    "dbar_scalar", "partial_scalar", "dbar_form", "coframe_rows_from_j",
    "invariance_defect",
]

COND_CAP = 1e8


class Coframe:
    """n complex 1-form fields on R^2n spanning, with their conjugates, the complexified cotangent space."""

    def __init__(self, forms: Sequence[FormField], name: Optional[str] = None):
        forms = list(forms)
        if not forms:
            raise ValueError("empty coframe")
        dim = forms[0].dim
        for f in forms:
            if f.degree != 1 or f.dim != dim:
                raise ValueError("coframe members must be 1-forms on a common space")
        if dim != 2 * len(forms):
            raise ValueError(f"{len(forms)} forms cannot span the complexified cotangent space of R^{dim}")
        self.forms = tuple(forms)
        self.dim = dim
        self.n = len(forms)
        self.name = name

    @classmethod
    def standard(cls, n: int) -> "Coframe":
        """{dz_1, ..., dz_n}."""
        dim = 2 * n
        forms = []
        for k in range(n):
            dz = ["0"] * n
            dz[k] = "1"
            forms.append(FormField.from_complex(dim, dz, ["0"] * n))
        return cls(forms, name="standard")

    @classmethod
    def from_rows(cls, dim: int, rows: Sequence[dict], name: Optional[str] = None) -> "Coframe":
        """Rows given as ``{"dz": [...], "dzbar": [...]}`` coefficient lists (expressions or numbers)."""
        return cls([FormField.from_complex(dim, r["dz"], r["dzbar"]) for r in rows], name=name)

    def rows(self, p, order: int = 0):
        """Component matrix A (n x 2n) of the coframe at p and, if order >= 1, dA[i, j, k] = d_k A_ij."""
        A = np.zeros((self.n, self.dim), complex)
        dA = np.zeros((self.n, self.dim, self.dim), complex) if order >= 1 else None
        for i, form in enumerate(self.forms):
            for (j,), jet in form.jets(p, order).items():
                A[i, j] = jet.value
                if order >= 1:
                    dA[i, j] = jet.grad
        return A, dA

    def matrix(self, p, order: int = 0):
        """M = [A; conj(A)] and, if order >= 1, dM[:, :, k]."""
        A, dA = self.rows(p, order)
        M = np.vstack([A, A.conj()])
        dM = np.concatenate([dA, dA.conj()]) if dA is not None else None
        return M, dM

    def __repr__(self) -> str:
        return f"Coframe(dim={self.dim}, name={self.name!r})"


def _eigen_diag(n: int) -> np.ndarray:
    return np.concatenate([np.full(n, 1j), np.full(n, -1j)])


@dataclass(frozen=True)
class AcsPoint:
    """The structure J at one point, with the matrices it was computed from."""

    point: np.ndarray
    J: np.ndarray
    M: np.ndarray
    Minv: np.ndarray
    cond: float
    imag_defect: float

    @property
    def n(self) -> int:
        return self.J.shape[0] // 2

    def square_defect(self) -> float:
        return float(np.max(np.abs(self.J @ self.J + np.eye(len(self.J)))))

    def eigen_defect(self, vectors) -> float:
        """max |alpha_i(Jv) - i alpha_i(v)| / (|alpha| |v|) over the given vectors."""
        A = self.M[: self.n]
        scale = np.linalg.norm(A, axis=1)
        worst = 0.0
        for v in np.atleast_2d(vectors):
            err = np.abs(A @ (self.J @ v) - 1j * (A @ v)) / (scale * np.linalg.norm(v))
            worst = max(worst, float(err.max()))
        return worst


def _structure(M: np.ndarray, point, cond_cap: float) -> AcsPoint:
    n = M.shape[0] // 2
    cond = float(np.linalg.cond(M))
    if not np.isfinite(cond) or cond > cond_cap:
        raise DegenerateCoframeError(point, cond)
    Minv = np.linalg.inv(M)
    Jc = Minv @ (_eigen_diag(n)[:, None] * M)
    return AcsPoint(np.asarray(point, float), Jc.real.copy(), M, Minv, cond, float(np.max(np.abs(Jc.imag))))


def j_at(C: Coframe, p, cond_cap: float = COND_CAP) -> AcsPoint:
    """The almost complex structure induced by ``C`` at ``p``."""
    M, _ = C.matrix(p)
    return _structure(M, p, cond_cap)


def dj_at(C: Coframe, p, cond_cap: float = COND_CAP) -> np.ndarray:
    """Array dJ with dJ[k] = dJ/dx_k, differentiating through the matrix inverse."""
    M, dM = C.matrix(p, order=1)
    acs = _structure(M, p, cond_cap)
    D = _eigen_diag(C.n)[:, None]
    out = np.empty((C.dim, C.dim, C.dim))
    for k in range(C.dim):
        dMk = dM[:, :, k]
        out[k] = (acs.Minv @ (D * dMk - dMk @ acs.J)).real
    return out


@dataclass(frozen=True)
class NijenhuisValue:
    point: np.ndarray
    a: int
    b: int
    vector: np.ndarray

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.vector))


def nijenhuis_from_derivatives(J: np.ndarray, dJ: np.ndarray) -> np.ndarray:
    """Full tensor N[:, a, b] = N(e_a, e_b) for constant coordinate fields.

    With X = e_a, Y = e_b the brackets reduce to directional derivatives of
    J e_a and J e_b; [e_a, e_b] = 0.
    """
    # T[i, k, c] = d_k (J e_c)^i
    T = np.transpose(dJ, (1, 0, 2))
    bracket_jj = np.einsum("ikb,ka->iab", T, J) - np.einsum("ika,kb->iab", T, J)
    bracket_jx_y = -np.transpose(T, (0, 2, 1))  # [J e_a, e_b]^i = -T[i, b, a]
    bracket_x_jy = T  # [e_a, J e_b]^i = T[i, a, b]
    return bracket_jj - np.einsum("ij,jab->iab", J, bracket_jx_y + bracket_x_jy)


def nijenhuis_tensor(C: Coframe, p) -> np.ndarray:
    return nijenhuis_from_derivatives(j_at(C, p).J, dj_at(C, p))


def nijenhuis(C: Coframe, p, a: int, b: int) -> NijenhuisValue:
    """N(e_a, e_b) at p (0-based coordinate indices)."""
    N = nijenhuis_tensor(C, p)
    return NijenhuisValue(np.asarray(p, float), a, b, N[:, a, b])


def nijenhuis_fd(jfield: Callable[[np.ndarray], np.ndarray], p, h: float = 1e-5) -> np.ndarray:
    """Nijenhuis tensor of a matrix field J(p), differentiated by central differences."""
    p = np.asarray(p, float)
    m = len(p)
    dJ = np.empty((m, m, m))
    for k in range(m):
        e = np.zeros(m)
        e[k] = h
        dJ[k] = (np.asarray(jfield(p + e)) - np.asarray(jfield(p - e))) / (2 * h)
    return nijenhuis_from_derivatives(np.asarray(jfield(p)), dJ)


def max_nijenhuis_norm(N: np.ndarray) -> float:
    return float(np.max(np.linalg.norm(N, axis=0)))


# -- bidegree ----------------------------------------------------------------

def bidegree_parts(C: Coframe, p, a: AltTensor, acs: Optional[AcsPoint] = None) -> Dict[Tuple[int, int], AltTensor]:
    """Decompose ``a`` into its (p, q) components with respect to ``C`` at ``p``.

    The form is rewritten in the basis of wedges of alpha_i and conj(alpha_j)
    (via M^-1), sorted by how many conjugate factors each basis element has,
    and each group is mapped back to the dx basis (via M).
    """
    acs = acs or j_at(C, p)
    n = C.n
    in_frame = pullback_linear(a, acs.Minv)
    groups: Dict[Tuple[int, int], dict] = {}
    for K, c in in_frame.coeffs.items():
        q = sum(1 for l in K if l >= n)
        groups.setdefault((len(K) - q, q), {})[K] = c
    out = {}
    for r in range(a.degree + 1):
        key = (a.degree - r, r)
        part = AltTensor(a.dim, a.degree, groups.get(key, {}))
        out[key] = pullback_linear(part, acs.M)
    return out


def type_project(C: Coframe, p, a: AltTensor, bidegree: Tuple[int, int], acs: Optional[AcsPoint] = None) -> AltTensor:
    """The (p, q) component of ``a`` at ``p``."""
    pd, qd = bidegree
    if pd + qd != a.degree or pd < 0 or qd < 0:
        raise ValueError(f"bidegree {bidegree} incompatible with a {a.degree}-form")
    return bidegree_parts(C, p, a, acs)[(pd, qd)]


class DSplit(NamedTuple):
    """Components of dF for F of bidegree (p, q)."""

    abar: AltTensor  # (p-1, q+2)
    dbar: AltTensor  # (p, q+1)
    partial: AltTensor  # (p+1, q)
    a: AltTensor  # (p+2, q-1)
    bidegree: Tuple[int, int]


def split_d(C: Coframe, F: FormField, p, bidegree: Optional[Tuple[int, int]] = None, tol: float = 1e-9) -> DSplit:
    """Split dF at p into its four bidegree components.

    ``F`` must be of pure type at p; if ``bidegree`` is omitted it is detected.
    """
    acs = j_at(C, p)
    value = F.at(p)
    parts = bidegree_parts(C, p, value, acs)
    scale = max(value.norm(), 1e-300)
    if bidegree is None:
        live = [k for k, v in parts.items() if v.norm() > tol * scale]
        if len(live) > 1:
            raise ValueError(f"form is not of pure type at p: components {sorted(live)}")
        bidegree = live[0] if live else (F.degree, 0)
    else:
        stray = sum(v.norm() for k, v in parts.items() if k != tuple(bidegree))
        if stray > tol * scale:
            raise ValueError(f"form is not of pure type {tuple(bidegree)} at p (stray norm {stray:.3e})")
    pd, qd = bidegree
    dparts = bidegree_parts(C, p, d(F).at(p), acs)
    zero = AltTensor(C.dim, F.degree + 1)
    return DSplit(
        abar=dparts.get((pd - 1, qd + 2), zero),
        dbar=dparts.get((pd, qd + 1), zero),
        partial=dparts.get((pd + 1, qd), zero),
        a=dparts.get((pd + 2, qd - 1), zero),
        bidegree=(pd, qd),
    )


def dbar_scalar(C: Coframe, f: ScalarField, p) -> AltTensor:
    """(0,1) part of df at p: components (1/2) grad f (I + iJ)."""
    J = j_at(C, p).J
    g = f.jet(p, 1).grad
    return AltTensor.one_form(0.5 * g @ (np.eye(C.dim) + 1j * J))


def partial_scalar(C: Coframe, f: ScalarField, p) -> AltTensor:
    """(1,0) part of df at p."""
    J = j_at(C, p).J
    g = f.jet(p, 1).grad
    return AltTensor.one_form(0.5 * g @ (np.eye(C.dim) - 1j * J))


def dbar_form(C: Coframe, f: ScalarField) -> FormField:
    """The 1-form field dbar f; coefficients carry first derivatives only."""
    m = C.dim
    eye = np.eye(m)

    def evaluator(p, order):
        if order > 1:
            raise ValueError("dbar f carries coefficient derivatives up to order 1")
        jet = f.jet(p, order + 1)
        J = j_at(C, p).J
        P = 0.5 * (eye + 1j * J)
        comps = jet.grad @ P
        if order == 0:
            return {(j,): ScalarJet(comps[j]) for j in range(m)}
        dJ = dj_at(C, p)
        # d_k comps_j = sum_i H_ki P_ij + (i/2) sum_i g_i dJ[k]_ij
        dcomps = jet.hess @ P + 0.5j * np.einsum("i,kij->kj", jet.grad, dJ)
        return {(j,): ScalarJet(comps[j], dcomps[:, j].copy()) for j in range(m)}

    return FormField(m, 1, evaluator, max_order=1, label="dbar f")


def coframe_rows_from_j(J: np.ndarray) -> np.ndarray:
    """Rows spanning the +i left eigenspace of a real J (so alpha J = i alpha)."""
    J = np.asarray(J, float)
    w, V = np.linalg.eig(J.T)
    sel = np.abs(w - 1j) < 1e-6
    if sel.sum() != len(J) // 2:
        raise ValueError("matrix is not an almost complex structure (eigenvalues are not +-i)")
    return V[:, sel].T


def invariance_defect(J: np.ndarray, basis: np.ndarray) -> float:
    """|| (I - P) J P || for the orthogonal projector P onto span(basis columns)."""
    Q, _ = np.linalg.qr(np.asarray(basis, float))
    P = Q @ Q.T
    return float(np.linalg.norm((np.eye(len(J)) - P) @ J @ P, 2))
