"""Zero sets of complex functions and the almost-complex-hypersurface test.

For f: R^2n -> C with df ^ conj(df) nonzero on Z_f = f^-1(0), the following
are equivalent at a point of Z_f and are evaluated side by side:

* c1 -- the tangent space ker(Re df) n ker(Im df) is J-invariant;
* c3 -- df ^ conj(df) has no (2,0) or (0,2) component;
* c4 -- df ^ conj(df) ^ alpha_1 ^ ... ^ alpha_n vanishes;
* c5 -- dbar f ^ conj(partial f) vanishes.

All four are reported as scale-free relative defects.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np

from .acs import Coframe, bidegree_parts, dbar_scalar, j_at, partial_scalar
from .errors import ConvergenceError, PreconditionError, RegularityError
from .exterior import AltTensor, wedge
from .jet import ScalarField

__all__ = [
    "ZeroSetSample", "SampleCheck", "CriterioReport", "REGULARITY_MARGIN",
    "real_jacobian", "project_to_zero_set", "criterio_check", "criterio_at",
    "offset_identity_check", "paper_basis_constant", "identity_closed_form",
]

REGULARITY_MARGIN = 1e-6


def real_jacobian(f: ScalarField, p) -> tuple:
    """(Re f, Im f) at p and its 2 x 2n real Jacobian."""
    jet = f.jet(p, 1)
    return np.array([jet.value.real, jet.value.imag]), np.vstack([jet.grad.real, jet.grad.imag])


@dataclass(frozen=True)
class ZeroSetSample:
    point: np.ndarray
    residual: float
    margin: float
    iterations: int = 0

    @property
    def flagged(self) -> bool:
        return self.margin <= REGULARITY_MARGIN


def project_to_zero_set(f: ScalarField, seed, max_iter: int = 50, tol: float = 1e-12) -> ZeroSetSample:
    """Gauss-Newton projection p <- p - Df(p)^+ f(p) onto Z_f.

    Raises RegularityError if the real Jacobian drops rank at an iterate and
    ConvergenceError (with the residual trace) if ``max_iter`` is exhausted.
    """
    p = np.array(seed, dtype=float)
    trace = []
    for it in range(max_iter + 1):
        r, Df = real_jacobian(f, p)
        res = float(np.linalg.norm(r))
        trace.append(res)
        sv = np.linalg.svd(Df, compute_uv=False)
        if sv[-1] <= 1e-12 * max(sv[0], 1.0):
            raise RegularityError(f"real Jacobian of f has rank < 2 at {p.tolist()} (singular values {sv})")
        if res <= tol:
            return ZeroSetSample(p, res, float(sv[-1]), it)
        if it == max_iter:
            break
        step = np.linalg.lstsq(Df, r, rcond=None)[0]
        p = p - step
    raise ConvergenceError(f"no convergence within {max_iter} iterations (residual {trace[-1]:.3e})", trace)


@dataclass(frozen=True)
class SampleCheck:
    point: np.ndarray
    c1: float
    c3: float
    c4: float
    c5: float
    verdict: str  # pass | fail | inconclusive
    consistent: bool

    @property
    def defects(self) -> tuple:
        return (self.c1, self.c3, self.c4, self.c5)


@dataclass
class CriterioReport:
    tol: float
    samples: List[SampleCheck] = field(default_factory=list)
    excluded: List[ZeroSetSample] = field(default_factory=list)

    @property
    def verdict(self) -> str:
        """pass: every sample passes; fail: any sample fails; else inconclusive."""
        if not self.samples:
            return "inconclusive"
        verdicts = {s.verdict for s in self.samples}
        if "fail" in verdicts:
            return "fail"
        if verdicts == {"pass"}:
            return "pass"
        return "inconclusive"

    @property
    def consistent(self) -> bool:
        return all(s.consistent for s in self.samples)

    def summary(self) -> dict:
        out = {}
        for name in ("c1", "c3", "c4", "c5"):
            vals = np.array([getattr(s, name) for s in self.samples]) if self.samples else np.zeros(1)
            out[name] = {"min": float(vals.min()), "max": float(vals.max()), "median": float(np.median(vals))}
        out["n_samples"] = len(self.samples)
        out["n_excluded"] = len(self.excluded)
        out["n_inconclusive"] = sum(s.verdict == "inconclusive" for s in self.samples)
        return out


def _band(values: Sequence[float], tol: float) -> tuple:
    lows = [v <= tol for v in values]
    highs = [v >= 10 * tol for v in values]
    if all(lows):
        return "pass", True
    if all(highs):
        return "fail", True
    consistent = not (any(lows) and any(highs))
    return "inconclusive", consistent


def criterio_at(f: ScalarField, C: Coframe, p, tol: float = 1e-9) -> SampleCheck:
    """Evaluate the four defects at a single point of Z_f."""
    p = np.asarray(p, float)
    acs = j_at(C, p)
    J = acs.J
    jet = f.jet(p, 1)
    g = jet.grad
    _, Df = real_jacobian(f, p)

    # c1: J-invariance of the real tangent space K = ker Df
    _, _, Vt = np.linalg.svd(Df)
    K = Vt[2:].T
    P = K @ K.T
    c1 = float(np.linalg.norm((np.eye(C.dim) - P) @ J @ P, 2) / np.linalg.norm(J, 2))

    df = AltTensor.one_form(g)
    dfn = float(np.linalg.norm(g)) ** 2
    ddbar = wedge(df, df.conj())

    # c3: (2,0) + (0,2) components of df ^ conj(df)
    parts = bidegree_parts(C, p, ddbar, acs)
    c3 = (parts[(2, 0)] + parts[(0, 2)]).norm() / dfn

    # c4: df ^ conj(df) ^ alpha_1 ^ ... ^ alpha_n
    chain = ddbar
    scale = dfn
    for i in range(C.n):
        alpha = AltTensor.one_form(acs.M[i])
        chain = wedge(chain, alpha)
        scale *= float(np.linalg.norm(acs.M[i]))
    c4 = chain.norm() / scale

    # c5: dbar f ^ conj(partial f)
    c5 = wedge(dbar_scalar(C, f, p), partial_scalar(C, f, p).conj()).norm() / dfn

    verdict, consistent = _band((c1, c3, c4, c5), tol)
    return SampleCheck(p, c1, c3, c4, c5, verdict, consistent)


def criterio_check(f: ScalarField, C: Coframe, samples: Sequence[ZeroSetSample], tol: float = 1e-9) -> CriterioReport:
    """Run :func:`criterio_at` at every regular sample; flagged samples are excluded."""
    report = CriterioReport(tol)
    for s in samples:
        if s.flagged or s.residual > 1e-10:
            report.excluded.append(s)
            continue
        report.samples.append(criterio_at(f, C, s.point, tol))
    return report


# -- the closed-form identity on R^4 -------------------------------------------

def paper_basis_constant() -> complex:
    """kappa with dwbar ^ dzbar ^ dz ^ dw = kappa dx1 ^ dx2 ^ dx3 ^ dx4.

    Expanded from the coordinate convention rather than hard-coded; a
    mismatch with the hand value -4 means the conventions drifted.
    """
    dz = AltTensor.one_form([1, 1j, 0, 0])
    dw = AltTensor.one_form([0, 0, 1, 1j])
    kappa = wedge(wedge(wedge(dw.conj(), dz.conj()), dz), dw).top_coefficient()
    if abs(kappa - (-4)) > 1e-15:
        raise AssertionError(f"basis constant {kappa} disagrees with the expected -4; coordinate convention changed")
    return kappa


def identity_closed_form(p) -> complex:
    """2i zw (1 - |zw|^2) at p = (Re z, Im z, Re w, Im w)."""
    z = complex(p[0], p[1])
    w = complex(p[2], p[3])
    zw = z * w
    return 2j * zw * (1 - abs(zw) ** 2)


def offset_identity_check(f: ScalarField, C: Coframe, p) -> complex:
    """Coefficient of df ^ conj(df) ^ alpha_1 ^ alpha_2 on dwbar ^ dzbar ^ dz ^ dw at p.

    Only meaningful on R^4; ``p`` need not lie on Z_f.
    """
    if f.dim != 4 or C.dim != 4:
        raise PreconditionError("the identity lives on R^4 with a two-form coframe")
    p = np.asarray(p, float)
    df = AltTensor.one_form(f.jet(p, 1).grad)
    A, _ = C.rows(p)
    form = wedge(wedge(df, df.conj()), wedge(AltTensor.one_form(A[0]), AltTensor.one_form(A[1])))
    return form.top_coefficient() / paper_basis_constant()
