"""Surface integrals, Stokes checks and taming margins.

An exact 2-form integrates to zero over a closed surface, while a form
taming J integrates to a positive number over any closed J-holomorphic
surface.  Both facts are evaluated numerically for supplied candidates and
assembled into a falsification certificate; nothing here ranges over all
symplectic forms.
"""

from __future__ import annotations

import math

from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from .acs import Coframe, invariance_defect, j_at
from .exterior import FormField, apply, d
from .surface import ParamSurface, periodic_grid

__all__ = [
    "QuadratureResult", "StokesReport", "TamingReport", "Certificate",
    "integrate_2form", "stokes_witness", "verify_primitive", "taming_margin",
    "non_tameability_certificate",
]

TWO_PI = 2 * np.pi


@dataclass(frozen=True)
class QuadratureResult:
    value: complex
    value_2n: complex
    n: int

    @property
    def error_estimate(self) -> float:
        return abs(self.value - self.value_2n)


def _trapezoid(omega: FormField, S: ParamSurface, N: int, absolute: bool = False) -> complex:
    # fsum makes the result independent of the visiting order, so exchanging
    # the parameters negates the integral exactly
    re, im = [], []
    for t in periodic_grid(N):
        T = S.jacobian(t)
        val = apply(omega.at(S.position(t)), T[:, 0], T[:, 1])
        val = abs(val) if absolute else complex(val)
        re.append(val.real)
        im.append(val.imag)
    return complex(math.fsum(re), math.fsum(im)) * (TWO_PI / N) ** 2


def integrate_2form(omega: FormField, S: ParamSurface, N: int = 32) -> QuadratureResult:
    """Equal-weight periodic trapezoid rule for the integral of omega over S.

    The rule is evaluated at N and 2N points per axis; the difference is the
    error estimate (spectrally small for smooth periodic integrands).
    """
    if omega.degree != 2:
        raise ValueError("integrate_2form needs a 2-form")
    if S.n_params != 2 or not all(S.periodic):
        raise ValueError("S must be a doubly periodic surface")
    if N < 8:
        raise ValueError("grid size must be at least 8")
    return QuadratureResult(_trapezoid(omega, S, N), _trapezoid(omega, S, 2 * N), N)


@dataclass(frozen=True)
class StokesReport:
    integral: complex
    scale: float
    error_estimate: float

    @property
    def relative(self) -> float:
        return abs(self.integral) / self.scale if self.scale > 0 else abs(self.integral)

    def passed(self, tol: float = 1e-8) -> bool:
        return self.relative <= tol


def stokes_witness(theta: FormField, S: ParamSurface, N: int = 32) -> StokesReport:
    """Integral of d(theta) over the closed surface S, normalised by the integral of its magnitude."""
    dtheta = d(theta)
    q = integrate_2form(dtheta, S, N)
    return StokesReport(q.value, float(_trapezoid(dtheta, S, N, absolute=True).real), q.error_estimate)


def verify_primitive(theta: FormField, omega: FormField, n_points: int = 100, box: float = 2.0,
                     seed: int = 0) -> float:
    """max |d(theta) - omega| / max(1, |omega|) over random points of [-box, box]^dim."""
    dtheta = d(theta)
    rng = np.random.default_rng(seed)
    worst = 0.0
    for p in rng.uniform(-box, box, (n_points, omega.dim)):
        w = omega.at(p)
        worst = max(worst, (dtheta.at(p) - w).norm() / max(1.0, w.norm()))
    return worst


@dataclass
class TamingReport:
    """Taming margins of omega along S for the structure of C.

    ``margins[i]`` is the smallest eigenvalue of the symmetrised form
    (a, b) -> (omega(t_a, J t_b) + omega(t_b, J t_a)) / 2 on an orthonormal
    tangent basis at the i-th grid point.
    """

    omega_label: str
    grid: int
    margins: np.ndarray
    invariance: np.ndarray
    orientation: np.ndarray
    omega_imag: float
    theta_verified: Optional[bool] = None
    primitive_error: Optional[float] = None
    integral: Optional[complex] = None
    notes: List[str] = field(default_factory=list)

    @property
    def margin_min(self) -> float:
        return float(self.margins.min())

    @property
    def margin_max(self) -> float:
        return float(self.margins.max())

    @property
    def invariance_max(self) -> float:
        return float(self.invariance.max())

    @property
    def verdict(self) -> str:
        if self.margin_min > 0:
            return "omega tames J along S"
        return "omega does not tame J along S"


def taming_margin(omega: FormField, C: Coframe, S: ParamSurface, N: int = 32) -> TamingReport:
    """Grid evaluation of taming margins and tangent-plane J-invariance along S."""
    margins, inv, orient = [], [], []
    imag = 0.0
    for t in periodic_grid(N):
        x = S.position(t)
        T = S.jacobian(t)
        J = j_at(C, x).J
        Q, R = np.linalg.qr(T)
        w = omega.at(x)
        JQ = J @ Q
        G = np.empty((2, 2), complex)
        for a in range(2):
            for b in range(2):
                G[a, b] = 0.5 * (apply(w, Q[:, a], JQ[:, b]) + apply(w, Q[:, b], JQ[:, a]))
        imag = max(imag, float(np.abs(G.imag).max()))
        margins.append(float(np.linalg.eigvalsh(G.real)[0]))
        inv.append(invariance_defect(J, T) / np.linalg.norm(J, 2))
        # sign of the complex orientation (t1, J t1) relative to (d_u, d_v)
        coords = np.linalg.lstsq(T, J @ T[:, 0], rcond=None)[0]
        orient.append(np.sign(coords[1]) if coords[1] != 0 else 0.0)
    return TamingReport(getattr(omega, "label", None) or "omega", N, np.array(margins), np.array(inv),
                        np.array(orient), imag)


@dataclass
class Certificate:
    """Outcome of :func:`non_tameability_certificate`.

    ``status`` is ``emitted`` (taming of J by omega falsified), ``refused``
    (preconditions failed, no claim made) or ``not-falsified``.
    """

    status: str
    clauses: List[str]
    text: str
    report: Optional[TamingReport] = None

    def as_dict(self) -> dict:
        out = {"status": self.status, "clauses": list(self.clauses), "text": self.text}
        if self.report is not None:
            r = self.report
            out.update({
                "margin_min": r.margin_min, "margin_max": r.margin_max,
                "invariance_max": r.invariance_max, "primitive_error": r.primitive_error,
                "integral_re": None if r.integral is None else r.integral.real,
                "integral_im": None if r.integral is None else r.integral.imag,
            })
        return out


def non_tameability_certificate(C: Coframe, S: ParamSurface, omega: FormField,
                                theta: Optional[FormField] = None, N: int = 32,
                                invariance_tol: float = 1e-9, zero_tol: float = 1e-10,
                                margin_tol: float = 1e-12) -> Certificate:
    """Falsify "omega tames J" along a closed pseudo-holomorphic surface S.

    Refused (with no partial claims) unless every sampled tangent plane of S
    is J-invariant and, when a primitive is supplied, d(theta) = omega holds
    at 100 random points.
    """
    report = taming_margin(omega, C, S, N)
    if report.invariance_max > invariance_tol:
        msg = (f"refused: S is not pseudo-holomorphic for this structure "
               f"(tangent-plane invariance defect {report.invariance_max:.3e} > {invariance_tol:g})")
        return Certificate("refused", [msg], msg, report)
    if np.any(report.orientation != report.orientation[0]):
        msg = "refused: complex orientation of S is not constant over the grid"
        return Certificate("refused", [msg], msg, report)
    sign = float(report.orientation[0])

    clauses = []
    integral = None
    if theta is not None:
        err = verify_primitive(theta, omega)
        report.primitive_error = err
        report.theta_verified = err <= 1e-9
        if not report.theta_verified:
            msg = f"refused: d(theta) differs from omega by {err:.3e} > 1e-9"
            return Certificate("refused", [msg], msg, report)
        integral = sign * integrate_2form(omega, S, N).value
        report.integral = integral
        clauses.append(f"(a) omega = d(theta) verified (max deviation {err:.2e}); "
                       f"integral of omega over S = {integral.real:.3e}{integral.imag:+.3e}i "
                       "(exact forms integrate to zero over a closed surface)")
    clauses.append("(b) if omega tamed J along S, omega(t, Jt) > 0 on every tangent plane of the "
                   "J-holomorphic surface S, so omega would restrict to a positive area form and its "
                   "integral over S would be strictly positive")
    mmin, mmax = report.margin_min, report.margin_max
    identically_zero = max(abs(mmin), abs(mmax)) <= margin_tol
    if identically_zero:
        clauses.append(f"(c) computed taming margin is identically zero along S (|margin| <= {margin_tol:g})")
    elif mmin <= 0:
        clauses.append(f"(c) computed taming margin min = {mmin:.3e} <= 0")
    else:
        clauses.append(f"(c) computed taming margin min = {mmin:.3e} > 0")

    integral_zero = integral is not None and abs(integral) <= zero_tol
    if mmin <= margin_tol:
        if integral_zero and identically_zero:
            text = ("integral over S of omega = 0 and margin = 0 identically: omega does not tame J along S; "
                    "any exact taming form is impossible by (a)+(b).")
        elif integral_zero:
            text = ("integral over S of omega = 0 and margin min <= 0: omega does not tame J along S; "
                    "any exact taming form is impossible by (a)+(b).")
        else:
            text = "margin min <= 0: omega does not tame J along S."
        return Certificate("emitted", clauses, text, report)
    if integral_zero:
        # positive margin with vanishing integral contradicts (b): numerical trouble, not geometry
        msg = "refused: positive margins with a vanishing integral; sampling is inconsistent"
        return Certificate("refused", clauses + [msg], msg, report)
    return Certificate("not-falsified", clauses, "omega tames J along the sampled surface; nothing falsified.",
                       report)
