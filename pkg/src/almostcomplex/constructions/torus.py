"""The torus in (R^4, J) and the structures J_Lambda on R^4n.

Conventions: the elliptic curve is the unit bicircle |z| = |w| = 1 with
angle coordinates (u, v) in [0, 2pi)^2, i.e. the lattice is 2pi Z^2.  On
R^4n the k-th factor uses the complex coordinates z_{2k-1}, z_{2k} (called
z_k, w_k below) and the embedded torus has angles (u_1, v_1, ..., u_n, v_n).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from ..acs import Coframe
from ..errors import DomainError, EvaluationError, PreconditionError
from ..exterior import AltTensor, FormField, pullback
from ..expr import parse
from ..jet import ScalarField
from ..surface import ParamSurface, periodic_grid

__all__ = [
    "torus_f", "torus_coframe", "torus_embedding", "product_torus",
    "base_coframe_4n", "angle_chart", "TauSpec", "build_j_lambda",
    "jlambda_pullback_errors",
]


def torus_f() -> ScalarField:
    """f(z, w) = (|z|^2 - 1) + i(|w|^2 - 1); its zero set is the unit bicircle."""
    return ScalarField.from_expr("(abs2(z1) - 1) + I*(abs2(z2) - 1)", 4)


def torus_coframe() -> Coframe:
    """alpha_1 = dz - i zw dwbar, alpha_2 = dw + i zw dzbar on R^4."""
    return Coframe.from_rows(4, [
        {"dz": ["1", "0"], "dzbar": ["0", "-I*z1*z2"]},
        {"dz": ["0", "1"], "dzbar": ["I*z1*z2", "0"]},
    ], name="torus")


def product_torus(n: int) -> ParamSurface:
    """(u_k, v_k) -> (cos u_k, sin u_k, cos v_k, sin v_k) for k = 1..n, into R^4n."""

    def position(t):
        c, s = np.cos(t), np.sin(t)
        return np.column_stack([c, s]).ravel()

    def jacobian(t):
        out = np.zeros((4 * n, 2 * n))
        for j, angle in enumerate(t):
            out[2 * j, j] = -np.sin(angle)
            out[2 * j + 1, j] = np.cos(angle)
        return out

    return ParamSurface(4 * n, position, jacobian, n_params=2 * n, name=f"product torus T^{2 * n}")


def torus_embedding() -> ParamSurface:
    """The unit bicircle (u, v) -> (cos u, sin u, cos v, sin v) in R^4."""
    S = product_torus(1)
    S.name = "torus"
    return S


def _guarded(field: ScalarField, what: str) -> ScalarField:
    fn = field._fn

    def guarded(p, order):
        try:
            return fn(p, order)
        except EvaluationError as exc:
            raise DomainError(f"{what} is undefined at {p.tolist()} ({exc})") from None

    return ScalarField(field.dim, guarded, field.label, field.max_order)


def base_coframe_4n(n: int) -> Coframe:
    """Coframe {alpha_k, beta_k} on the open set of R^4n where every z_k, w_k is nonzero.

    alpha_k = (dz_k - i z_k w_k dwbar_k) / (i z_k) and
    beta_k = (dw_k + i z_k w_k dzbar_k) / w_k, normalised so that both pull
    back to du_k + i dv_k on the product torus.
    """
    dim = 4 * n
    m = 2 * n
    alphas, betas = [], []
    for k in range(n):
        a, b = 2 * k, 2 * k + 1  # 0-based complex coordinate slots of z_k, w_k
        dz, dzbar = ["0"] * m, ["0"] * m
        dz[a] = f"1/(I*z{a + 1})"
        dzbar[b] = f"-z{b + 1}"
        alphas.append(_guard_form(FormField.from_complex(dim, dz, dzbar), f"alpha_{k + 1}"))
        dz, dzbar = ["0"] * m, ["0"] * m
        dz[b] = f"1/z{b + 1}"
        dzbar[a] = f"I*z{a + 1}"
        betas.append(_guard_form(FormField.from_complex(dim, dz, dzbar), f"beta_{k + 1}"))
    return Coframe(alphas + betas, name=f"base R^{dim}")


def _guard_form(F: FormField, what: str) -> FormField:
    ev = F._eval

    def guarded(p, order):
        try:
            return ev(p, order)
        except EvaluationError as exc:
            raise DomainError(f"{what} is undefined at {p.tolist()} ({exc})") from None

    return FormField(F.dim, F.degree, guarded, F.max_order, label=what)


def angle_chart(n: int):
    """The map R^4n -> R^2n, (z_k, w_k) -> (arg z_k, arg w_k), with derivatives."""
    dim, m = 4 * n, 2 * n

    def chart(p, order):
        y = np.empty(m)
        dy = np.zeros((m, dim)) if order >= 1 else None
        d2y = np.zeros((m, dim, dim)) if order >= 2 else None
        for j in range(m):
            x, s = p[2 * j], p[2 * j + 1]
            r2 = x * x + s * s
            if r2 == 0.0:
                raise DomainError(f"angle coordinate {j + 1} undefined at {p.tolist()}")
            y[j] = np.arctan2(s, x)
            if order >= 1:
                dy[j, 2 * j] = -s / r2
                dy[j, 2 * j + 1] = x / r2
            if order >= 2:
                r4 = r2 * r2
                d2y[j, 2 * j, 2 * j] = 2 * x * s / r4
                d2y[j, 2 * j + 1, 2 * j + 1] = -2 * x * s / r4
                d2y[j, 2 * j, 2 * j + 1] = d2y[j, 2 * j + 1, 2 * j] = (s * s - x * x) / r4
        return y, dy, d2y

    return chart


def _angle_aliases(n: int) -> dict:
    out = {}
    for k in range(n):
        out[f"u{k + 1}"] = 2 * k + 1
        out[f"v{k + 1}"] = 2 * k + 2
    return out


@dataclass(frozen=True)
class TauSpec:
    """Coefficients of an almost complex structure on the torus T = R^2n / 2pi Z^2n.

    zeta_i = sum_j tau[i][j] dzeta_j + tau_bar[i][j] dzetabar_j with
    dzeta_j = du_j + i dv_j.  Entries are expression texts in the angle
    variables u1, v1, ..., un, vn (equivalently x1..x2n); they must be
    2pi-periodic.
    """

    n: int
    tau: Tuple[Tuple[str, ...], ...]
    tau_bar: Tuple[Tuple[str, ...], ...]

    def __post_init__(self):
        for name, mat in (("tau", self.tau), ("tau_bar", self.tau_bar)):
            if len(mat) != self.n or any(len(row) != self.n for row in mat):
                raise ValueError(f"{name} must be {self.n} x {self.n}")
        object.__setattr__(self, "tau", tuple(tuple(str(e) for e in r) for r in self.tau))
        object.__setattr__(self, "tau_bar", tuple(tuple(str(e) for e in r) for r in self.tau_bar))

    @classmethod
    def identity(cls, n: int) -> "TauSpec":
        eye = [["1" if i == j else "0" for j in range(n)] for i in range(n)]
        zero = [["0"] * n for _ in range(n)]
        return cls(n, eye, zero)

    @classmethod
    def from_dict(cls, data: dict) -> "TauSpec":
        return cls(int(data["n"]), data["tau"], data["tau_bar"])

    def to_dict(self) -> dict:
        return {"n": self.n, "tau": [list(r) for r in self.tau], "tau_bar": [list(r) for r in self.tau_bar]}

    def fields(self) -> Tuple[List[List[ScalarField]], List[List[ScalarField]]]:
        """tau and tau_bar as fields on the angle space R^2n."""
        aliases = _angle_aliases(self.n)
        m = 2 * self.n
        mk = lambda mat: [[parse(e, m, aliases=aliases).field(m) for e in row] for row in mat]
        return mk(self.tau), mk(self.tau_bar)

    def matrices(self, angles) -> Tuple[np.ndarray, np.ndarray]:
        A_f, B_f = self.fields()
        angles = np.asarray(angles, float)
        A = np.array([[f(angles) for f in row] for row in A_f])
        B = np.array([[f(angles) for f in row] for row in B_f])
        return A, B

    def zeta(self, angles) -> List[AltTensor]:
        """zeta_1..zeta_n at the given angles, as 1-forms on the angle space."""
        A, B = self.matrices(angles)
        out = []
        for i in range(self.n):
            comps = np.zeros(2 * self.n, complex)
            comps[0::2] = A[i] + B[i]
            comps[1::2] = 1j * (A[i] - B[i])
            out.append(AltTensor.one_form(comps))
        return out

    def spanning_margin(self, N: int = 8) -> float:
        """Smallest singular value of [[tau, tau_bar], [conj tau_bar, conj tau]] over an N-point-per-axis grid."""
        A_f, B_f = self.fields()
        worst = np.inf
        for t in periodic_grid(N, 2 * self.n):
            A = np.array([[f(t) for f in row] for row in A_f])
            B = np.array([[f(t) for f in row] for row in B_f])
            Z = np.block([[A, B], [B.conj(), A.conj()]])
            worst = min(worst, float(np.linalg.svd(Z, compute_uv=False)[-1]))
        return worst


def build_j_lambda(t: TauSpec, check_grid: int = 4) -> Coframe:
    """The coframe {alpha_i^tau, beta_i^tau} on R^4n inducing J_Lambda.

    alpha_i^tau = sum_k tau_ik alpha_k + tau_bar_ik conj(beta_k),
    beta_i^tau = sum_k tau_ik beta_k + tau_bar_ik conj(alpha_k),
    with tau extended from the torus through the angle map.
    """
    margin = t.spanning_margin(check_grid)
    if margin < 1e-8:
        raise PreconditionError(f"tau does not define an almost complex structure (margin {margin:.3e})")
    n = t.n
    base = base_coframe_4n(n)
    alphas, betas = base.forms[:n], base.forms[n:]
    chart = angle_chart(n)
    A_f, B_f = t.fields()
    lift = lambda f: _guarded(f.pullback(chart, 4 * n, label=f.label), "tau")
    new_alpha, new_beta = [], []
    for i in range(n):
        a_i = b_i = None
        for k in range(n):
            tau_ik, taub_ik = lift(A_f[i][k]), lift(B_f[i][k])
            ta = alphas[k] * tau_ik + betas[k].conj() * taub_ik
            tb = betas[k] * tau_ik + alphas[k].conj() * taub_ik
            a_i = ta if a_i is None else a_i + ta
            b_i = tb if b_i is None else b_i + tb
        new_alpha.append(a_i)
        new_beta.append(b_i)
    return Coframe(new_alpha + new_beta, name="J_Lambda")


def jlambda_pullback_errors(t: TauSpec, C: Coframe = None, grid: Sequence = None) -> dict:
    """max over grid of |i^* alpha_i^tau - zeta_i| and |i^* beta_i^tau - zeta_i|."""
    C = C or build_j_lambda(t)
    S = product_torus(t.n)
    if grid is None:
        grid = periodic_grid(16 if t.n == 1 else 4, 2 * t.n)
    n = t.n
    worst_a = worst_b = 0.0
    for ang in grid:
        zetas = t.zeta(ang)
        x = S.position(ang)
        for i in range(n):
            pa = pullback(C.forms[i].at(x), S, ang)
            pb = pullback(C.forms[n + i].at(x), S, ang)
            worst_a = max(worst_a, (pa - zetas[i]).norm())
            worst_b = max(worst_b, (pb - zetas[i]).norm())
    return {"alpha": worst_a, "beta": worst_b, "samples": len(grid)}
