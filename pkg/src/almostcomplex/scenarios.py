"""Check blocks shared by the command-line driver and the acceptance tests.

Each builder runs one numerical check and returns a :class:`~.report.Check`
with per-sample rows, summary statistics and a verdict.
"""

from __future__ import annotations

from typing import Optional, Sequence

import numpy as np

from .acs import Coframe, j_at, max_nijenhuis_norm, nijenhuis_fd, nijenhuis_tensor, split_d
from .constructions import (
    J1, TauSpec, build_j_lambda, cp1_in_s6, jlambda_pullback_errors, octonion_mul,
    product_torus, quaternion_frame_experiment, s6_acs, stereographic_pushforward, torus_coframe,
    torus_embedding, torus_f,
)
from .errors import ConvergenceError, RegularityError
from .exterior import FormField, pullback
from .hypersurf import (
    criterio_check, identity_closed_form, offset_identity_check, paper_basis_constant, project_to_zero_set,
)
from .jet import ScalarField
from .report import Check, stats
from .sampling import halton_box, near_torus_points, periodic_grid
from .surface import ParamSurface
from .tame import non_tameability_certificate, stokes_witness

__all__ = [
    "TORUS_WITNESS_POINT", "TORUS_NIJENHUIS_ORACLE", "standard_omega", "standard_theta",
    "identity_block", "criterio_block", "nijenhuis_witness_block", "nijenhuis_sweep_block",
    "pullback_block", "structure_block", "certificate_block", "control_certificate_block",
    "quaternion_block", "jlambda_blocks", "octonion_blocks", "stokes_block", "zero_set_samples",
    "jlambda_test_specs",
]

TORUS_WITNESS_POINT = np.array([1.0, 0.0, 1.0, 0.0])
# max_{a<b} |N(e_a, e_b)| of the torus structure at (1, 0, 1, 0), from a
# central-difference bracket evaluation of a hand-written J (frozen oracle)
TORUS_NIJENHUIS_ORACLE = 2.0
GRID_PHASE = 0.3


def standard_omega(dim: int = 4) -> FormField:
    """dx1^dx2 + dx3^dx4 + ... as a constant form field."""
    return FormField.from_coefficients(dim, 2, {(2 * k, 2 * k + 1): 1 for k in range(dim // 2)})


def standard_theta(dim: int = 4) -> FormField:
    """(1/2) sum (x_{2k-1} dx_{2k} - x_{2k} dx_{2k-1}), a primitive of the standard form."""
    comps = []
    for k in range(dim // 2):
        comps += [f"-0.5*x{2 * k + 2}", f"0.5*x{2 * k + 1}"]
    return FormField.one_form(dim, comps)


# -- the torus example on R^4 ---------------------------------------------------

def identity_block(n_points: int = 1000, box: float = 2.0, tol: float = 1e-10) -> Check:
    """Coefficient of df ^ conj(df) ^ alpha_1 ^ alpha_2 against 2i zw (1 - |zw|^2)."""
    f, C = torus_f(), torus_coframe()
    kappa = paper_basis_constant()
    rows, errs = [], []
    for p in halton_box(n_points, 4, box):
        got = offset_identity_check(f, C, p)
        want = identity_closed_form(p)
        err = abs(got - want) / abs(want) if want != 0 else abs(got)
        errs.append(err)
        rows.append({"point": p, "computed": got, "closed_form": want, "rel_error": err})
    worst = max(errs)
    return Check(
        "identity", "pass" if worst <= tol else "fail",
        inputs={"points": n_points, "sampler": "halton (unscrambled)", "box": box, "tol": tol},
        summary={"rel_error": stats(errs), "max_rel_error": worst, "basis_constant": kappa},
        rows=rows,
    )


def zero_set_samples(f: ScalarField, seeds: Sequence) -> tuple:
    """Project seeds onto Z_f; returns (samples, failure rows)."""
    samples, failures = [], []
    for s in seeds:
        try:
            samples.append(project_to_zero_set(f, s))
        except (ConvergenceError, RegularityError) as exc:
            failures.append({"seed": np.asarray(s, float), "error": str(exc)})
    return samples, failures


def criterio_block(f: ScalarField, C: Coframe, seeds: Sequence, tol: float = 1e-9,
                   name: str = "criterio") -> Check:
    samples, failures = zero_set_samples(f, seeds)
    rep = criterio_check(f, C, samples, tol)
    rows = [{"point": s.point, "c1": s.c1, "c3": s.c3, "c4": s.c4, "c5": s.c5, "verdict": s.verdict,
             "consistent": s.consistent} for s in rep.samples]
    rows += [{"point": s.point, "excluded": "regularity margin below threshold", "margin": s.margin}
             for s in rep.excluded]
    rows += failures
    summary = rep.summary()
    summary["n_projection_failures"] = len(failures)
    summary["equivalence_consistent"] = rep.consistent
    verdict = rep.verdict
    if not rep.consistent:
        verdict = "inconclusive"
    return Check(name, verdict, inputs={"seeds": len(seeds), "tol": tol, "coframe": C.name}, summary=summary,
                 rows=rows)


def torus_grid_seeds(grid: int = 16) -> np.ndarray:
    S = torus_embedding()
    return np.array([S.position(t) for t in periodic_grid(grid)])


def nijenhuis_witness_block(tol: float = 1e-6, n_standard: int = 100) -> Check:
    """Non-integrability witnesses for the torus structure and a control for the standard one.

    Three independent routes: the exact tensor from dJ, central differences of
    J, and the (0,2) part of d(alpha_1), which equals alpha_1(N)/4 for a
    (1,0)-form.
    """
    C = torus_coframe()
    p = TORUS_WITNESS_POINT
    N = nijenhuis_tensor(C, p)
    exact = max_nijenhuis_norm(N)
    fd = max_nijenhuis_norm(nijenhuis_fd(lambda x: j_at(C, x).J, p))
    rel_fd = abs(exact - fd) / fd
    rel_oracle = abs(exact - TORUS_NIJENHUIS_ORACLE) / TORUS_NIJENHUIS_ORACLE

    alpha1 = C.forms[0]
    abar = split_d(C, alpha1, p, bidegree=(1, 0)).abar
    a1 = alpha1.at(p)
    a_vec = a1.components()
    consistency = 0.0
    for a in range(4):
        for b in range(a + 1, 4):
            lhs = abar[(a, b)]
            rhs = 0.25 * (a_vec @ N[:, a, b])
            consistency = max(consistency, abs(lhs - rhs))

    std = Coframe.standard(2)
    std_norms = [max_nijenhuis_norm(nijenhuis_tensor(std, q)) for q in halton_box(n_standard, 4)]
    rows = [{"point": p, "coframe": "torus", "nijenhuis_max_norm": exact, "fd_max_norm": fd,
             "abar_alpha1_norm": abar.norm(), "quarter_alpha_N_defect": consistency}]
    ok = (exact > 0 and rel_oracle <= tol and rel_fd <= tol and abar.norm() > 0 and consistency <= 1e-10
          and max(std_norms) <= 1e-12)
    return Check(
        "nijenhuis", "pass" if ok else "fail",
        inputs={"point": p, "oracle": TORUS_NIJENHUIS_ORACLE, "tol": tol, "standard_points": n_standard},
        summary={
            "torus_max_norm": exact, "fd_max_norm": fd, "rel_error_vs_oracle": rel_oracle,
            "rel_error_exact_vs_fd": rel_fd, "abar_alpha1_norm": abar.norm(),
            "abar_consistency_defect": consistency, "standard_max_norm": max(std_norms),
            "note": "non-integrability witnessed at the point; no integrability verdict is issued",
        },
        rows=rows,
    )


def nijenhuis_sweep_block(C: Coframe, points: np.ndarray, tol: float = 1e-6, name: str = "nijenhuis") -> Check:
    """max |N(e_a, e_b)| at each point, with self-consistency checks.

    The verdict is about the computation, not about integrability: it passes
    when the exact tensor is antisymmetric, satisfies N(Je_a, e_b) = -J N(e_a, e_b)
    and agrees with the central-difference tensor to ``tol`` relative.
    """
    rows, norms, worst = [], [], 0.0
    for p in points:
        J = j_at(C, p).J
        N = nijenhuis_tensor(C, p)
        fd = nijenhuis_fd(lambda x: j_at(C, x).J, p)
        scale = max(1.0, float(np.abs(N).max()))
        anti = float(np.abs(N + np.transpose(N, (0, 2, 1))).max()) / scale
        # N(J e_a, e_b) = sum_c J_ca N(e_c, e_b)
        NJ = np.einsum("icb,ca->iab", N, J)
        jlin = float(np.abs(NJ + np.einsum("ij,jab->iab", J, N)).max()) / scale
        fd_err = float(np.abs(N - fd).max()) / scale
        worst = max(worst, anti, jlin, fd_err)
        norm = max_nijenhuis_norm(N)
        norms.append(norm)
        rows.append({"point": p, "max_norm": norm, "antisymmetry": anti, "j_identity": jlin, "fd_error": fd_err,
                     "witnessed": norm > 1e-8})
    return Check(
        name, "pass" if worst <= tol else "fail",
        inputs={"points": len(points), "coframe": C.name, "tol": tol},
        summary={"max_norm": stats(norms), "witness_count": sum(r["witnessed"] for r in rows),
                 "worst_consistency_defect": worst,
                 "note": "nonzero norm witnesses non-integrability; zero norms do not certify integrability"},
        rows=rows,
    )


def pullback_block(grid: int = 16, tol: float = 1e-10) -> Check:
    """Pullbacks of alpha_1, alpha_2 along the torus are multiples of du + i dv."""
    C, S = torus_coframe(), torus_embedding()
    rows, defects, oracle = [], [], []
    for t in periodic_grid(grid):
        x = S.position(t)
        row = {"params": t}
        for i, form in enumerate(C.forms):
            pb = pullback(form.at(x), S, t)
            cu, cv = pb[(0,)], pb[(1,)]
            defect = abs(cv - 1j * cu) / max(abs(cu), abs(cv))
            defects.append(defect)
            row[f"alpha{i + 1}"] = cu
            row[f"defect{i + 1}"] = defect
        u, v = t
        want = (1j * np.exp(1j * u), np.exp(1j * v))
        oracle.append(max(abs(row["alpha1"] - want[0]), abs(row["alpha2"] - want[1])))
        rows.append(row)
    worst = max(defects)
    return Check(
        "pullback", "pass" if worst <= tol and max(oracle) <= tol else "fail",
        inputs={"grid": grid, "tol": tol},
        summary={"proportionality_defect": stats(defects), "hand_oracle_error": max(oracle)},
        rows=rows,
    )


def structure_block(C: Coframe, points: np.ndarray, tol: float = 1e-10, name: str = "structure",
                    seed: int = 0) -> Check:
    """J real, J^2 = -I and alpha_i(Jv) = i alpha_i(v) at each point."""
    rng = np.random.default_rng(seed)
    rows, worst = [], 0.0
    for p in points:
        acs = j_at(C, p)
        eig = acs.eigen_defect(rng.standard_normal((4, C.dim)))
        row = {"point": p, "imag": acs.imag_defect, "square": acs.square_defect(), "eigen": eig,
               "cond": acs.cond}
        worst = max(worst, acs.imag_defect, row["square"], eig)
        rows.append(row)
    return Check(
        name, "pass" if worst <= tol else "fail",
        inputs={"points": len(points), "coframe": C.name, "tol": tol, "seed": seed},
        summary={k: stats([r[k] for r in rows]) for k in ("imag", "square", "eigen", "cond")},
        rows=rows,
    )


def _certificate_rows(cert) -> list:
    r = cert.report
    grid = periodic_grid(r.grid)
    return [{"params": t, "margin": m, "invariance": i} for t, m, i in zip(grid, r.margins, r.invariance)]


def certificate_block(C: Coframe, S: ParamSurface, omega: FormField, theta: Optional[FormField] = None,
                      N: int = 32, name: str = "certificate") -> Check:
    """Non-tameability certificate; the check passes when taming is falsified."""
    cert = non_tameability_certificate(C, S, omega, theta, N=N)
    verdict = {"emitted": "pass", "refused": "refused", "not-falsified": "fail"}[cert.status]
    summary = {"status": cert.status}
    summary.update({k: v for k, v in cert.as_dict().items() if k not in ("status", "clauses", "text")})
    return Check(name, verdict, inputs={"coframe": C.name, "surface": S.name, "grid": N,
                                        "primitive": theta is not None},
                 summary=summary, rows=_certificate_rows(cert),
                 certificate={"status": cert.status, "clauses": cert.clauses, "text": cert.text})


def control_certificate_block(N: int = 32) -> Check:
    """The standard pair: the torus is not pseudo-holomorphic, so the certificate must be refused."""
    cert = non_tameability_certificate(Coframe.standard(2), torus_embedding(), standard_omega(), standard_theta(),
                                       N=N)
    r = cert.report
    ok = cert.status == "refused" and r.margin_min >= 0.99
    return Check(
        "certificate_control", "pass" if ok else "fail",
        inputs={"coframe": "standard", "surface": "torus", "grid": N, "expect": "refused, margin >= 0.99"},
        summary={"status": cert.status, "margin_min": r.margin_min, "margin_max": r.margin_max,
                 "invariance_max": r.invariance_max},
        rows=_certificate_rows(cert),
        certificate={"status": cert.status, "clauses": cert.clauses, "text": cert.text},
    )


def quaternion_block(grid: int = 16, tol: float = 1e-10) -> Check:
    """W = A J2 A^-1 V along the torus for the torus structure and for the standard one.

    Tangency of W is reported only; the verdict covers conjugacy and W != 0.
    """
    S = torus_embedding()
    rows, summary, ok = [], {}, True
    for C in (torus_coframe(), Coframe.standard(2)):
        exp = quaternion_frame_experiment(C, S, grid=grid)
        key = C.name
        summary[key] = {"min_W_norm": exp.min_W_norm, "max_conjugacy_defect": exp.max_conjugacy_defect,
                        "max_tangency_defect": exp.max_tangency_defect, "skipped": len(exp.skipped),
                        "continuity": exp.continuity()}
        ok &= exp.max_conjugacy_defect <= tol and exp.min_W_norm > 0
        rows += [{"coframe": key, "params": s.params, "W": s.W, "W_norm": s.W_norm,
                  "conjugacy": s.conjugacy_defect, "tangency": s.tangency_defect} for s in exp.samples]
    summary["reference_J"] = "J1 (standard structure of R^4 as displayed)"
    summary["standard_equals_J1"] = bool(np.allclose(j_at(Coframe.standard(2), np.zeros(4)).J, J1))
    return Check("quaternion_frame", "pass" if ok else "fail", inputs={"grid": grid, "tol": tol},
                 summary=summary, rows=rows)


def stokes_block(theta: FormField, S: ParamSurface, N: int = 32, tol: float = 1e-8) -> Check:
    rep = stokes_witness(theta, S, N)
    return Check("stokes", "pass" if rep.passed(tol) else "fail", inputs={"grid": N, "tol": tol},
                 summary={"integral": rep.integral, "scale": rep.scale, "relative": rep.relative,
                          "quadrature_error_estimate": rep.error_estimate})


# -- the general structure on R^4n -------------------------------------------------

def jlambda_test_specs() -> dict:
    """Registered TauSpecs: identity, a constant generic one and a periodic one, for n = 1 and 2."""
    return {
        "identity_n1": TauSpec.identity(1),
        "constant_n1": TauSpec(1, [["1"]], [["0.3+0.1*I"]]),
        "periodic_n1": TauSpec(1, [["1"]], [["0.2*exp(I*u1)"]]),
        "identity_n2": TauSpec.identity(2),
        "constant_n2": TauSpec(2, [["1", "0.2"], ["0.1*I", "1"]], [["0.3+0.1*I", "0"], ["0", "0.2"]]),
        "periodic_n2": TauSpec(2, [["1", "0"], ["0", "1"]],
                               [["0.2*exp(I*u1)", "0.1*sin(v2)"], ["0", "0.15*cos(u2 + v1)"]]),
    }


def jlambda_blocks(t: TauSpec, label: str = "jlambda", grid: Optional[int] = None, tol: float = 1e-9,
                   n_structure: int = 100, seed: int = 0) -> list:
    """Pullback identity, structure sanity and tangent invariance for one TauSpec."""
    C = build_j_lambda(t)
    if grid is None:
        grid = 16 if t.n == 1 else 4
    # shifted off the quarter-turn angles, where trigonometric values are exact
    g = periodic_grid(grid, 2 * t.n) + GRID_PHASE
    errs = jlambda_pullback_errors(t, C, g)
    worst = max(errs["alpha"], errs["beta"])
    pull = Check(f"{label}:pullback", "pass" if worst <= tol else "fail",
                 inputs={"tau": t.to_dict(), "grid": grid, "phase": GRID_PHASE, "samples": len(g), "tol": tol},
                 summary={"alpha_max_error": errs["alpha"], "beta_max_error": errs["beta"],
                          "domain": "all z_k, w_k nonzero (local coframe)"})

    pts = near_torus_points(n_structure, t.n, seed=seed)
    struct = structure_block(C, pts, 1e-10, name=f"{label}:structure", seed=seed)

    # tangent planes of each circle-pair factor of the product torus are J-invariant
    S = product_torus(t.n)
    inv = []
    for ang in g:
        x = S.position(ang)
        J = j_at(C, x).J
        T = S.jacobian(ang)
        Q, _ = np.linalg.qr(T)
        inv.append(float(np.linalg.norm(J @ Q - Q @ (Q.T @ J @ Q), 2) / np.linalg.norm(J, 2)))
    tang = Check(f"{label}:tangent_invariance", "pass" if max(inv) <= tol else "fail",
                 inputs={"grid": grid, "tol": tol}, summary={"invariance_defect": stats(inv)})
    return [pull, struct, tang]


# -- octonions -----------------------------------------------------------------------

def octonion_blocks(seed: int = 0, n_pairs: int = 1000, n_sphere: int = 500, tol: float = 1e-12) -> list:
    rng = np.random.default_rng(seed)
    out = []

    # multiplication table audit
    norm_err = alt_err = 0.0
    for _ in range(n_pairs):
        a, b = rng.standard_normal(8), rng.standard_normal(8)
        ab = octonion_mul(a, b)
        s = np.linalg.norm(a) * np.linalg.norm(b)
        norm_err = max(norm_err, abs(np.linalg.norm(ab) - s) / s)
        scale = np.linalg.norm(a) ** 2 * np.linalg.norm(b)
        left = np.linalg.norm(octonion_mul(a, ab) - octonion_mul(octonion_mul(a, a), b)) / scale
        right = np.linalg.norm(octonion_mul(ab, b) - octonion_mul(a, octonion_mul(b, b))) / (
            np.linalg.norm(a) * np.linalg.norm(b) ** 2)
        alt_err = max(alt_err, left, right)
    e = np.eye(8)
    assoc = np.linalg.norm(octonion_mul(octonion_mul(e[1], e[2]), e[4]) - octonion_mul(e[1], octonion_mul(e[2], e[4])))
    out.append(Check("octonion:table", "pass" if max(norm_err, alt_err) <= tol and assoc > 0 else "fail",
                     inputs={"pairs": n_pairs, "seed": seed, "tol": tol},
                     summary={"norm_multiplicativity": norm_err, "alternativity": alt_err,
                              "associator_e1_e2_e4": assoc}))

    # S^6 structure J_p v = p v
    sq = orth = 0.0
    for _ in range(n_pairs):
        p = rng.standard_normal(7)
        p /= np.linalg.norm(p)
        v = rng.standard_normal(7)
        v -= (v @ p) * p
        p8, v8 = np.concatenate([[0], p]), np.concatenate([[0], v])
        Jv = s6_acs(p8, v8)
        sq = max(sq, np.linalg.norm(s6_acs(p8, Jv) + v8) / np.linalg.norm(v))
        orth = max(orth, (abs(Jv[0]) + abs(Jv[1:] @ p)) / np.linalg.norm(v))
    out.append(Check("octonion:s6_structure", "pass" if max(sq, orth) <= tol else "fail",
                     inputs={"pairs": n_pairs, "seed": seed, "tol": tol},
                     summary={"square_defect": sq, "orthogonality_defect": orth}))

    cp1 = cp1_in_s6(n_sphere)
    control = cp1_in_s6(n_sphere, plane=(1, 2, 4))
    out.append(Check("octonion:cp1", "pass" if cp1.max_defect <= tol else "fail",
                     inputs={"samples": n_sphere, "plane": [1, 2, 3], "control_plane": [1, 2, 4], "tol": tol},
                     summary={"invariance_defect": stats(cp1.defects), "control_min_defect": float(control.defects.min())},
                     rows=[{"point": p, "defect": dd} for p, dd in zip(cp1.points, cp1.defects)]))

    st = stereographic_pushforward(4)
    sq_push = 0.0
    for _ in range(n_pairs):
        q = rng.standard_normal(6)
        q *= 3 * rng.uniform() ** (1 / 6) / np.linalg.norm(q)
        J = st.J(q)
        sq_push = max(sq_push, float(np.abs(J @ J + np.eye(6)).max()))
    pushed = st.surface_defects(N=n_sphere)
    q0 = np.array([0.3, -0.2, 0.5, 0.1, 0.4, -0.6])
    nij = max_nijenhuis_norm(nijenhuis_fd(st.J, q0))
    ok = sq_push <= 1e-10 and pushed.max() <= 1e-9 and nij > 1e-6
    out.append(Check("octonion:pushforward", "pass" if ok else "fail",
                     inputs={"pole": "e4", "ball_radius": 3, "samples": n_sphere, "nijenhuis_point": q0},
                     summary={"square_defect": sq_push, "pushed_invariance_defect": stats(pushed),
                              "nijenhuis_max_norm_fd": nij}))
    return out
