from itertools import combinations

import numpy as np
import pytest

from almostcomplex.acs import (
    Coframe, coframe_rows_from_j, dbar_form, dbar_scalar, dj_at, invariance_defect, j_at,
    max_nijenhuis_norm, nijenhuis, nijenhuis_fd, nijenhuis_tensor, partial_scalar, split_d,
    type_project, bidegree_parts,
)
from almostcomplex.constructions import torus_coframe, torus_f
from almostcomplex.errors import DegenerateCoframeError
from almostcomplex.exterior import AltTensor, FormField, d, wedge
from almostcomplex.jet import ScalarField
from almostcomplex.sampling import random_box

from helpers import bracket_nijenhuis, corpus, standard_J, torus_J

STD = Coframe.standard(2)
TORUS = torus_coframe()
WITNESS = np.array([1.0, 0.0, 1.0, 0.0])
# frozen from the bracket oracle in helpers (finite differences of the hand-built J)
TORUS_N_MAX = 2.0
DZ1 = AltTensor.one_form([1, 1j, 0, 0])
DZ2 = AltTensor.one_form([0, 0, 1, 1j])
EXPRS = corpus(40, seed=21, max_depth=3)


def skewed_coframe():
    """alpha' = G alpha with an invertible, point-dependent complex G."""
    a1, a2 = TORUS.forms
    b1 = a1 * "2 + I*x1" + a2 * "x2"
    b2 = a1 * 0.5 + a2 * (1 - 1j)
    return Coframe([b1, b2], name="skewed")


# -- j_at ----------------------------------------------------------------------------

def test_standard_coframe_gives_standard_j():
    J = j_at(STD, np.zeros(4)).J
    assert np.array_equal(J, standard_J(2))
    e = np.eye(4)
    assert np.allclose(J @ e[0], e[1], atol=0) and np.allclose(J @ e[2], e[3], atol=0)


def test_torus_coframe_at_origin_is_standard():
    assert np.allclose(j_at(TORUS, np.zeros(4)).J, standard_J(2), atol=1e-15)


def test_torus_eigen_relation_at_witness():
    acs = j_at(TORUS, WITNESS)
    rng = np.random.default_rng(0)
    assert acs.eigen_defect(rng.standard_normal((20, 4))) <= 1e-10


def test_torus_j_matches_hand_built_oracle():
    for p in random_box(200, 4, seed=1):
        assert np.allclose(j_at(TORUS, p).J, torus_J(p), atol=1e-10)


@pytest.mark.parametrize("C", [STD, TORUS, skewed_coframe()], ids=["standard", "torus", "skewed"])
def test_structure_invariants_at_many_points(C):
    rng = np.random.default_rng(2)
    for p in random_box(1000, 4, half_width=1.0, seed=3):
        acs = j_at(C, p)
        assert acs.imag_defect <= 1e-10
        assert acs.square_defect() <= 1e-10
        assert acs.eigen_defect(rng.standard_normal((2, 4))) <= 1e-10


def test_coframe_independence():
    C2 = skewed_coframe()
    for p in random_box(200, 4, half_width=1.0, seed=4):
        assert np.allclose(j_at(C2, p).J, j_at(TORUS, p).J, atol=1e-10)


def test_degenerate_coframe_raises():
    # alpha_2 = alpha_1 never spans
    C = Coframe([TORUS.forms[0], TORUS.forms[0]])
    with pytest.raises(DegenerateCoframeError) as info:
        j_at(C, WITNESS)
    assert info.value.point is not None
    # a real coframe member coincides with its conjugate
    C = Coframe.from_rows(4, [{"dz": ["1", "0"], "dzbar": ["1", "0"]}, {"dz": ["0", "1"], "dzbar": ["0", "0"]}])
    with pytest.raises(DegenerateCoframeError):
        j_at(C, np.zeros(4))


def test_coframe_shape_validation():
    with pytest.raises(ValueError):
        Coframe([TORUS.forms[0]])
    with pytest.raises(ValueError):
        Coframe([])


def test_coframe_rows_from_j_round_trip():
    for p in random_box(20, 4, seed=5):
        J = torus_J(p)
        rows = coframe_rows_from_j(J)
        assert np.allclose(rows @ J, 1j * rows, atol=1e-10)
    with pytest.raises(ValueError):
        coframe_rows_from_j(np.eye(4))


# -- dj_at -------------------------------------------------------------------------

def test_constant_coframe_has_zero_derivative():
    assert np.array_equal(dj_at(STD, [0.3, 0.1, -0.2, 0.5]), np.zeros((4, 4, 4)))


def test_dj_matches_finite_differences():
    h = 1e-5
    for p in random_box(50, 4, half_width=1.5, seed=6):
        dJ = dj_at(TORUS, p)
        for k in range(4):
            e = np.zeros(4)
            e[k] = h
            fd = (j_at(TORUS, p + e).J - j_at(TORUS, p - e).J) / (2 * h)
            assert np.abs(fd - dJ[k]).max() <= 1e-6


def test_derivative_of_j_squared_vanishes():
    for p in random_box(100, 4, seed=7):
        J = j_at(TORUS, p).J
        for dJk in dj_at(TORUS, p):
            assert np.abs(dJk @ J + J @ dJk).max() <= 1e-10 * max(1.0, np.abs(dJk).max())


# -- nijenhuis --------------------------------------------------------------------

def test_constant_coframe_is_integrable():
    C = Coframe.from_rows(4, [{"dz": ["1", "0.3"], "dzbar": ["0.2*I", "0"]}, {"dz": ["0", "1"], "dzbar": ["0.1", "0"]}])
    assert np.array_equal(nijenhuis_tensor(C, [0.4, -1, 2, 0.5]), np.zeros((4, 4, 4)))
    assert np.array_equal(nijenhuis_tensor(STD, np.ones(4)), np.zeros((4, 4, 4)))


def test_torus_nijenhuis_matches_bracket_oracle():
    N = nijenhuis_tensor(TORUS, WITNESS)
    for a in range(4):
        for b in range(4):
            oracle = bracket_nijenhuis(torus_J, WITNESS, a, b)
            assert np.allclose(N[:, a, b], oracle, atol=1e-6)
    assert max_nijenhuis_norm(N) == pytest.approx(TORUS_N_MAX, abs=1e-9)


def test_nijenhuis_value_object():
    v = nijenhuis(TORUS, WITNESS, 2, 2)
    assert np.array_equal(v.vector, np.zeros(4)) and v.norm == 0
    w = nijenhuis(TORUS, WITNESS, 0, 3)
    assert (w.a, w.b) == (0, 3)


def test_nijenhuis_algebraic_identities():
    for p in random_box(100, 4, seed=8):
        N = nijenhuis_tensor(TORUS, p)
        J = j_at(TORUS, p).J
        scale = max(1.0, np.abs(N).max())
        assert np.abs(N + np.transpose(N, (0, 2, 1))).max() <= 1e-12 * scale
        # N(J e_a, e_b) = -J N(e_a, e_b), using bilinearity of the tensor
        NJ = np.einsum("iab,ac->icb", N, J)
        assert np.abs(NJ + np.einsum("ij,jab->iab", J, N)).max() <= 1e-9 * scale


def test_nijenhuis_fd_agrees_with_exact_path():
    for p in random_box(10, 4, seed=9):
        fd = nijenhuis_fd(lambda q: j_at(TORUS, q).J, p)
        assert np.allclose(fd, nijenhuis_tensor(TORUS, p), atol=1e-6)


# -- type projection ---------------------------------------------------------------

def test_type_project_dz_dzbar():
    a = wedge(DZ1, DZ1.conj())
    p = np.zeros(4)
    assert type_project(STD, p, a, (1, 1)).allclose(a, 1e-15)
    assert type_project(STD, p, a, (2, 0)).norm() <= 1e-15
    assert type_project(STD, p, a, (0, 2)).norm() <= 1e-15


def test_type_project_rejects_bad_bidegree():
    with pytest.raises(ValueError):
        type_project(STD, np.zeros(4), wedge(DZ1, DZ2), (1, 0))


def test_bidegree_parts_reconstruct():
    rng = np.random.default_rng(10)
    for p in random_box(30, 4, seed=11):
        for deg in (1, 2, 3):
            a = AltTensor(4, deg, {K: complex(*rng.standard_normal(2)) for K in combinations(range(4), deg)})
            parts = bidegree_parts(TORUS, p, a)
            total = AltTensor(4, deg)
            for v in parts.values():
                total = total + v
            assert total.allclose(a, 1e-10)


def test_one_form_projection_two_ways():
    rng = np.random.default_rng(12)
    for p in random_box(50, 4, seed=13):
        J = j_at(TORUS, p).J
        beta = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        # (J^* beta)(v) = beta(J v)
        direct = 0.5 * (beta - 1j * beta @ J)
        basis = type_project(TORUS, p, AltTensor.one_form(beta), (1, 0)).components()
        assert np.allclose(direct, basis, atol=1e-10)


def test_zero_two_part_of_df_wedge_dfbar():
    rng = np.random.default_rng(14)
    for src in EXPRS[:20]:
        f = ScalarField.from_expr(src, 4)
        p = rng.uniform(-1, 1, 4)
        g = f.jet(p, 1).grad
        df = AltTensor.one_form(g)
        lhs = type_project(TORUS, p, wedge(df, df.conj()), (0, 2))
        rhs = wedge(dbar_scalar(TORUS, f, p), partial_scalar(TORUS, f, p).conj())
        assert lhs.allclose(rhs, 1e-10 * max(1.0, np.linalg.norm(g) ** 2))


# -- split_d -----------------------------------------------------------------------

def test_split_d_holomorphic_coefficient_standard():
    F = FormField.from_complex(4, ["z1*z2^2 + exp(z1)", "0"], ["0", "0"])
    s = split_d(STD, F, [0.3, -0.2, 0.7, 0.1])
    assert s.bidegree == (1, 0)
    assert s.a.norm() == 0 and s.abar.norm() <= 1e-15
    assert s.dbar.norm() <= 1e-14


def test_split_d_sums_to_d():
    for p in random_box(20, 4, half_width=1.0, seed=15):
        F = TORUS.forms[0]
        s = split_d(TORUS, F, p)
        total = s.abar + s.dbar + s.partial + s.a
        assert total.allclose(d(F).at(p), 1e-10)


def test_split_d_abar_witnesses_torus_non_integrability():
    s = split_d(TORUS, TORUS.forms[0], WITNESS, bidegree=(1, 0))
    assert s.abar.norm() > 1e-3
    # the (0,2) part of d(alpha) is (1/4) alpha(N) on the coordinate frame
    N = nijenhuis_tensor(TORUS, WITNESS)
    alpha = TORUS.forms[0].at(WITNESS).components()
    for a in range(4):
        for b in range(a + 1, 4):
            want = 0.25 * alpha @ N[:, a, b]
            assert s.abar[(a, b)] == pytest.approx(want, abs=1e-12)


def test_split_d_rejects_mixed_type():
    F = FormField.constant(DZ1 + DZ2.conj())
    with pytest.raises(ValueError):
        split_d(STD, F, np.zeros(4))
    with pytest.raises(ValueError):
        split_d(STD, FormField.constant(DZ1), np.zeros(4), bidegree=(0, 1))


def test_dbar_squared_tracks_nijenhuis():
    rng = np.random.default_rng(16)
    for src in ["z1*zbar2", "x1^2 + I*x3", "sin(x1)*z2"] + EXPRS[:5]:
        f = ScalarField.from_expr(src, 4)
        p = rng.uniform(-1, 1, 4)
        s = split_d(STD, dbar_form(STD, f), p, bidegree=(0, 1))
        assert s.dbar.norm() <= 1e-10 * max(1.0, s.partial.norm())
    f = ScalarField.from_expr("z1", 4)
    s = split_d(TORUS, dbar_form(TORUS, f), WITNESS, bidegree=(0, 1))
    assert s.dbar.norm() > 1e-3
    # d^2 f = 0 forces dbar^2 f = -Abar(partial f)
    partial_f = d(FormField.from_coefficients(4, 0, {(): f})) - dbar_form(TORUS, f)
    ps = split_d(TORUS, partial_f, WITNESS, bidegree=(1, 0))
    assert (s.dbar + ps.abar).norm() <= 1e-9


# -- dbar_scalar ---------------------------------------------------------------------

def test_dbar_scalar_examples():
    rng = np.random.default_rng(17)
    z1, zb1 = ScalarField.from_expr("z1", 4), ScalarField.from_expr("zbar1", 4)
    for p in rng.uniform(-2, 2, (10, 4)):
        assert dbar_scalar(STD, z1, p).norm() == 0
        assert dbar_scalar(STD, zb1, p).allclose(DZ1.conj(), 1e-15)


def test_dbar_of_holomorphic_polynomials_vanishes():
    rng = np.random.default_rng(18)
    for src in ["z1^3*z2 - 2*I*z2^2", "(z1 + z2)^4", "exp(z1)*z2"]:
        f = ScalarField.from_expr(src, 4)
        for p in rng.uniform(-1, 1, (10, 4)):
            assert dbar_scalar(STD, f, p).norm() <= 1e-12 * max(1.0, np.abs(f.jet(p, 1).grad).max())


def test_dbar_scalar_nonzero_on_torus_zero_set():
    f = torus_f()
    for p in [WITNESS, np.array([np.cos(0.4), np.sin(0.4), np.cos(2.0), np.sin(2.0)])]:
        assert abs(f(p)) <= 1e-15
        assert dbar_scalar(TORUS, f, p).norm() > 0.1


def test_invariance_defect():
    J = standard_J(2)
    assert invariance_defect(J, np.eye(4)[:, :2]) == 0
    assert invariance_defect(J, np.eye(4)[:, [0, 2]]) == pytest.approx(1.0)
