import numpy as np
import pytest

from almostcomplex.acs import Coframe
from almostcomplex.constructions import torus_coframe, torus_embedding
from almostcomplex.exterior import AltTensor, FormField, wedge
from almostcomplex.scenarios import standard_omega, standard_theta
from almostcomplex.surface import ParamSurface
from almostcomplex.tame import (
    integrate_2form, non_tameability_certificate, stokes_witness, taming_margin, verify_primitive,
)

from helpers import corpus

S = torus_embedding()
TORUS = torus_coframe()
STD = Coframe.standard(2)
OMEGA = standard_omega(4)
THETA = standard_theta(4)
RHO1 = FormField.one_form(4, ["-x2", "x1", "0", "0"])
RHO2 = FormField.one_form(4, ["0", "0", "-x4", "x3"])
DUDV = wedge(RHO1, RHO2)  # pulls back to du ^ dv on the torus
EXPRS = corpus(30, seed=31, max_depth=3)


# -- quadrature ------------------------------------------------------------------

def test_integral_of_area_form_is_four_pi_squared():
    q = integrate_2form(DUDV, S, 32)
    assert q.value == pytest.approx(4 * np.pi**2, abs=1e-10)
    assert q.error_estimate <= 1e-10


def test_integral_of_dz_dzbar_vanishes():
    dz = AltTensor.one_form([1, 1j, 0, 0])
    q = integrate_2form(FormField.constant(wedge(dz, dz.conj())), S)
    assert abs(q.value) <= 1e-15


def test_integral_of_exact_form_vanishes():
    dx12 = FormField.constant(AltTensor.basis(4, 0, 1))
    assert abs(integrate_2form(dx12, S).value) <= 1e-10


@pytest.mark.parametrize("omega", [DUDV, OMEGA, wedge(RHO1, FormField.one_form(4, ["sin(x3)", "0", "x1*x4", "0"]))])
def test_error_estimate_small(omega):
    assert integrate_2form(omega, S, 32).error_estimate <= 1e-10


def test_linearity_and_orientation():
    w2 = wedge(FormField.one_form(4, ["x3", "cos(x1)", "0", "x2"]), FormField.one_form(4, ["0", "x4", "1", "0"]))
    a, b = 1.5, -0.25j
    i1, i2 = integrate_2form(DUDV, S).value, integrate_2form(w2, S).value
    combo = integrate_2form(DUDV * a + w2 * b, S).value
    assert abs(combo - (a * i1 + b * i2)) <= 1e-10 * max(1.0, abs(combo))
    assert integrate_2form(DUDV, S.swapped()).value == -i1
    assert integrate_2form(w2, S.swapped()).value == -i2


def test_quadrature_preconditions():
    with pytest.raises(ValueError):
        integrate_2form(RHO1, S)
    with pytest.raises(ValueError):
        integrate_2form(DUDV, S, 4)
    strip = ParamSurface(4, lambda t: np.r_[t, 0, 0], lambda t: np.eye(4)[:, :2], periodic=(True, False))
    with pytest.raises(ValueError):
        integrate_2form(DUDV, strip)


# -- Stokes ---------------------------------------------------------------------------

@pytest.mark.parametrize("theta, tol", [
    (FormField.one_form(4, ["0", "x1", "0", "0"]), 1e-10),
    (FormField.one_form(4, ["0", "0", "sin(x1)", "0"]), 1e-8),
])
def test_stokes_examples(theta, tol):
    assert stokes_witness(theta, S).relative <= tol


def test_stokes_random_primitives():
    rng = np.random.default_rng(0)
    for _ in range(10):
        comps = [EXPRS[int(k)] for k in rng.integers(len(EXPRS), size=4)]
        rep = stokes_witness(FormField.one_form(4, comps), S)
        assert rep.passed(1e-8), rep


def test_verify_primitive():
    assert verify_primitive(THETA, OMEGA) <= 1e-12
    assert verify_primitive(RHO1, OMEGA) > 0.1


# -- taming margins -------------------------------------------------------------------

def test_torus_margin_vanishes():
    rep = taming_margin(OMEGA, TORUS, S, 16)
    assert max(abs(rep.margin_min), abs(rep.margin_max)) <= 1e-12
    assert rep.verdict == "omega does not tame J along S"
    assert rep.invariance_max <= 1e-12


def test_torus_margin_hand_value_at_origin():
    # at (u, v) = (0, 0): d_u = (0,1,0,0) and J d_u = d_v = (0,0,0,1); omega(d_u, d_v) = 0
    rep = taming_margin(OMEGA, TORUS, S, 8)
    assert abs(rep.margins[0]) <= 1e-15


def test_standard_structure_margin_is_one():
    # J d_u = (-1,0,0,0) at (0,0), so omega(d_u, J d_u) = 1; likewise for d_v
    rep = taming_margin(OMEGA, STD, S, 16)
    assert rep.margins[0] == pytest.approx(1.0, abs=1e-15)
    assert rep.margin_min == pytest.approx(1.0, abs=1e-12)
    assert rep.invariance_max > 1e-3


@pytest.mark.parametrize("c", [0.5, 3.0])
def test_margin_scales_linearly(c):
    for C in (TORUS, STD):
        base = taming_margin(OMEGA, C, S, 8).margins
        scaled = taming_margin(OMEGA * c, C, S, 8).margins
        assert np.allclose(scaled, c * base, atol=1e-12)
        assert np.array_equal(np.sign(np.round(scaled, 12)), np.sign(np.round(base, 12)))


def test_positive_margin_gives_positive_integral():
    # a non-closed form positive on the tangent planes of the pseudo-holomorphic torus
    rep = taming_margin(DUDV, TORUS, S, 16)
    assert rep.margin_min > 0.99 and rep.invariance_max <= 1e-12
    sign = rep.orientation[0]
    assert sign * integrate_2form(DUDV, S).value.real > 0


# -- certificates -----------------------------------------------------------------------

def test_certificate_emitted_for_torus():
    cert = non_tameability_certificate(TORUS, S, OMEGA, THETA)
    assert cert.status == "emitted"
    assert abs(cert.report.integral) <= 1e-10
    assert abs(cert.report.margin_min) <= 1e-12
    assert cert.text == ("integral over S of omega = 0 and margin = 0 identically: omega does not tame J "
                         "along S; any exact taming form is impossible by (a)+(b).")
    assert [c[:3] for c in cert.clauses] == ["(a)", "(b)", "(c)"]
    d = cert.as_dict()
    assert d["status"] == "emitted" and d["primitive_error"] <= 1e-12


def test_certificate_refused_for_standard_structure():
    cert = non_tameability_certificate(STD, S, OMEGA, THETA)
    assert cert.status == "refused"
    assert cert.report.invariance_max > 1e-3
    assert "pseudo-holomorphic" in cert.text


def test_certificate_without_primitive_has_margin_clause_only():
    cert = non_tameability_certificate(TORUS, S, OMEGA)
    assert cert.status == "emitted"
    assert not any(c.startswith("(a)") for c in cert.clauses)
    assert cert.text == "margin min <= 0: omega does not tame J along S."
    assert cert.report.integral is None


def test_certificate_refuses_wrong_primitive():
    cert = non_tameability_certificate(TORUS, S, OMEGA, RHO1)
    assert cert.status == "refused" and "d(theta)" in cert.text


def test_certificate_not_falsified_for_taming_form():
    cert = non_tameability_certificate(TORUS, S, DUDV)
    assert cert.status == "not-falsified"
