import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from almostcomplex.errors import EvaluationError, ParseError
from almostcomplex.expr import (
    BinOp, Call, Imag, Num, Pow, Var, ZVar, conj_expr, eval_jet, parse, pretty,
)
from almostcomplex.jet import ScalarField

from helpers import corpus, fd_grad

CORPUS = corpus(1000, seed=0)


def test_zbar_is_conj_of_z():
    rng = np.random.default_rng(1)
    a, b = parse("zbar1", 4), parse("conj(z1)", 4)
    for p in rng.uniform(-2, 2, (20, 4)):
        ja, jb = eval_jet(a, p), eval_jet(b, p)
        assert ja.value == jb.value
        assert np.array_equal(ja.grad, jb.grad)


def test_coordinate_convention():
    j = eval_jet(parse("z2", 4), [0.0, 0.0, 3.0, -5.0])
    assert j.value == 3 - 5j
    assert np.array_equal(j.grad, [0, 0, 1, 1j])


def test_alpha1_pattern_parses_and_evaluates():
    e = parse("z1 - I*z1*z2*zbar2", 4)
    assert isinstance(e, BinOp) and e.op == "-"
    assert eval_jet(e, [1, 0, 1, 0]).value == pytest.approx(1 - 1j, abs=1e-15)


def test_index_out_of_range():
    with pytest.raises(ParseError) as info:
        parse("x5", 4)
    assert info.value.position == 0
    with pytest.raises(ParseError):
        parse("z3 + 1", 4)
    with pytest.raises(ParseError):
        parse("x0", 4)


@pytest.mark.parametrize("source, position, expected", [
    ("x1 +", 4, {"number", "identifier", "'('", "'-'"}),
    ("x1 +* 2", 4, {"number", "identifier", "'('", "'-'"}),
    ("(x1", 3, {"')'"}),
    ("sin x1", 4, {"'('"}),
    ("x1 x2", 3, set()),
    ("2^x1", 2, {"integer"}),
])
def test_syntax_errors_report_offset(source, position, expected):
    with pytest.raises(ParseError) as info:
        parse(source, 4)
    assert info.value.position == position
    assert expected <= set(info.value.expected)


def test_unknown_function_and_characters():
    with pytest.raises(ParseError):
        parse("tan(x1)", 4)
    with pytest.raises(ParseError) as info:
        parse("x1 $ 2", 4)
    assert info.value.position == 3


def test_parse_rejects_odd_dimension():
    with pytest.raises(ValueError):
        parse("x1", 3)


def test_grammar_precedence():
    p = [2.0, 0, 0, 0]
    assert eval_jet(parse("1 + 2*3", 4), p).value == 7
    assert eval_jet(parse("2*x1^2", 4), p).value == 8
    assert eval_jet(parse("-x1^2", 4), p).value == -4
    assert eval_jet(parse("8/2/2", 4), p).value == 2
    assert eval_jet(parse("1 - 2 - 3", 4), p).value == -4
    assert eval_jet(parse("x1^-2", 4), p).value == 0.25
    assert eval_jet(parse("  1.5e1 +  .5 ", 4), p).value == 15.5


def test_aliases():
    e = parse("cos(u) + v", 2, aliases={"u": 1, "v": 2})
    assert eval_jet(e, [0.0, 2.0]).value == 3.0


def test_eval_abs2_example():
    j = eval_jet(parse("z1*zbar1", 4), [3, 4, 0, 0])
    assert j.value == 25
    assert np.allclose(j.grad, [6, 8, 0, 0], atol=0)
    assert np.allclose(j.hess, np.diag([2, 2, 0, 0]), atol=0)


def test_eval_exp_example():
    j = eval_jet(parse("exp(x1)", 4), np.zeros(4))
    assert (j.value, j.grad[0], j.hess[0, 0]) == (1, 1, 1)


def test_abs2_definition():
    rng = np.random.default_rng(2)
    a = parse("abs2(x1 + I*x2*x3)", 4)
    b = parse("(x1 + I*x2*x3) * conj(x1 + I*x2*x3)", 4)
    for p in rng.uniform(-2, 2, (20, 4)):
        ja, jb = eval_jet(a, p), eval_jet(b, p)
        assert ja.value == pytest.approx(jb.value, abs=1e-13)
        assert np.allclose(ja.grad, jb.grad, atol=1e-13)
        assert np.allclose(ja.hess, jb.hess, atol=1e-13)


def test_division_by_zero_names_subexpression():
    with pytest.raises(EvaluationError) as info:
        eval_jet(parse("1/(x1 - x2)", 4), [1, 1, 0, 0])
    assert "x1" in str(info.value.subexpr)


def test_zero_to_negative_power():
    with pytest.raises(EvaluationError):
        eval_jet(parse("x1^-1", 4), np.zeros(4))
    # a zero exponent is harmless
    assert eval_jet(parse("x1^0", 4), np.zeros(4)).value == 1


def test_pretty_round_trip_fixed_point():
    for src in CORPUS[:300]:
        once = pretty(parse(src, 4))
        assert pretty(parse(once, 4)) == once
        assert parse(once, 4) == parse(src, 4)


@pytest.mark.parametrize("src", ["z1 - I*z1*z2*zbar2", "abs2(z1) - 1", "-x1^2", "(-x1)^2", "-2^2",
                                 "re(exp(I*x1))", "x1^-2", "1e-3*x2"])
def test_pretty_handles_signs_and_powers(src):
    e = parse(src, 4)
    p = np.array([0.3, -0.7, 1.1, 0.2])
    assert eval_jet(parse(pretty(e), 4), p).value == eval_jet(e, p).value


def test_conj_commutes_with_evaluation():
    rng = np.random.default_rng(3)
    for src in CORPUS[:200]:
        e = parse(src, 4)
        p = rng.uniform(-1, 1, 4)
        ja, jc = eval_jet(e, p), eval_jet(conj_expr(e), p)
        assert jc.value == np.conj(ja.value)
        assert np.array_equal(jc.grad, ja.grad.conj())


def test_gradients_match_finite_differences_on_corpus():
    rng = np.random.default_rng(4)
    worst = 0.0
    for src in CORPUS:
        e = parse(src, 4)
        p = rng.uniform(-1, 1, 4)
        j = eval_jet(e, p, 1)
        fd = fd_grad(lambda q: eval_jet(e, q, 0).value, p)
        scale = max(1.0, abs(j.value), np.abs(j.grad).max())
        worst = max(worst, np.abs(fd - j.grad).max() / scale)
    assert worst <= 1e-6


def test_hessians_match_finite_differences_on_corpus():
    rng = np.random.default_rng(5)
    worst = 0.0
    for src in CORPUS[:500]:
        e = parse(src, 4)
        p = rng.uniform(-1, 1, 4)
        j = eval_jet(e, p, 2)
        assert np.array_equal(j.hess, j.hess.T)
        fd = fd_grad(lambda q: eval_jet(e, q, 1).grad, p)
        scale = max(1.0, np.abs(j.grad).max(), np.abs(j.hess).max())
        worst = max(worst, np.abs(fd - j.hess).max() / scale)
    assert worst <= 1e-4


def test_field_is_pure():
    f = ScalarField.from_expr("sin(x1)*z2", 4)
    p = np.array([0.1, 0.2, 0.3, 0.4])
    a, b = f.jet(p), f.jet(p)
    assert a.value == b.value and np.array_equal(a.hess, b.hess)


def test_ast_nodes_are_immutable():
    e = Pow(Var(1), 2)
    with pytest.raises(AttributeError):
        e.exponent = 3
    assert Call("conj", ZVar(1)) == Call("conj", ZVar(1))
    assert Num(1.0) != Imag()


@settings(max_examples=60, deadline=None)
@given(st.floats(-1e6, 1e6, allow_nan=False), st.floats(-3, 3), st.floats(-3, 3))
def test_numbers_round_trip(c, x, y):
    e = parse(f"{c!r}*x1 + {abs(c)!r}", 4)
    assert parse(pretty(e), 4) == e
    assert eval_jet(e, [x, y, 0, 0], 0).value == pytest.approx(c * x + abs(c), rel=1e-12, abs=1e-9)
