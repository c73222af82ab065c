import math
import operator

import numpy as np
import pytest
from hypothesis import given, strategies as st

from flatcyl.expr import (
    BinOp,
    EvaluationError,
    ExpressionSyntaxError,
    Neg,
    Num,
    Var,
    eval_expression,
    halton,
    parse_expression,
    validate_periodicity,
)


def ev(text, x=0.0, y=0.0):
    return eval_expression(parse_expression(text), x, y)


def test_precedence():
    assert ev("2 + 3 * 4") == 14


def test_sin_quarter_turn():
    assert abs(ev("sin(2*pi*x)", 0.25, 0.0) - 1.0) <= 1e-15


def test_exp_cos_minus_y_squared():
    # second calculator: plain math module
    expected = math.exp(math.cos(2 * math.pi * 0.0)) - 2.0 ** 2
    assert ev("exp(cos(2*pi*x)) - y^2", 0.0, 2.0) == pytest.approx(expected, abs=1e-12)
    assert expected == pytest.approx(-1.2817181715409549, abs=1e-15)


@pytest.mark.parametrize(
    "text, expected",
    [
        ("-2^2", -4.0),
        ("2^3^2", 512.0),
        ("2^-1", 0.5),
        ("(-2)^2", 4.0),
        ("--3", 3.0),
        ("+3 - -3", 6.0),
        ("8 / 4 / 2", 1.0),
        ("10 - 4 - 3", 3.0),
        ("1.5e1 + .5", 15.5),
        ("  log( exp( 2 ) )  ", 2.0),
        ("pi", math.pi),
    ],
)
def test_grammar(text, expected):
    assert ev(text) == pytest.approx(expected, rel=1e-15)


def test_power_binds_tighter_than_unary_minus():
    assert parse_expression("-x^2") == Neg(BinOp("^", Var("x"), Num(2.0)))


@pytest.mark.parametrize(
    "text, column",
    [("2 +", 4), ("2 $ 3", 3), ("foo(x)", 1), ("sin x", 5), ("(1 + 2", 7), ("1 2", 3), ("", 1)],
)
def test_syntax_errors_carry_column(text, column):
    with pytest.raises(ExpressionSyntaxError) as info:
        parse_expression(text)
    assert info.value.column == column


@pytest.mark.parametrize("text", ["log(0)", "log(-1)", "0^-1", "1/0", "exp(1000)", "(-8)^0.5", "1/(x - x)"])
def test_evaluation_errors(text):
    with pytest.raises(EvaluationError):
        ev(text, 0.3, 0.0)


def test_array_evaluation_matches_scalar():
    e = parse_expression("sin(2*pi*x) * exp(0.1*y) - x^2")
    X, Y = np.meshgrid(np.linspace(0, 1, 7), np.linspace(-2, 2, 5))
    arr = eval_expression(e, X, Y)
    assert arr.shape == X.shape
    for (j, i), val in np.ndenumerate(arr):
        assert val == pytest.approx(eval_expression(e, X[j, i], Y[j, i]), rel=1e-15, abs=1e-15)


def test_constant_expression_broadcasts_over_grid():
    X, Y = np.meshgrid(np.arange(3.0), np.arange(2.0))
    assert eval_expression(parse_expression("2"), X, Y).shape == (2, 3)


_ops = {"+": operator.add, "-": operator.sub, "*": operator.mul}
small = st.integers(min_value=-50, max_value=50)


@st.composite
def int_trees(draw, depth=3):
    if depth == 0 or draw(st.booleans()):
        n = draw(small)
        return str(n) if n >= 0 else f"({n})", n
    op = draw(st.sampled_from(sorted(_ops)))
    (lt, lv), (rt, rv) = draw(int_trees(depth - 1)), draw(int_trees(depth - 1))
    return f"({lt} {op} {rt})", _ops[op](lv, rv)


@given(int_trees())
def test_integer_arithmetic_matches_python(tree):
    text, value = tree
    assert ev(text) == value


@given(int_trees())
def test_source_round_trip(tree):
    e = parse_expression(tree[0])
    assert parse_expression(e.source()) == e


def test_evaluation_is_deterministic():
    e = parse_expression("exp(sin(3*x)) * log(2 + y^2)")
    assert eval_expression(e, 0.123, -4.5) == eval_expression(e, 0.123, -4.5)


# -- periodicity


@pytest.mark.parametrize(
    "text, periodic",
    [
        ("sin(2*pi*x)+y", True),
        ("x + y", False),
        ("cos(4*pi*x)*exp(y)", True),
        ("sin(pi*x)", False),
        ("y^2", True),
    ],
)
def test_validate_periodicity(text, periodic):
    assert validate_periodicity(parse_expression(text), 16, 1e-9) is periodic


def test_periodicity_spot_check_cos4pi():
    e = parse_expression("cos(4*pi*x)*exp(y)")
    for x in (0.0, 0.1, 0.37, 0.5):
        assert eval_expression(e, x, 0.3) == pytest.approx(eval_expression(e, x + 1, 0.3), rel=1e-12)
        assert eval_expression(e, x, 0.3) == pytest.approx(eval_expression(e, x + 0.5, 0.3), rel=1e-12)


def test_periodicity_needs_eight_samples():
    with pytest.raises(ValueError):
        validate_periodicity(parse_expression("x"), 4, 1e-9)


def test_periodicity_propagates_evaluation_errors():
    with pytest.raises(EvaluationError):
        validate_periodicity(parse_expression("log(y)"), 16, 1e-9)


def test_halton_base2_prefix():
    assert list(halton(4, 2)) == [0.5, 0.25, 0.75, 0.125]
    assert halton(3, 3) == pytest.approx([1 / 3, 2 / 3, 1 / 9])
