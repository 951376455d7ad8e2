from __future__ import annotations

import pytest
from hypothesis import given, settings, strategies as st

from qma.coeff import cyclo
from qma.expr import (
    Add, ExpressionError, Gen, Mul, Num, Param, Pow, Short, Sym,
    parse_element, parse_expression, to_text,
)
from qma.qalgebra import format_element, single_parameter
from qma.qdet import A, quantum_determinant

P2 = single_parameter(2)
PZ = single_parameter(2, cyclo(3, 1))

atoms = st.one_of(
    st.integers(0, 5).map(Num),
    st.sampled_from([Sym("q"), Sym("lambda")]),
    st.sampled_from([Param(2, 1), Param(1, 2)]),
    st.sampled_from([Gen(i, j) for i in (1, 2) for j in (1, 2)]),
    st.sampled_from([Short("D"), Short("A", (1, 1)), Short("A", (2, 1)), Short("Dt", (1,))]),
)


def _extend(children):
    return st.one_of(
        st.tuples(children, st.integers(0, 3)).map(lambda t: Pow(*t)),
        st.lists(children, min_size=2, max_size=3).map(lambda fs: Mul(tuple(fs))),
        st.lists(st.tuples(st.sampled_from([1, -1]), children), min_size=2, max_size=3)
        .map(lambda ts: Add(tuple(ts))),
    )


trees = st.recursive(atoms, _extend, max_leaves=6)


@settings(max_examples=80, deadline=None)
@given(trees)
def test_print_then_parse_preserves_value(node):
    from qma.expr import evaluate

    text = to_text(node)
    assert evaluate(parse_expression(text), P2) == evaluate(node, P2)
    assert to_text(parse_expression(text)) == text


def test_reference_examples():
    D = quantum_determinant(P2)
    assert parse_element("x[1,1]*x[2,2] - q*x[1,2]*x[2,1]", P2) == D
    rest = parse_element("D - x[1,1]*A(1,1)", P2)
    assert rest == (P2.x(1, 2) * P2.x(2, 1)).scale(-P2.q)
    assert format_element(rest) == "-q*x[1,2]*x[2,1]"
    assert parse_element("x[1,1]^0", P2) == P2.one()
    assert parse_element("A(2,2)", P2) == A(P2, 2, 2)


def test_format_element_reparses():
    for text in ["D", "x[1,2]*x[1,1]", "(x[1,1] + q)^3", "lambda*x[2,1]^2 - 7"]:
        a = parse_element(text, P2)
        assert parse_element(format_element(a), P2) == a


def test_negative_powers_of_scalars():
    assert parse_element("q^-2", P2) == parse_element("lambda", P2)
    assert parse_element("q^-1*q", P2) == P2.one()
    with pytest.raises(ExpressionError):
        parse_element("x[1,1]^-1", P2)


def test_central_power_shorthand_and_zeta():
    assert parse_element("Z[1,2]", PZ) == PZ.x(1, 2) ** 3
    assert parse_element("zeta^3", PZ) == PZ.one()
    with pytest.raises(ExpressionError):
        parse_element("Z[1,1]", P2)


@pytest.mark.parametrize("text,pos", [
    ("x[1,1] + * 2", 9),
    ("x[1,1", 5),
    ("x[1 1]", 4),
    ("3 $ 4", 2),
    ("(x[1,1]", 7),
    ("x[1,1])", 6),
])
def test_error_positions(text, pos):
    with pytest.raises(ExpressionError) as err:
        parse_expression(text)
    assert err.value.position == pos


def test_out_of_range_generator():
    with pytest.raises(ExpressionError):
        parse_element("x[3,1]", P2)
    with pytest.raises(ExpressionError):
        parse_element("p[1,3]", P2)
