from __future__ import annotations

from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given, settings, strategies as st

from qma.coeff import (
    ParameterAssignment,
    cyclo,
    cyclotomic_field,
    laurent_ring,
    order_of,
    specialize,
)


def test_cyclo_basics():
    assert cyclo(1, 0) == 1
    assert cyclo(3, 1) + cyclo(3, 2) == -1
    assert cyclo(3, 4) == cyclo(3, 1)


def test_embedding_matches_minimal_polynomial():
    z = cyclo(6, 2)
    assert z * z + z + 1 == 0
    assert cyclo(3, 1).embed(6) == z


@pytest.mark.parametrize("value,order", [(cyclo(6, 2), 3), (cyclo(5, 0), 1), (-cyclo(5, 0), 2)])
def test_order_examples(value, order):
    assert order_of(value) == order


def test_order_of_zero_and_non_roots():
    F = cyclotomic_field(3)
    with pytest.raises(ValueError):
        order_of(F.zero)
    assert order_of(F(2)) == "infinite"


def test_order_formula_up_to_24():
    for L in range(2, 25):
        for k in range(1, L):
            assert order_of(cyclo(L, k)) == L // gcd(L, k)


def test_specialize_examples():
    R = laurent_ring(("q", "lambda"))
    q, lam = R.gen("q"), R.gen("lambda")
    a = ParameterAssignment(3, {"q": 1, "lambda": 1})
    assert specialize(q ** 3 - 1, a) == 0
    assert specialize(lam - 1, a) == cyclo(3, 1) - 1
    assert specialize(q - q.inverse(), a) == cyclo(3, 1) - cyclo(3, 2)


def test_specialize_needs_every_parameter():
    R = laurent_ring(("q", "lambda"))
    with pytest.raises(KeyError):
        specialize(R.gen("lambda"), ParameterAssignment(3, {"q": 1}))


def test_assignment_rejects_bad_parameters():
    with pytest.raises(ValueError):
        ParameterAssignment(4, {"lambda": 2})  # lambda^2 = 1
    with pytest.raises(ValueError):
        ParameterAssignment(5, {"p12": 1, "p21": 1})


def test_laurent_division_by_units_only():
    R = laurent_ring(("q",))
    q = R.gen("q")
    assert (q ** 2).inverse() * q ** 2 == 1
    assert not (q + 1).is_unit()
    with pytest.raises(Exception):
        (q + 1).inverse()


small = st.integers(-5, 5)


def cyclo_elements(level):
    F = cyclotomic_field(level)
    return st.lists(small, min_size=level, max_size=level).map(F.from_power_sums)


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_field_axioms(data):
    level = data.draw(st.sampled_from([3, 5, 7, 9, 12]))
    a, b, c = (data.draw(cyclo_elements(level)) for _ in range(3))
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a
    if not a.is_zero():
        assert a * a.inverse() == 1


laurent_terms = st.dictionaries(
    st.tuples(st.integers(-3, 3), st.integers(-3, 3)),
    st.fractions(min_value=-4, max_value=4, max_denominator=3), max_size=4)


@settings(max_examples=60, deadline=None)
@given(laurent_terms, laurent_terms, st.integers(0, 8), st.integers(1, 8))
def test_specialize_is_a_ring_map(t1, t2, kq, klam):
    R = laurent_ring(("q", "lambda"))
    s = sum((R.monomial({"q": e[0], "lambda": e[1]}, c) for e, c in t1.items()), R.zero)
    t = sum((R.monomial({"q": e[0], "lambda": e[1]}, c) for e, c in t2.items()), R.zero)
    a = ParameterAssignment(9, {"q": kq, "lambda": klam if (2 * klam) % 9 else 1})
    assert specialize(s * t, a) == specialize(s, a) * specialize(t, a)
    assert specialize(s + t, a) == specialize(s, a) + specialize(t, a)


def test_rational_coercion_is_exact():
    F = cyclotomic_field(5)
    assert F(Fraction(1, 3)) * 3 == 1
