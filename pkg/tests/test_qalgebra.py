from __future__ import annotations

import random

import pytest
from hypothesis import given, settings, strategies as st

from qma.coeff import ParameterAssignment, cyclo
from qma.qalgebra import (
    BiDegree,
    PresentationError,
    bidegree,
    build_presentation,
    commutator,
    cyclotomic_multiparameter,
    generic_multiparameter,
    named_subalgebra,
    presentation_from_spec,
    random_element,
    rewrite_word_naive,
    single_parameter,
    single_parameter_table_matches,
    specialize_element,
    specialize_presentation,
    twist_check,
)
from qma.qdet import quantum_determinant


@pytest.fixture(scope="module")
def M2():
    return generic_multiparameter(2)


@pytest.fixture(scope="module")
def S2():
    return single_parameter(2)


def test_generic_2x2_relations_match_hand_expansion(M2):
    lam, p = M2.lam, M2.p
    x = M2.x
    assert x(2, 1) * x(1, 2) == (x(1, 2) * x(2, 1)).scale(lam * p[2, 1] * p[2, 1])
    assert x(1, 2) * x(1, 1) == (x(1, 1) * x(1, 2)).scale(p[1, 2])
    expected = (x(1, 1) * x(2, 2)).scale(p[2, 1] * p[1, 2]) + (x(1, 2) * x(2, 1)).scale((lam - 1) * p[2, 1])
    assert x(2, 2) * x(1, 1) == expected


def test_subalgebra_closure():
    C = named_subalgebra("C")
    assert C.ngens == 6
    with pytest.raises(PresentationError, match="not straightening-closed"):
        generic_multiparameter(3, 3, [(1, 1), (2, 2)])


def test_antisymmetry_is_enforced():
    F = cyclo(5, 1).field
    with pytest.raises(PresentationError):
        build_presentation(2, 2, F.zeta(1), {(1, 2): F.zeta(1), (2, 1): F.zeta(1)})


def test_single_parameter_relations(S2):
    q = S2.q
    x = S2.x
    assert x(2, 2) * x(1, 1) == x(1, 1) * x(2, 2) - (x(1, 2) * x(2, 1)).scale(q - q.inverse())
    assert x(1, 2) * x(1, 1) == (x(1, 1) * x(1, 2)).scale(q.inverse())
    assert x(2, 1) * x(1, 2) == x(1, 2) * x(2, 1)


def test_single_parameter_rejects_q_squared_one():
    with pytest.raises(PresentationError):
        single_parameter(2, cyclo(4, 1))
    with pytest.raises(PresentationError):
        single_parameter(2, cyclo(2, 1))


@pytest.mark.parametrize("n", [2, 3])
def test_single_parameter_table_is_the_specialized_table(n):
    same, mismatches = single_parameter_table_matches(n)
    assert same, mismatches


def test_empty_word_and_small_products(S2):
    assert S2.normal_form([]) == S2.one()
    assert commutator(S2.x(1, 1), S2.x(1, 1)).is_zero()
    P = single_parameter(2, cyclo(3, 1))
    b, a = P.x(1, 2), P.x(1, 1)
    assert b ** 3 * a == a * b ** 3


@pytest.mark.parametrize("n", [2, 3])
def test_determinant_commutes_with_generators(n):
    P = single_parameter(n)
    D = quantum_determinant(P)
    assert all(commutator(D, g).is_zero() for g in P.gens())


def test_bidegree(M2):
    x = M2.x
    assert bidegree(M2, x(1, 2)) == BiDegree((1, 0), (0, 1))
    D = quantum_determinant(M2)
    assert bidegree(M2, D) == BiDegree((1, 1), (1, 1))
    assert bidegree(M2, x(1, 1) + x(1, 2)) == "inhomogeneous"


def test_twist_examples():
    r = twist_check(2, 9, 1, {(1, 2): 5})
    assert r["summary"] == "isomorphic: all 16 generator-pair products match"
    # p_ij = q for i > j: the twist is trivial and gives back O_q
    trivial = twist_check(2, 9, 1, {(1, 2): -1})
    assert trivial["isomorphic"]
    assert twist_check(3, 9, 2, {(1, 2): 3, (2, 3): 1})["isomorphic"]


def test_spec_loading():
    P = presentation_from_spec({"rows": 2, "mode": "cyclotomic", "level": 5, "lambda_exp": 1,
                                "p_exps": [[0, 2], [3, 0]]})
    assert P.p[1, 2] == cyclo(5, 2)
    with pytest.raises(PresentationError):
        presentation_from_spec({"rows": 2, "mode": "cyclotomic", "level": 5, "lambda_exp": 1,
                                "p_exps": [[0, 2], [2, 0]]})
    with pytest.raises(PresentationError):
        presentation_from_spec({"rows": 2, "mode": "weird"})


# ----------------------------------------------------------------------
# properties


@pytest.mark.parametrize("make", [lambda: generic_multiparameter(2), lambda: generic_multiparameter(3),
                                  lambda: single_parameter(3, cyclo(5, 1)),
                                  lambda: named_subalgebra("B3", cyclo(3, 1))])
def test_associativity_on_random_triples(make):
    P = make()
    rng = random.Random(7)
    for _ in range(200):
        a, b, c = (random_element(P, rng, terms=2, max_deg=2) for _ in range(3))
        assert (a * b) * c == a * (b * c)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.integers(1, 3), st.integers(1, 3)), max_size=8), st.integers(0, 10 ** 6))
def test_confluence_against_naive_rewriting(word, seed):
    P = generic_multiparameter(3)
    fast = P.normal_form(word)
    assert rewrite_word_naive(P, word, "leftmost") == fast
    assert rewrite_word_naive(P, word, "random", random.Random(seed)) == fast


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.integers(1, 2), st.integers(1, 2)), max_size=7))
def test_straightening_preserves_degrees(word):
    P = generic_multiparameter(2)
    el = P.normal_form(word)
    if word:
        rows = tuple(sum(1 for i, _ in word if i == r) for r in (1, 2))
        cols = tuple(sum(1 for _, j in word if j == c) for c in (1, 2))
        assert bidegree(P, el) == BiDegree(rows, cols)
    # normal form is idempotent: re-straightening the PBW words changes nothing
    again = P.zero()
    for mono, c in el.terms.items():
        again = again + P.normal_form([c] + list(P.word_of(mono)))
    assert again == el


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_specialization_commutes_with_products(seed):
    M = generic_multiparameter(2)
    a = ParameterAssignment(7, {"lambda": 3, "p12": 2})
    T = specialize_presentation(M, a)
    rng = random.Random(seed)
    u, v = random_element(M, rng), random_element(M, rng)
    assert specialize_element(u * v, T) == specialize_element(u, T) * specialize_element(v, T)
    assert T.same_as(cyclotomic_multiparameter(2, 2, 7, 3, {(1, 2): 2}))
