from __future__ import annotations

import random

import pytest
from hypothesis import given, settings, strategies as st

from qma.coeff import cyclo
from qma.morph import (
    GroupWord,
    MorphismError,
    b2_psi,
    b3_phi,
    builtin,
    compose,
    diagonal_map_check,
    fixed_ideal_check,
    free_witness,
    is_graded,
    leading_form_check,
    make_endomorphism,
    parse_word,
    phi_map,
    psi_map,
    small_words,
    tau_map,
    verify_inverse,
    wild_sigma,
    word_action,
    WordActor,
)
from qma.qalgebra import generic_multiparameter, random_element, single_parameter
from qma.qdet import A, quantum_determinant

M = 3
P = single_parameter(2, cyclo(M, 1))


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from(["phi", "psi", "tau", "scalar"]))
def test_verified_maps_are_multiplicative(seed, name):
    f = builtin(name, 2, M, P)
    rng = random.Random(seed)
    a = random_element(P, rng, terms=3, max_deg=3)
    b = random_element(P, rng, terms=3, max_deg=3)
    assert f.apply(a * b) == f.apply(a) * f.apply(b)
    assert f.apply(a + b) == f.apply(a) + f.apply(b)


@pytest.mark.parametrize("r", range(1, 6))
def test_phi_powers(r):
    f = phi_map(2, M, 1, P)
    cur = P.x(1, 1)
    for _ in range(r):
        cur = f.apply(cur)
    assert cur == P.x(1, 1) + A(P, 1, 1) ** (M - 1) * r


def test_compose_phi_with_itself():
    f = phi_map(2, M, 1, P)
    assert compose(f, f).image((1, 1)) == P.x(1, 1) + A(P, 1, 1) ** (M - 1) * 2


def test_inverse_pairs():
    assert verify_inverse(builtin("phi", 2, M, P), builtin("rho", 2, M, P))
    assert verify_inverse(builtin("psi", 2, M, P), builtin("psi_inv", 2, M, P))
    assert not verify_inverse(builtin("phi", 2, M, P), builtin("phi", 2, M, P))


def test_phi_shifts_the_determinant_by_a_central_power():
    f = builtin("phi", 2, M, P)
    D = quantum_determinant(P)
    assert f.apply(D) == D + P.x(2, 2) ** M


def test_word_action_concatenates():
    u, v = parse_word("phi psi^-1"), parse_word("psi^2 phi^-2")
    x = P.x(1, 1)
    for w in (u, v):
        assert word_action(2, M, w) != x
    actor = WordActor(2, M)
    assert actor.act(u * v, x) == actor.act(u, actor.act(v, x))
    assert actor.act(parse_word("phi phi^-1"), x) == x
    assert str((u * v).reduced()) == "phi psi phi^-2"


def test_bad_words():
    with pytest.raises(MorphismError):
        parse_word("phi chi")
    with pytest.raises(MorphismError):
        free_witness(2, M, [GroupWord((("phi", 1), ("phi", 1)))])


def test_free_witness_small_words():
    r = free_witness(2, M, small_words(2))
    assert r["holds"] and len(r["words"]) == 40


def test_graded_maps_compose_to_graded_maps():
    t = tau_map(P)
    s = builtin("scalar", 2, M, P)
    assert is_graded(t) and is_graded(s) and is_graded(compose(t, s))
    assert not is_graded(builtin("phi", 2, M, P))


def test_tau_needs_single_parameter():
    with pytest.raises(MorphismError):
        tau_map(generic_multiparameter(2))
    t = tau_map(P)
    assert t.verify() and compose(t, t).image((1, 2)) == P.x(1, 2)


def test_phi_on_3x3():
    f = builtin("phi", 3, M)
    assert f.verified and verify_inverse(f, builtin("rho", 3, M))


def test_b2_maps():
    assert b2_psi(M).verify() and b3_phi(M, 1, "B2").verify()
    assert verify_inverse(b2_psi(M), b2_psi(M, -1))


def test_b3_map_breaks_a_relation():
    f = b3_phi(M)
    assert not f.verify()
    assert {v["relation"] for v in f.violations} >= {"x[3,2]*x[1,1]"}
    with pytest.raises(MorphismError):
        builtin("b3_phi", 3, M)


def test_unknown_builtin():
    with pytest.raises(MorphismError):
        builtin("nope")


def test_sigma_checks():
    sigma = wild_sigma(M)
    assert sigma.verify()
    lf = leading_form_check(M, sigma)
    assert lf["holds"] and lf["sigma_fixes_nabla"]
    row = next(r for r in lf["leading_forms"] if r["image"] == "sigma(c)")
    assert row["scalar"] == "-1"
    fi = fixed_ideal_check(sigma, M)
    assert fi["holds"] and fi["determinant_maps_to_ad"]
    assert fixed_ideal_check(builtin("phi", 2, M, P), M)["holds"]


def test_fixed_ideal_rejects_the_transpose_check_size():
    with pytest.raises(MorphismError):
        fixed_ideal_check(builtin("phi", 3, M), M)


@pytest.mark.parametrize("scalars,consistent", [
    ({(1, 1): 2, (1, 2): 3, (2, 1): 4, (2, 2): 6}, True),
    ({(1, 1): 1, (1, 2): 1, (2, 1): 1, (2, 2): 2}, True),
])
def test_diagonal_maps(scalars, consistent):
    r = diagonal_map_check(scalars)
    assert r["consistent"] is consistent
    assert r["verified"] == r["c11c22_equals_c12c21"]


def test_bad_images_are_rejected():
    with pytest.raises(MorphismError):
        make_endomorphism(P, {(3, 1): P.x(1, 1)})
    f = make_endomorphism(P, {(1, 1): P.x(1, 1) + P.x(1, 2)})
    assert not f.verified and f.violations


def test_psi_moves_only_the_corner():
    f = psi_map(2, M, 1, P)
    assert f.changed() == [(2, 2)]
