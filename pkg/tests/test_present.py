from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from qma.compoly import Poly, reduce_poly
from qma.coeff import cyclotomic_field
from qma.linalg import field_rank
from qma.present import (
    Layout,
    NotOnVariety,
    TwoTierOrder,
    build_relation_families,
    count_by_linear_algebra,
    groebner_verify,
    hilbert_degree,
    jacobian_matrix,
    jacobian_rank_at,
    locus_point,
    normal_form,
    normal_monomial_count,
    off_locus_point,
    p_locus_survey,
    socle_witness,
    z_free_normal_count,
    zero_divisor_search,
)


def test_relation_families_n2_m3():
    ideal = build_relation_families(2, 3)
    assert len(ideal.generators) == 4
    names = ideal.layout.names
    P = lambda s: Poly.var(names, s)  # noqa: E731
    u, v, w, z, D = P("Z11"), P("Z12"), P("Z21"), P("Z22"), P("D")
    t1, t2 = P("Y11"), P("Y12")
    expected = [D ** 3 - (u * z - v * w), t1 * t1 - t2 * w, t1 * t2 - v * w, t2 * t2 - t1 * v]
    assert sorted(map(str, ideal.generators)) == sorted(map(str, expected))


def test_relation_family_sizes():
    assert len(build_relation_families(2, 5).generators) == 11
    with pytest.raises(ValueError):
        build_relation_families(2, 4)


@pytest.mark.parametrize("n,m", [(2, 3), (2, 5), (3, 3)])
def test_groebner_basis(n, m):
    r = groebner_verify(n, m)
    assert r["holds"] and r["leading_terms_match"]
    assert z_free_normal_count(n, m) == m ** n
    h = hilbert_degree(n, m)
    assert h["degree"] == n * n - 1 and h["krull_dimension"] == n * n


def test_leading_term_of_determinant_relation():
    r = groebner_verify(2, 3)
    assert "D^3" in r["leading_terms"]


def test_one_by_one_count_is_one_in_every_weighted_degree():
    assert [normal_monomial_count(1, 3, N, "weighted") for N in range(8)] == [1] * 8


@pytest.mark.parametrize("N", range(7))
def test_weighted_counts_match_linear_algebra(N):
    assert normal_monomial_count(2, 3, N, "weighted") == count_by_linear_algebra(2, 3, N, "weighted")


@pytest.mark.parametrize("N", range(5))
def test_standard_counts_match_filtered_linear_algebra(N):
    assert normal_monomial_count(2, 3, N) == count_by_linear_algebra(2, 3, N, "standard")


monos = st.lists(st.integers(0, 3), min_size=7, max_size=7).map(tuple)


@settings(max_examples=80, deadline=None)
@given(monos, monos, monos)
def test_two_tier_order_is_total_and_multiplicative(a, b, c):
    order = TwoTierOrder(Layout(2, 3))
    assert (order.compare(a, b) == 0) == (a == b)
    assert order.compare(a, b) == -order.compare(b, a)
    ac = tuple(x + y for x, y in zip(a, c))
    bc = tuple(x + y for x, y in zip(b, c))
    assert order.compare(ac, bc) == order.compare(a, b)
    zero = (0,) * 7
    assert order.compare(a, zero) >= 0


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_ideal_elements_reduce_to_zero(seed):
    ideal = build_relation_families(2, 3)
    L = ideal.layout
    rng = random.Random(seed)
    f = Poly(L.names, {})
    for g in ideal.generators:
        e = [rng.randint(0, 1) for _ in range(L.nvars)]
        f = f + g.mul_monomial(e, rng.randint(-3, 3))
    assert normal_form(f, ideal).is_zero()


def test_jacobian_examples():
    assert jacobian_rank_at(2, 3, [1, 0, 0, 1, 1, 0, 0]) == 1
    assert jacobian_rank_at(2, 3, [0] * 7) == 0
    F = cyclotomic_field(3)
    pt = off_locus_point(3, F(2), F(3), F(1), F(1))
    assert jacobian_rank_at(2, 3, pt) >= 2
    with pytest.raises(NotOnVariety):
        jacobian_rank_at(2, 3, [1, 0, 0, 1, 2, 0, 0])


def test_jacobian_accepts_named_points():
    assert jacobian_rank_at(2, 3, {"u": 1, "z": 8, "D": 2}) == 1


def test_jacobian_rank_invariant_under_scaling_and_reordering():
    ideal = build_relation_families(2, 3)
    jac = jacobian_matrix(ideal)
    F = cyclotomic_field(3)
    pts = [locus_point(3, F(2), F(4), F(2)), off_locus_point(3, F(1), F(2), F(3), F(1))]
    rng = random.Random(3)
    for pt in pts:
        vals = [F(v) for v in pt]
        mat = [[e.evaluate(vals, F.one) for e in row] for row in jac]
        base = field_rank(mat)
        scaled = [[x * (k + 2) for x in row] for k, row in enumerate(mat)]
        perm = list(range(len(vals)))
        rng.shuffle(perm)
        permuted = [[row[k] for k in perm] for row in mat]
        assert field_rank(scaled) == base == field_rank(permuted)
        assert base == jacobian_rank_at(2, 3, pt)


@pytest.mark.parametrize("m", [3, 5])
def test_p_locus_survey(m):
    r = p_locus_survey(m, 30, seed=11)
    assert r["holds"]
    assert r["locus_rank_one"] == 30 and r["off_locus_rank_one"] == 0 and r["origin_rank"] == 0
    assert r["rank_one_points_in_claimed_zero_set"]


def test_socle_n2_m3():
    r = socle_witness(2, 3)
    assert r["quotient_dimension"] == 9
    assert r["socle_dimension"] == 2
    assert r["socle_monomials"] == ["D^2*Y11", "D^2*Y12"]


def test_socle_witnesses_are_in_the_socle():
    for n, m in [(2, 5), (3, 3)]:
        r = socle_witness(n, m)
        assert r["witnesses_in_socle"] and r["socle_dimension"] >= 2


def test_socle_n2_m5_is_m_minus_one():
    # every D^(m-1) t_r is annihilated by D and by every t_s modulo the Z_ij
    r = socle_witness(2, 5)
    assert r["socle_dimension"] == 4


def test_zero_divisor_search_never_claims_proof():
    r = zero_divisor_search(2, 3, trials=10, seed=1)
    assert r["verdict"] == "no counterexample found"
