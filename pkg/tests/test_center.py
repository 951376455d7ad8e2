from __future__ import annotations

import random

import pytest
from hypothesis import given, settings, strategies as st

from qma.center import (
    center_generators_odd,
    commutative_det,
    is_central,
    kernel_count_oracle,
    power_centrality,
    qaffine_center_kernel,
    quasipolynomial_matrix,
    verify_center_generators,
)
from qma.coeff import cyclo
from qma.linalg import count_kernel_mod_bruteforce
from qma.qalgebra import (
    PresentationError,
    cyclotomic_multiparameter,
    generic_multiparameter,
    named_subalgebra,
    single_parameter,
)
from qma.qdet import quantum_determinant


def test_is_central_examples():
    S = single_parameter(2)
    assert is_central(S, quantum_determinant(S))
    assert not is_central(S, S.x(1, 2))
    P = single_parameter(2, cyclo(3, 1))
    assert is_central(P, P.x(1, 2) ** 3)


@pytest.mark.parametrize("P,ell", [
    (cyclotomic_multiparameter(2, 2, 3, 1, {}), 3),
    (single_parameter(2, cyclo(3, 1)), 3),
    (single_parameter(2, cyclo(5, 1)), 5),
])
def test_power_centrality(P, ell):
    r = power_centrality(P)
    assert r["ell"] == ell and r["all_central"]


def test_power_centrality_needs_roots_of_unity():
    with pytest.raises(PresentationError):
        power_centrality(generic_multiparameter(2))


@pytest.mark.parametrize("n,m", [(2, 3), (2, 5), (3, 3)])
def test_center_generators_and_relation_families(n, m):
    r = verify_center_generators(n, m)
    assert all(g["central"] for g in r["generators"])
    assert all(i["holds"] for i in r["identities"]), [i for i in r["identities"] if not i["holds"]]


def test_center_generator_examples_n2_m3():
    g = center_generators_odd(2, 3)
    P = g.P
    b, c = P.x(1, 2), P.x(2, 1)
    u, v, w, z = g.Z[1, 1], g.Z[1, 2], g.Z[2, 1], g.Z[2, 2]
    assert g.D ** 3 == u * z - v * w
    t1, t2 = g.Y[1, 1], g.Y[1, 2]
    # Y_1r = D(1)^r tau(D(1))^(m-r) = b^r c^(3-r)
    assert t1 == b * c ** 2 and t2 == b ** 2 * c
    assert t1 * t1 == t2 * w
    assert t1 * t2 == v * w
    assert t2 * t2 == t1 * v


def test_center_generators_reject_even_m():
    with pytest.raises(ValueError):
        center_generators_odd(2, 4)


def test_commutative_det_of_central_matrix():
    g = center_generators_odd(2, 3)
    Z = [[g.Z[1, 1], g.Z[1, 2]], [g.Z[2, 1], g.Z[2, 2]]]
    assert commutative_det(Z, g.P) == g.Z[1, 1] * g.Z[2, 2] - g.Z[1, 2] * g.Z[2, 1]


@pytest.mark.parametrize("name", ["B1", "C"])
def test_quasipolynomial_center_is_generated_by_powers(name):
    P = named_subalgebra(name, cyclo(3, 1))
    M = quasipolynomial_matrix(P)
    assert M.is_antisymmetric()
    r = qaffine_center_kernel(M)
    assert r["only_L_th_powers"]
    # the kernel has exactly 1 element mod 3, i.e. the lattice is (3Z)^6
    assert kernel_count_oracle(M) == 1


def test_trivial_commutation_kernel():
    r = qaffine_center_kernel([[0]], 3)
    assert not r["only_L_th_powers"]
    assert count_kernel_mod_bruteforce([[0]], 3) == 3


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_kernel_is_a_subgroup_and_matches_brute_force(seed):
    rng = random.Random(seed)
    g, L = rng.randint(1, 4), rng.choice([3, 5, 6])
    M = [[0] * g for _ in range(g)]
    for i in range(g):
        for j in range(i):
            k = rng.randrange(L)
            M[i][j], M[j][i] = k, -k % L
    r = qaffine_center_kernel(M, L)
    basis = r["basis"]
    for v in basis:
        assert all(sum(M[i][j] * v[j] for j in range(g)) % L == 0 for i in range(g))
    if len(basis) >= 2:
        s = [a + b for a, b in zip(basis[0], basis[1])]
        assert all(sum(M[i][j] * s[j] for j in range(g)) % L == 0 for i in range(g))
    # the kernel lattice has index L^g / #(kernel mod L) in Z^g
    assert r["index"] * count_kernel_mod_bruteforce(M, L) == L ** g
