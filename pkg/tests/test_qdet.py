from __future__ import annotations

import pytest

from qma.center import is_central
from qma.qalgebra import PresentationError, generic_multiparameter, single_parameter
from qma.qdet import (
    A,
    D_t,
    MinorSpec,
    normal_closed_form,
    normality_scalar,
    quantum_determinant,
    quantum_minor,
    single_parameter_determinant,
    transpose,
    verify_laplace,
    verify_minor_identities,
)


def test_small_determinants():
    M1 = generic_multiparameter(1)
    assert quantum_determinant(M1) == M1.x(1, 1)
    M = generic_multiparameter(2)
    x = M.x
    assert quantum_determinant(M) == x(1, 1) * x(2, 2) - (x(1, 2) * x(2, 1)).scale(M.p[2, 1])
    S = single_parameter(2)
    assert quantum_determinant(S) == S.x(1, 1) * S.x(2, 2) - (S.x(1, 2) * S.x(2, 1)).scale(S.q)


def test_non_square_is_rejected():
    with pytest.raises(PresentationError):
        quantum_determinant(generic_multiparameter(2, 3))


@pytest.mark.parametrize("n", [2, 3])
def test_single_parameter_formula_agrees(n):
    S = single_parameter(n)
    assert single_parameter_determinant(S) == quantum_determinant(S)


def test_minors():
    M = generic_multiparameter(3)
    x = M.x
    assert A(M, 3, 3) == x(1, 1) * x(2, 2) - (x(1, 2) * x(2, 1)).scale(M.p[2, 1])
    assert D_t(M, 1) == M.x(1, 3)
    S = single_parameter(2)
    assert A(S, 1, 1) == S.x(2, 2)
    assert quantum_minor(M, [1, 2], [2, 3]) == M.x(1, 2) * M.x(2, 3) - (M.x(1, 3) * M.x(2, 2)).scale(M.p[3, 2])
    with pytest.raises(ValueError):
        MinorSpec((1, 2), (1,))
    assert MinorSpec((1,), (3,)).complement(3) == MinorSpec((2, 3), (1, 2))


@pytest.mark.parametrize("n", [2, 3])
def test_laplace_single_parameter(n):
    r = verify_laplace(single_parameter(n))
    assert r["holds"] and len(r["checks"]) == 2 * n


def test_laplace_multiparameter_row3():
    assert verify_laplace(generic_multiparameter(3))["holds"]


@pytest.mark.parametrize("n", [2, 3])
def test_normality_scalars_match_closed_form(n):
    M = generic_multiparameter(n)
    D = quantum_determinant(M)
    for i, j in M.positions:
        assert normality_scalar(M, D, M.x(i, j)) == normal_closed_form(M, i, j)


def test_normality_scalar_examples():
    S = single_parameter(2)
    D = quantum_determinant(S)
    assert all(normality_scalar(S, D, g) == 1 for g in S.gens())
    assert normality_scalar(S, S.x(1, 2), S.x(1, 1)) == S.q.inverse()
    assert normality_scalar(S, S.x(1, 1), S.x(2, 2)) == "not normal against g"


def test_minor_identities_and_commutations():
    r = verify_minor_identities(3)
    assert r["holds"]
    labels = [c["identity"] for c in r["checks"]]
    assert "[D(1), tau(D(2))] = 0" in labels and "[D(1), D(2)] = 0" in labels


def test_transpose_fixes_the_determinant():
    # D_q is fixed by the transpose in the single-parameter algebra
    S = single_parameter(3)
    assert transpose(quantum_determinant(S)) == quantum_determinant(S)
    assert is_central(S, quantum_determinant(S))
