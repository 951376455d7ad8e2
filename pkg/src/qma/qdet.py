"""Quantum determinants, quantum minors and the identities relating them."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from typing import Sequence

from .qalgebra import (
    AlgebraElement,
    Position,
    PresentationError,
    QMAPresentation,
    apply_map,
    commutator,
    generic_multiparameter,
    single_parameter,
)


@dataclass(frozen=True)
class MinorSpec:
    I: tuple[int, ...]
    J: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "I", tuple(sorted(self.I)))
        object.__setattr__(self, "J", tuple(sorted(self.J)))
        if len(self.I) != len(self.J) or not self.I:
            raise ValueError("row and column sets must be nonempty and of equal size")
        if len(set(self.I)) != len(self.I) or len(set(self.J)) != len(self.J):
            raise ValueError("repeated index in a minor")

    def complement(self, n: int) -> "MinorSpec":
        return MinorSpec(tuple(k for k in range(1, n + 1) if k not in self.I),
                         tuple(k for k in range(1, n + 1) if k not in self.J))


def inversions(perm: Sequence[int]) -> list[tuple[int, int]]:
    return [(a, b) for a in range(len(perm)) for b in range(a + 1, len(perm)) if perm[a] > perm[b]]


def quantum_minor(P: QMAPresentation, I: Sequence[int], J: Sequence[int]) -> AlgebraElement:
    """D(I,J): sum over bijections of the weighted products x_{i1 j_pi(1)} ... x_{ik j_pi(k)}.

    Each inversion of the column sequence (j_a, j_b) contributes the factor -p[j_a, j_b].
    """
    spec = MinorSpec(tuple(I), tuple(J))
    rows, cols = spec.I, spec.J
    for i in rows:
        for j in cols:
            if (i, j) not in P.index:
                raise PresentationError(f"x[{i},{j}] is not a generator")
    total = P.zero()
    for perm in permutations(cols):
        coef = P.ring.one
        for a, b in inversions(perm):
            coef = coef * -P.p[perm[a], perm[b]]
        term = P.const(coef)
        for i, j in zip(rows, perm):
            term = term * P.x(i, j)
        total = total + term
    return total


def quantum_determinant(P: QMAPresentation) -> AlgebraElement:
    if P.rows != P.cols or P.subset is not None:
        raise PresentationError("quantum determinant needs a full square grid")
    n = P.rows
    return quantum_minor(P, range(1, n + 1), range(1, n + 1))


def single_parameter_determinant(P: QMAPresentation) -> AlgebraElement:
    """sum_pi (-q)^{l(pi)} x_{1 pi(1)} ... x_{n pi(n)}, computed independently of p."""
    if not P.is_single_parameter:
        raise PresentationError("needs a single-parameter presentation")
    n = P.rows
    total = P.zero()
    for perm in permutations(range(1, n + 1)):
        term = P.const((-P.q) ** len(inversions(perm)))
        for i, j in enumerate(perm, start=1):
            term = term * P.x(i, j)
        total = total + term
    return total


def complement_minor(P: QMAPresentation, I: Sequence[int], J: Sequence[int]) -> AlgebraElement:
    """A(I,J) = D(complement of I, complement of J); A(i,j) for singletons."""
    n = P.rows
    spec = MinorSpec(tuple(I), tuple(J)).complement(n)
    if not spec.I:
        return P.one()
    return quantum_minor(P, spec.I, spec.J)


def A(P: QMAPresentation, i: int, j: int) -> AlgebraElement:
    if P.rows == 1:
        return P.one()
    return complement_minor(P, (i,), (j,))


def D_t(P: QMAPresentation, t: int) -> AlgebraElement:
    """D(t) = D({1..t}, {n-t+1..n})."""
    n = P.rows
    if not 1 <= t <= n:
        raise ValueError("t out of range")
    return quantum_minor(P, range(1, t + 1), range(n - t + 1, n + 1))


def transpose(a: AlgebraElement) -> AlgebraElement:
    """tau(x_ij) = x_ji, available for single-parameter square presentations only."""
    P = a.P
    if not P.is_single_parameter or P.rows != P.cols or P.subset is not None:
        raise PresentationError("transpose is only a relation-preserving map in the "
                                "single-parameter square case")
    images = {(i, j): P.x(j, i) for (i, j) in P.positions}
    return apply_map(a, images)


# ----------------------------------------------------------------------
# Laplace expansions


def laplace_row(P: QMAPresentation, i: int) -> AlgebraElement:
    q = P.q
    n = P.rows
    return sum((P.x(i, j) * A(P, i, j)).scale((-q) ** (j - i)) for j in range(1, n + 1))


def laplace_col(P: QMAPresentation, i: int) -> AlgebraElement:
    q = P.q
    n = P.rows
    return sum((P.x(j, i) * A(P, j, i)).scale((-q) ** (j - i)) for j in range(1, n + 1))


def multiparameter_row3_expansion(P: QMAPresentation) -> AlgebraElement:
    """p13 p23 x31 A(3,1) - p21 p13 p23 x32 A(3,2) + x33 A(3,3) for n = 3."""
    p = P.p
    return ((P.x(3, 1) * A(P, 3, 1)).scale(p[1, 3] * p[2, 3])
            - (P.x(3, 2) * A(P, 3, 2)).scale(p[2, 1] * p[1, 3] * p[2, 3])
            + P.x(3, 3) * A(P, 3, 3))


def verify_laplace(P: QMAPresentation) -> dict:
    """Check the row/column Laplace expansions (single parameter) or the
    third-row expansion of the 3x3 multiparameter determinant."""
    if P.rows != P.cols or P.subset is not None:
        raise PresentationError("Laplace expansion needs a full square grid")
    D = quantum_determinant(P)
    checks = []
    if P.is_single_parameter:
        for i in range(1, P.rows + 1):
            for kind, f in (("row", laplace_row), ("column", laplace_col)):
                diff = f(P, i) - D
                checks.append({"expansion": kind, "index": i, "holds": diff.is_zero(),
                               "difference": str(diff)})
        convention = "D = sum_j (-q)^(j-i) x_ij A(i,j) = sum_j (-q)^(j-i) x_ji A(j,i)"
    elif P.rows == 3:
        diff = multiparameter_row3_expansion(P) - D
        checks.append({"expansion": "row", "index": 3, "holds": diff.is_zero(),
                       "difference": str(diff)})
        convention = "D = p13 p23 x31 A(3,1) - p21 p13 p23 x32 A(3,2) + x33 A(3,3)"
    else:
        raise PresentationError("multiparameter Laplace check is available for n = 3 only")
    return {"convention": convention, "checks": checks,
            "holds": all(c["holds"] for c in checks)}


# ----------------------------------------------------------------------
# normality


def normality_scalar(P: QMAPresentation, N: AlgebraElement, g: AlgebraElement):
    """gamma with N g = gamma g N, or the string ``"not normal against g"``."""
    left = N * g
    right = g * N
    if right.is_zero():
        return P.ring.zero if left.is_zero() else "not normal against g"
    gamma = None
    for mono in sorted(right.terms, reverse=True):
        c = right.terms[mono]
        if hasattr(c, "is_unit") and not c.is_unit():
            continue
        gamma = left.coefficient(mono) / c
        break
    if gamma is None:
        return "not normal against g"
    if (left - right.scale(gamma)).is_zero():
        return gamma
    return "not normal against g"


def normal_closed_form(P: QMAPresentation, i: int, j: int):
    """lambda^{j-i} prod_l p_jl p_li."""
    out = P.lam ** (j - i)
    for l in range(1, P.rows + 1):
        out = out * P.p[j, l] * P.p[l, i]
    return out


# ----------------------------------------------------------------------
# identities among 3x3 minors


def minor_identities_n3(P: QMAPresentation | None = None) -> list[tuple[str, AlgebraElement, AlgebraElement]]:
    """(label, lhs, rhs) for the four 3x3 identities relating D to products of minors."""
    P = P or generic_multiparameter(3)
    p, lam = P.p, P.lam
    x = P.x
    D = quantum_determinant(P)

    def a(i, j):
        return A(P, i, j)

    li = lam.inverse()
    return [
        ("x22 D = A(3,3)A(1,1) - lambda^-2 p12 p13 p23 A(1,3)A(3,1)",
         x(2, 2) * D,
         a(3, 3) * a(1, 1) - (a(1, 3) * a(3, 1)).scale(li * li * p[1, 2] * p[1, 3] * p[2, 3])),
        ("p13 p21 x32 D = A(2,3)A(1,1) - lambda^-1 p12 p13 p32 A(1,3)A(2,1)",
         (x(3, 2) * D).scale(p[1, 3] * p[2, 1]),
         a(2, 3) * a(1, 1) - (a(1, 3) * a(2, 1)).scale(li * p[1, 2] * p[1, 3] * p[3, 2])),
        ("lambda p21 p31 x13 D = A(3,2)A(2,1) - lambda^-1 p13 p23 p21 A(2,2)A(3,1)",
         (x(1, 3) * D).scale(lam * p[2, 1] * p[3, 1]),
         a(3, 2) * a(2, 1) - (a(2, 2) * a(3, 1)).scale(li * p[1, 3] * p[2, 3] * p[2, 1])),
        ("p23 A(2,2)x21 = lambda^-1 p12 p13 A(1,2)x11 + lambda A(3,2)x31",
         (a(2, 2) * x(2, 1)).scale(p[2, 3]),
         (a(1, 2) * x(1, 1)).scale(li * p[1, 2] * p[1, 3]) + (a(3, 2) * x(3, 1)).scale(lam)),
    ]


def minors_commutation_n3(P: QMAPresentation | None = None) -> list[tuple[str, AlgebraElement]]:
    """Commutators [D(t), tau(D(t'))] and [D(t), D(t')] for t, t' in {1, 2}."""
    P = P or single_parameter(3)
    out = []
    Dt = {t: D_t(P, t) for t in (1, 2)}
    tD = {t: transpose(Dt[t]) for t in (1, 2)}
    for t in (1, 2):
        for s in (1, 2):
            out.append((f"[D({t}), tau(D({s}))]", commutator(Dt[t], tD[s])))
            out.append((f"[D({t}), D({s})]", commutator(Dt[t], Dt[s])))
    return out


def verify_minor_identities(n: int = 3) -> dict:
    if n != 3:
        raise ValueError("the minor identity suite is defined for n = 3")
    checks = []
    for label, lhs, rhs in minor_identities_n3():
        diff = lhs - rhs
        checks.append({"identity": label, "holds": diff.is_zero(), "difference": str(diff)})
    for label, comm in minors_commutation_n3():
        checks.append({"identity": f"{label} = 0", "holds": comm.is_zero(),
                       "difference": str(comm)})
    return {"checks": checks, "holds": all(c["holds"] for c in checks)}
