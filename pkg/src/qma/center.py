"""Central elements: power centrality, odd-root-of-unity center generators,
and centers of associated quasipolynomial algebras."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations
from math import lcm

from .coeff import CyclotomicScalar, cyclo, order_of
from .linalg import count_kernel_mod_bruteforce, kernel_mod, lattice_index, permutation_sign
from .qalgebra import AlgebraElement, PresentationError, QMAPresentation, single_parameter
from .qdet import D_t, quantum_determinant, transpose


def is_central(P: QMAPresentation, a: AlgebraElement) -> bool:
    return all((a * g - g * a).is_zero() for g in P.gens())


def noncommuting_generators(P: QMAPresentation, a: AlgebraElement) -> list[tuple[int, int]]:
    return [pos for pos, g in zip(P.positions, P.gens()) if not (a * g - g * a).is_zero()]


def power_centrality(P: QMAPresentation) -> dict:
    """ell = lcm(ord p_ij, ord lambda p_ji) and a check that every x_ij^ell is central."""
    if P.mode != "cyclotomic":
        raise PresentationError("power centrality needs root-of-unity parameters")
    orders = []
    for i in range(1, P.size + 1):
        for j in range(1, P.size + 1):
            orders.append(order_of(P.p[i, j]))
            orders.append(order_of(P.lam * P.p[j, i]))
    if any(o == "infinite" for o in orders):
        raise PresentationError("a parameter is not a root of unity")
    ell = lcm(*orders)
    failures = [list(pos) for pos in P.positions if not is_central(P, P.x(*pos) ** ell)]
    return {"ell": ell, "all_central": not failures, "failures": failures}


def commutative_det(mat: list[list[AlgebraElement]], P: QMAPresentation) -> AlgebraElement:
    """Leibniz determinant of a matrix whose entries commute with one another."""
    n = len(mat)
    if n == 0:
        return P.one()
    total = P.zero()
    for perm in permutations(range(n)):
        term = P.const(permutation_sign(perm))
        for i, j in enumerate(perm):
            term = term * mat[i][j]
        total = total + term
    return total


@dataclass
class CenterGenerators:
    n: int
    m: int
    P: QMAPresentation
    Z: dict = field(default_factory=dict)
    D: AlgebraElement | None = None
    Y: dict = field(default_factory=dict)

    def A_mat(self, t: int) -> list[list[AlgebraElement]]:
        n = self.n
        return [[self.Z[i, j] for j in range(n - t + 1, n + 1)] for i in range(1, t + 1)]

    def B_mat(self, t: int) -> list[list[AlgebraElement]]:
        n = self.n
        return [[self.Z[i, j] for j in range(1, t + 1)] for i in range(n - t + 1, n + 1)]

    def named(self) -> list[tuple[str, AlgebraElement]]:
        out = [(f"Z[{i},{j}]", z) for (i, j), z in sorted(self.Z.items())]
        out.append(("D", self.D))
        out += [(f"Y[{t},{r}]", y) for (t, r), y in sorted(self.Y.items())]
        return out


def center_generators_odd(n: int, m: int) -> CenterGenerators:
    """Z_ij = x_ij^m, D, and Y_tr = D(t)^r tau(D(n-t))^(m-r) in O_q(M_n), q = zeta_m."""
    if m < 3 or m % 2 == 0:
        raise ValueError("m must be odd and at least 3")
    P = single_parameter(n, cyclo(m, 1))
    gens = CenterGenerators(n, m, P)
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            gens.Z[i, j] = P.x(i, j) ** m
    gens.D = quantum_determinant(P)
    for t in range(1, n):
        dt = D_t(P, t)
        tdt = transpose(D_t(P, n - t))
        for r in range(1, m):
            gens.Y[t, r] = dt ** r * tdt ** (m - r)
    return gens


def relns_families(gens: CenterGenerators) -> list[tuple[str, AlgebraElement, AlgebraElement]]:
    """(label, lhs, rhs) for D^m = det(Z) and the three Y-product families."""
    P, n, m = gens.P, gens.n, gens.m
    out = [("D^m = det(Z)", gens.D ** m,
            commutative_det([[gens.Z[i, j] for j in range(1, n + 1)] for i in range(1, n + 1)], P))]
    for t in range(1, n):
        detA = commutative_det(gens.A_mat(t), P)
        detB = commutative_det(gens.B_mat(n - t), P)
        for i in range(1, m):
            for j in range(i, m):
                lhs = gens.Y[t, i] * gens.Y[t, j]
                if i + j < m:
                    out.append((f"Y[{t},{i}]Y[{t},{j}] = Y[{t},{i + j}] det(B_{n - t})", lhs,
                                gens.Y[t, i + j] * detB))
                elif i + j == m:
                    out.append((f"Y[{t},{i}]Y[{t},{j}] = det(A_{t}) det(B_{n - t})", lhs,
                                detA * detB))
                else:
                    out.append((f"Y[{t},{i}]Y[{t},{j}] = Y[{t},{i + j - m}] det(A_{t})", lhs,
                                gens.Y[t, i + j - m] * detA))
    return out


def minor_power_identities(gens: CenterGenerators) -> list[tuple[str, AlgebraElement, AlgebraElement]]:
    P, n, m = gens.P, gens.n, gens.m
    out = []
    for t in range(1, n + 1):
        dt = D_t(P, t)
        out.append((f"D({t})^m = det(A_{t})", dt ** m, commutative_det(gens.A_mat(t), P)))
        out.append((f"tau(D({t}))^m = det(B_{t})", transpose(dt) ** m,
                    commutative_det(gens.B_mat(t), P)))
    return out


def verify_center_generators(n: int, m: int) -> dict:
    gens = center_generators_odd(n, m)
    central = []
    for name, el in gens.named():
        bad = noncommuting_generators(gens.P, el)
        central.append({"generator": name, "central": not bad,
                        "fails_against": [list(b) for b in bad]})
    identities = []
    for label, lhs, rhs in relns_families(gens) + minor_power_identities(gens):
        identities.append({"identity": label, "holds": (lhs - rhs).is_zero()})
    ok = all(c["central"] for c in central) and all(i["holds"] for i in identities)
    return {"n": n, "m": m, "generators": central, "identities": identities, "holds": ok}


# ----------------------------------------------------------------------
# associated quasipolynomial algebras


@dataclass(frozen=True)
class CommutationMatrix:
    """x_a x_b = zeta_L^{entries[a][b]} x_b x_a in the associated quasipolynomial algebra."""

    level: int
    entries: tuple[tuple[int, ...], ...]

    @property
    def size(self) -> int:
        return len(self.entries)

    def is_antisymmetric(self) -> bool:
        L = self.level
        g = self.size
        return all((self.entries[a][b] + self.entries[b][a]) % L == 0
                   for a in range(g) for b in range(g))


def _root_exponent(c: CyclotomicScalar) -> int:
    k = c.root_exponent()
    if k is None:
        raise PresentationError(f"leading coefficient {c} is not a power of zeta")
    return k


def quasipolynomial_matrix(P: QMAPresentation) -> CommutationMatrix:
    """Exponents of the leading q-commutation coefficients (the x_a x_b term of each rule)."""
    if P.mode != "cyclotomic":
        raise PresentationError("needs a cyclotomic presentation")
    g = P.ngens
    M = [[0] * g for _ in range(g)]
    for (b, a), terms in P.rules.items():
        # x_b x_a = gamma x_a x_b + (terms in later generators); a < b
        target = tuple(int(k in (a, b)) for k in range(g))
        gamma = dict(terms).get(target)
        if gamma is None:
            raise PresentationError("rule lacks a leading term")
        k = _root_exponent(gamma)
        L = P.ring.level
        M[b][a] = k % L
        M[a][b] = (-k) % L
    return CommutationMatrix(P.ring.level, tuple(tuple(r) for r in M))


def qaffine_center_kernel(M: CommutationMatrix | list[list[int]], L: int | None = None) -> dict:
    """Lattice {e : M e = 0 mod L} of exponents of central monomials."""
    if isinstance(M, CommutationMatrix):
        L = M.level if L is None else L
        entries = [list(r) for r in M.entries]
    else:
        entries = [list(r) for r in M]
    if L is None:
        raise ValueError("modulus required")
    g = len(entries)
    basis = kernel_mod(entries, L)
    for v in basis:
        for i in range(g):
            assert sum(entries[i][j] * v[j] for j in range(g)) % L == 0
    only_powers = all(all(x % L == 0 for x in v) for v in basis)
    index = lattice_index(basis, g)
    return {
        "modulus": L,
        "basis": basis,
        "index": index,
        "only_L_th_powers": only_powers,
        "summary": ("center of associated quasipolynomial algebra = L-th powers" if only_powers
                    else "center of associated quasipolynomial algebra is larger than L-th powers"),
    }


def kernel_count_oracle(M: CommutationMatrix, L: int | None = None) -> int:
    L = M.level if L is None else L
    return count_kernel_mod_bruteforce([list(r) for r in M.entries], L)
