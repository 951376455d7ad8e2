"""The commutative presentation of the center of O_q(M_n) at an odd root of unity.

Variables are ordered Z[1,1], ..., Z[n,n], D, Y[1,1], ..., Y[n-1,m-1]; for
n = 2 they are also known as u, v, w, z, D, t_1, ..., t_{m-1}.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement, permutations, product
from math import comb
from typing import Sequence

from .coeff import CyclotomicScalar, cyclotomic_field
from .compoly import Poly, monomials_of_degree, reduce_poly, s_polynomial
from .linalg import field_rank, permutation_sign


def variable_names(n: int, m: int) -> tuple[str, ...]:
    names = [f"Z{i}{j}" for i in range(1, n + 1) for j in range(1, n + 1)]
    names.append("D")
    names += [f"Y{t}{r}" for t in range(1, n) for r in range(1, m)]
    return tuple(names)


def display_names(n: int, m: int) -> tuple[str, ...]:
    if n != 2:
        return variable_names(n, m)
    return ("u", "v", "w", "z", "D") + tuple(f"t{r}" for r in range(1, m))


@dataclass(frozen=True)
class Layout:
    n: int
    m: int

    @property
    def names(self) -> tuple[str, ...]:
        return variable_names(self.n, self.m)

    @property
    def nz(self) -> int:
        return self.n * self.n

    @property
    def d_index(self) -> int:
        return self.nz

    def y_index(self, t: int, r: int) -> int:
        return self.nz + 1 + (t - 1) * (self.m - 1) + (r - 1)

    def z_index(self, i: int, j: int) -> int:
        return (i - 1) * self.n + (j - 1)

    @property
    def nvars(self) -> int:
        return self.nz + 1 + (self.n - 1) * (self.m - 1)

    def y_slice(self) -> slice:
        return slice(self.nz + 1, self.nvars)

    def weights(self) -> tuple[int, ...]:
        """x-degree of each variable: Z -> m, D -> n, Y_tr -> tr + (n-t)(m-r)."""
        n, m = self.n, self.m
        w = [m] * self.nz + [n]
        w += [t * r + (n - t) * (m - r) for t in range(1, n) for r in range(1, m)]
        return tuple(w)


class TwoTierOrder:
    """Monomial order: deglex on the Y-block (Y11 > Y12 > ...), ties broken by
    lex on (D, Z11, ..., Znn)."""

    def __init__(self, layout: Layout):
        self.layout = layout
        self._ys = layout.y_slice()
        self._d = layout.d_index
        self._nz = layout.nz

    def key(self, e: Sequence[int]) -> tuple:
        y = tuple(e[self._ys])
        return (sum(y),) + y + (e[self._d],) + tuple(e[: self._nz])

    def __call__(self, e: Sequence[int]) -> tuple:
        return self.key(e)

    def compare(self, a: Sequence[int], b: Sequence[int]) -> int:
        ka, kb = self.key(a), self.key(b)
        return (ka > kb) - (ka < kb)


def _var(layout: Layout, index: int) -> Poly:
    e = [0] * layout.nvars
    e[index] = 1
    return Poly(layout.names, {tuple(e): 1})


def _z(layout: Layout, i: int, j: int) -> Poly:
    return _var(layout, layout.z_index(i, j))


def _poly_det(mat: list[list[Poly]], names) -> Poly:
    n = len(mat)
    total = Poly(names, {})
    for perm in permutations(range(n)):
        term = Poly.const(names, permutation_sign(perm))
        for i, j in enumerate(perm):
            term = term * mat[i][j]
        total = total + term
    return total


def det_A(layout: Layout, t: int) -> Poly:
    n = layout.n
    mat = [[_z(layout, i, j) for j in range(n - t + 1, n + 1)] for i in range(1, t + 1)]
    return _poly_det(mat, layout.names)


def det_B(layout: Layout, t: int) -> Poly:
    n = layout.n
    mat = [[_z(layout, i, j) for j in range(1, t + 1)] for i in range(n - t + 1, n + 1)]
    return _poly_det(mat, layout.names)


def det_Z(layout: Layout) -> Poly:
    n = layout.n
    return _poly_det([[_z(layout, i, j) for j in range(1, n + 1)] for i in range(1, n + 1)],
                     layout.names)


@dataclass
class PresentationIdeal:
    layout: Layout
    generators: list[Poly]
    labels: list[str]

    @property
    def order(self) -> TwoTierOrder:
        return TwoTierOrder(self.layout)


def build_relation_families(n: int, m: int) -> PresentationIdeal:
    if m % 2 == 0:
        raise ValueError("m must be odd")
    if m < 3 and n > 1:
        raise ValueError("m must be at least 3")
    L = Layout(n, m)
    D = _var(L, L.d_index)
    gens = [D ** m - det_Z(L)]
    labels = ["D^m - det(Z)"]
    for t in range(1, n):
        dA = det_A(L, t)
        dB = det_B(L, n - t)
        for i in range(1, m):
            for j in range(i, m):
                lhs = _var(L, L.y_index(t, i)) * _var(L, L.y_index(t, j))
                if i + j < m:
                    rhs = _var(L, L.y_index(t, i + j)) * dB
                    label = f"Y{t}{i}*Y{t}{j} - Y{t}{i + j}*det(B_{n - t})"
                elif i + j == m:
                    rhs = dA * dB
                    label = f"Y{t}{i}*Y{t}{j} - det(A_{t})*det(B_{n - t})"
                else:
                    rhs = _var(L, L.y_index(t, i + j - m)) * dA
                    label = f"Y{t}{i}*Y{t}{j} - Y{t}{i + j - m}*det(A_{t})"
                gens.append(lhs - rhs)
                labels.append(label)
    return PresentationIdeal(L, gens, labels)


def expected_leading(ideal: PresentationIdeal) -> list[tuple[int, ...]]:
    """D^m for the determinant relation and Y_ti Y_tj for the others."""
    L = ideal.layout
    out = []
    e = [0] * L.nvars
    e[L.d_index] = L.m
    out.append(tuple(e))
    for t in range(1, L.n):
        for i in range(1, L.m):
            for j in range(i, L.m):
                e = [0] * L.nvars
                e[L.y_index(t, i)] += 1
                e[L.y_index(t, j)] += 1
                out.append(tuple(e))
    return out


def groebner_verify(n: int, m: int) -> dict:
    ideal = build_relation_families(n, m)
    order = ideal.order
    G = ideal.generators
    leads = [g.leading(order)[0] for g in G]
    leads_ok = leads == expected_leading(ideal)
    failures = []
    pairs = 0
    for a in range(len(G)):
        for b in range(a + 1, len(G)):
            pairs += 1
            r = reduce_poly(s_polynomial(G[a], G[b], order), G, order)
            if not r.is_zero():
                failures.append({"pair": [ideal.labels[a], ideal.labels[b]], "remainder": str(r)})
    return {
        "n": n, "m": m,
        "generators": len(G),
        "s_pairs": pairs,
        "nonzero_remainders": failures,
        "leading_terms_match": leads_ok,
        "leading_terms": [Poly(ideal.layout.names).monomial_text(e) for e in leads],
        "holds": leads_ok and not failures,
    }


def normal_form(f: Poly, ideal: PresentationIdeal) -> Poly:
    return reduce_poly(f, ideal.generators, ideal.order)


# ----------------------------------------------------------------------
# counting normal monomials


def _skeletons(L: Layout) -> list[tuple[int, ...]]:
    """Z-free normal monomials: D^a (a < m) times at most one Y_tr per t."""
    out = []
    choices = [range(0, L.m)] * (L.n - 1)  # 0 = no Y for this t, else r
    for a in range(L.m):
        for rs in product(*choices):
            e = [0] * L.nvars
            e[L.d_index] = a
            for t, r in enumerate(rs, start=1):
                if r:
                    e[L.y_index(t, r)] = 1
            out.append(tuple(e))
    return out


def z_free_normal_count(n: int, m: int) -> int:
    return len(_skeletons(Layout(n, m)))


def normal_monomial_count(n: int, m: int, N: int, grading: str = "standard") -> int:
    """Number of normal monomials of degree N.

    ``grading="standard"`` gives every variable degree 1; ``"weighted"`` uses
    x-degrees (Z -> m, D -> n, Y_tr -> tr + (n-t)(m-r)), under which the
    relations are homogeneous.
    """
    L = Layout(n, m)
    nz = L.nz
    total = 0
    if grading == "standard":
        for e in _skeletons(L):
            left = N - sum(e)
            if left >= 0:
                total += comb(left + nz - 1, nz - 1)
    elif grading == "weighted":
        w = L.weights()
        for e in _skeletons(L):
            left = N - sum(a * b for a, b in zip(e, w))
            if left >= 0 and left % m == 0:
                total += comb(left // m + nz - 1, nz - 1)
    else:
        raise ValueError(f"unknown grading {grading!r}")
    return total


def finite_difference_degree(values: Sequence[int]) -> int:
    """Degree of the polynomial interpolating equally spaced values (-1 for all zero)."""
    diffs = list(values)
    last_nonzero = -1
    k = 0
    while diffs:
        if any(diffs):
            last_nonzero = k
        diffs = [b - a for a, b in zip(diffs, diffs[1:])]
        k += 1
    if last_nonzero == len(values) - 1:
        raise ValueError("not enough samples to certify the degree")
    return last_nonzero


def hilbert_degree(n: int, m: int) -> dict:
    N0 = m + n
    counts = [normal_monomial_count(n, m, N) for N in range(N0, N0 + n * n + 1)]
    deg = finite_difference_degree(counts)
    return {"n": n, "m": m, "N0": N0, "counts": counts, "degree": deg, "krull_dimension": deg + 1}


def count_by_linear_algebra(n: int, m: int, N: int, grading: str = "weighted") -> int:
    """dim of the degree-N part of T/I from spans of multiples of the generators.

    For the weighted grading the ideal is homogeneous and this is exact.  For
    the standard grading it returns the filtered dimension of T_{<=N}/(I_{<=N})
    minus that for N-1, valid when reduction never raises degree (n = 2).
    """
    ideal = build_relation_families(n, m)
    L = ideal.layout
    if grading == "weighted":
        w = L.weights()
        space = list(monomials_of_degree(L.nvars, N, w))
        rows = []
        for g in ideal.generators:
            dg = max(sum(a * b for a, b in zip(e, w)) for e in g.terms)
            if dg <= N:
                for mono in monomials_of_degree(L.nvars, N - dg, w):
                    rows.append(g.mul_monomial(mono))
        return len(space) - _span_rank(rows, space)
    if grading == "standard":
        return _filtered_dim(ideal, N) - (_filtered_dim(ideal, N - 1) if N > 0 else 0)
    raise ValueError(f"unknown grading {grading!r}")


def _filtered_dim(ideal: PresentationIdeal, N: int) -> int:
    L = ideal.layout
    space = [e for d in range(N + 1) for e in monomials_of_degree(L.nvars, d)]
    rows = []
    for g in ideal.generators:
        dg = g.total_degree()
        for d in range(0, N - dg + 1):
            for mono in monomials_of_degree(L.nvars, d):
                rows.append(g.mul_monomial(mono))
    return len(space) - _span_rank(rows, space)


def _span_rank(polys: list[Poly], space: list[tuple[int, ...]]) -> int:
    index = {e: k for k, e in enumerate(space)}
    mat = []
    for p in polys:
        row = [Fraction(0)] * len(space)
        for e, c in p.terms.items():
            row[index[e]] = Fraction(c)
        mat.append(row)
    return field_rank(mat) if mat else 0


# ----------------------------------------------------------------------
# Jacobian rank


def _to_field(values: Sequence, level: int | None):
    if level is None and any(isinstance(v, CyclotomicScalar) for v in values):
        level = next(v.level for v in values if isinstance(v, CyclotomicScalar))
    if level is None:
        return [Fraction(v) for v in values], Fraction(1)
    F = cyclotomic_field(level)
    return [F(v) for v in values], F.one


class NotOnVariety(ValueError):
    pass


def jacobian_matrix(ideal: PresentationIdeal) -> list[list[Poly]]:
    return [[g.diff(k) for k in range(ideal.layout.nvars)] for g in ideal.generators]


def jacobian_rank_at(n: int, m: int, point, ideal: PresentationIdeal | None = None,
                     jac: list[list[Poly]] | None = None) -> int:
    """Exact rank of the Jacobian of the relation families at a point of the variety."""
    ideal = ideal or build_relation_families(n, m)
    L = ideal.layout
    if isinstance(point, dict):
        aliases = dict(zip(display_names(n, m), L.names))
        vals = [0] * L.nvars
        for k, v in point.items():
            name = aliases.get(k, k)
            vals[L.names.index(name)] = v
        point = vals
    if len(point) != L.nvars:
        raise ValueError(f"point needs {L.nvars} coordinates")
    pt, one = _to_field(point, None)
    for g, label in zip(ideal.generators, _labels(ideal)):
        if g.evaluate(pt, one) != 0:
            raise NotOnVariety(f"point violates {label}")
    jac = jac or jacobian_matrix(ideal)
    mat = [[entry.evaluate(pt, one) for entry in row] for row in jac]
    return field_rank(mat)


def _labels(ideal: PresentationIdeal) -> list[str]:
    return ideal.labels


def _rand_nonzero(rng: random.Random, bound: int = 7) -> int:
    v = 0
    while v == 0:
        v = rng.randint(-bound, bound)
    return v


def locus_point(m: int, a, b, c) -> list:
    """(u,v,w,z,D,t_1..t_{m-1}) = (a,0,0,b,c,0,...,0); requires c^m = ab."""
    return [a, 0, 0, b, c] + [0] * (m - 1)


def off_locus_point(m: int, beta, gamma, u, D) -> list:
    """v = beta^m, w = gamma^m, t_r = beta^r gamma^(m-r), z = (D^m + vw)/u."""
    v, w = beta ** m, gamma ** m
    z = (D ** m + v * w) / u
    return [u, v, w, z, D] + [beta ** r * gamma ** (m - r) for r in range(1, m)]


def p_locus_survey(m: int, samples: int = 100, seed: int = 0) -> dict:
    """Sample points of the n = 2 variety and compare Jacobian ranks with the claimed locus."""
    rng = random.Random(seed)
    F = cyclotomic_field(m)
    ideal = build_relation_families(2, m)
    jac = jacobian_matrix(ideal)

    def rank(pt):
        return jacobian_rank_at(2, m, pt, ideal, jac)

    def in_claimed_zero_set(pt) -> bool:
        return all(pt[k] == 0 for k in [1, 2] + list(range(5, 4 + m)))

    sampled: list[tuple[list, int]] = []
    locus_ranks = []
    for s in range(samples):
        if s % 4 == 3:
            # a or b zero forces c = 0
            a = F(_rand_nonzero(rng)) if rng.random() < 0.5 else F.zero
            b = F.zero if a != 0 else F(_rand_nonzero(rng))
            c = F.zero
        else:
            c = F(Fraction(_rand_nonzero(rng), _rand_nonzero(rng, 3))) * F.zeta(rng.randrange(m))
            a = F(_rand_nonzero(rng))
            b = c ** m / a
        pt = locus_point(m, a, b, c)
        locus_ranks.append(rank(pt))
        sampled.append((pt, locus_ranks[-1]))
    off_ranks = []
    for _ in range(samples):
        beta = F(_rand_nonzero(rng)) * F.zeta(rng.randrange(m))
        gamma = F(_rand_nonzero(rng)) * F.zeta(rng.randrange(m))
        u = F(_rand_nonzero(rng))
        D = F(rng.randint(-7, 7))
        pt = off_locus_point(m, beta, gamma, u, D)
        off_ranks.append(rank(pt))
        sampled.append((pt, off_ranks[-1]))
    mixed_ranks = []
    for _ in range(samples):
        # exactly one of v, w nonzero, all t_r = 0, and D^m = uz
        v, w = (F(_rand_nonzero(rng)), F.zero) if rng.random() < 0.5 else (F.zero, F(_rand_nonzero(rng)))
        u = F(_rand_nonzero(rng))
        D = F(rng.randint(-4, 4))
        pt = [u, v, w, D ** m / u, D] + [F.zero] * (m - 1)
        mixed_ranks.append(rank(pt))
        sampled.append((pt, mixed_ranks[-1]))
    origin_rank = rank([0] * ideal.layout.nvars)
    rank_one = [pt for pt, r in sampled if r == 1]
    contained = all(in_claimed_zero_set(pt) for pt in rank_one)
    result = {
        "m": m,
        "seed": seed,
        "samples": samples,
        "locus_rank_one": sum(r == 1 for r in locus_ranks),
        "off_locus_rank_one": sum(r == 1 for r in off_ranks),
        "off_locus_min_rank": min(off_ranks) if off_ranks else None,
        "mixed_rank_one": sum(r == 1 for r in mixed_ranks),
        "origin_rank": origin_rank,
        "rank_one_points": len(rank_one),
        "rank_one_points_in_claimed_zero_set": contained,
    }
    result["holds"] = (result["locus_rank_one"] == samples and result["off_locus_rank_one"] == 0
                       and origin_rank == 0 and result["rank_one_points_in_claimed_zero_set"])
    return result


# ----------------------------------------------------------------------
# socle of the quotient by the Z_ij


def socle_witness(n: int, m: int) -> dict:
    """Socle of A = T/(I + (Z_ij)), computed by linear algebra on A's monomial basis."""
    ideal = build_relation_families(n, m)
    L = ideal.layout
    basis = _skeletons(L)
    index = {e: k for k, e in enumerate(basis)}
    movers = [L.d_index] + list(range(L.nz + 1, L.nvars))

    def image(e: tuple[int, ...], v: int) -> list[Fraction]:
        f = list(e)
        f[v] += 1
        red = normal_form(Poly(L.names, {tuple(f): 1}), ideal)
        vec = [Fraction(0)] * len(basis)
        for t, c in red.terms.items():
            if any(t[: L.nz]):
                continue  # killed by the Z_ij
            vec[index[t]] += c
        return vec

    # socle = common kernel of multiplication by every variable
    rows = []
    for v in movers:
        cols = [image(e, v) for e in basis]
        for r in range(len(basis)):
            rows.append([cols[c][r] for c in range(len(basis))])
    kernel = _nullspace(rows, len(basis))
    dim = len(kernel)

    def witness(r: int) -> tuple[int, ...]:
        e = [0] * L.nvars
        e[L.d_index] = m - 1
        for t in range(1, n):
            e[L.y_index(t, r)] = 1
        return tuple(e)

    def in_socle(e: tuple[int, ...]) -> bool:
        vec = [Fraction(int(b == e)) for b in basis]
        return all(sum(a * b for a, b in zip(row, vec)) == 0 for row in rows)

    names = Poly(L.names)
    w1, w2 = witness(1), witness(2) if m > 2 else witness(1)
    socle_monomials = [names.monomial_text(e) for e in basis if in_socle(e)]
    return {
        "n": n, "m": m,
        "quotient_dimension": len(basis),
        "socle_dimension": dim,
        "socle_monomials": socle_monomials,
        "witnesses": [names.monomial_text(w1), names.monomial_text(w2)],
        "witnesses_in_socle": in_socle(w1) and in_socle(w2),
        "not_gorenstein": dim >= 2,
    }


def _nullspace(rows: list[list[Fraction]], ncols: int) -> list[list[Fraction]]:
    A = [list(r) for r in rows if any(r)]
    pivots = []
    rank = 0
    for c in range(ncols):
        piv = next((r for r in range(rank, len(A)) if A[r][c] != 0), None)
        if piv is None:
            continue
        A[rank], A[piv] = A[piv], A[rank]
        pv = A[rank][c]
        A[rank] = [x / pv for x in A[rank]]
        for r in range(len(A)):
            if r != rank and A[r][c] != 0:
                f = A[r][c]
                A[r] = [x - f * y for x, y in zip(A[r], A[rank])]
        pivots.append(c)
        rank += 1
    free = [c for c in range(ncols) if c not in pivots]
    out = []
    for fcol in free:
        v = [Fraction(0)] * ncols
        v[fcol] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -A[r][fcol]
        out.append(v)
    return out


def zero_divisor_search(n: int, m: int, trials: int = 50, seed: int = 0, max_terms: int = 3) -> dict:
    """Bounded random search for f, g outside I with f*g in I (reports, never proves)."""
    ideal = build_relation_families(n, m)
    L = ideal.layout
    rng = random.Random(seed)

    def rand_poly() -> Poly:
        p = Poly(L.names, {})
        for _ in range(rng.randint(1, max_terms)):
            e = [0] * L.nvars
            for _ in range(rng.randint(1, 3)):
                e[rng.randrange(L.nvars)] += 1
            p = p + Poly.monomial(L.names, e, _rand_nonzero(rng, 3))
        return p

    found = None
    for _ in range(trials):
        f = normal_form(rand_poly(), ideal)
        g = normal_form(rand_poly(), ideal)
        if f.is_zero() or g.is_zero():
            continue
        if normal_form(f * g, ideal).is_zero():
            found = (str(f), str(g))
            break
    return {"trials": trials, "seed": seed,
            "verdict": "zero divisor found" if found else "no counterexample found",
            "example": found}
