"""Exact linear algebra helpers: integer kernels, Bareiss determinants, ranks."""

from __future__ import annotations

from fractions import Fraction
from itertools import product
from typing import Callable, Sequence


# ----------------------------------------------------------------------
# integer lattices


def integer_kernel(rows: Sequence[Sequence[int]]) -> list[list[int]]:
    """Z-basis of {v in Z^k : A v = 0} by unimodular column reduction."""
    if not rows:
        return []
    A = [list(r) for r in rows]
    m, k = len(A), len(A[0])
    U = [[int(i == j) for j in range(k)] for i in range(k)]  # columns track operations

    def colop_swap(a: int, b: int) -> None:
        for r in A:
            r[a], r[b] = r[b], r[a]
        for r in U:
            r[a], r[b] = r[b], r[a]

    def colop_add(dst: int, src: int, f: int) -> None:
        # column dst += f * column src
        if f:
            for r in A:
                r[dst] += f * r[src]
            for r in U:
                r[dst] += f * r[src]

    pivot_col = 0
    for r in range(m):
        if pivot_col >= k:
            break
        # gcd-reduce entries A[r][pivot_col:] into pivot_col
        while True:
            nz = [c for c in range(pivot_col, k) if A[r][c]]
            if len(nz) <= 1:
                break
            c_min = min(nz, key=lambda c: abs(A[r][c]))
            for c in nz:
                if c != c_min:
                    colop_add(c, c_min, -(A[r][c] // A[r][c_min]))
        nz = [c for c in range(pivot_col, k) if A[r][c]]
        if nz:
            if nz[0] != pivot_col:
                colop_swap(nz[0], pivot_col)
            pivot_col += 1
    return [[U[i][c] for i in range(k)] for c in range(pivot_col, k)]


def lattice_basis(gens: Sequence[Sequence[int]], dim: int) -> list[list[int]]:
    """Row-echelon (Hermite style) basis of the lattice spanned by ``gens``."""
    B = [list(g) for g in gens if any(g)]
    out = []
    col = 0
    while B and col < dim:
        while True:
            nz = [v for v in B if v[col]]
            if len(nz) <= 1:
                break
            piv = min(nz, key=lambda v: abs(v[col]))
            for v in nz:
                if v is not piv:
                    f = v[col] // piv[col]
                    for t in range(dim):
                        v[t] -= f * piv[t]
            B = [v for v in B if any(v)]
        nz = [v for v in B if v[col]]
        if nz:
            piv = nz[0]
            B.remove(piv)
            out.append(piv if piv[col] > 0 else [-t for t in piv])
        col += 1
    # reduce entries above pivots into [0, pivot)
    for a in range(len(out)):
        pc = next(c for c in range(dim) if out[a][c])
        for b in range(a):
            f = out[b][pc] // out[a][pc]
            if f:
                out[b] = [x - f * y for x, y in zip(out[b], out[a])]
    return out


def kernel_mod(M: Sequence[Sequence[int]], L: int) -> list[list[int]]:
    """Basis of the lattice {e in Z^g : M e = 0 mod L}."""
    g = len(M)
    if g == 0:
        return []
    aug = [list(M[i]) + [L * int(i == j) for j in range(g)] for i in range(g)]
    ker = integer_kernel(aug)
    return lattice_basis([v[:g] for v in ker], g)


def lattice_index(basis: Sequence[Sequence[int]], dim: int) -> int:
    """|Z^dim / lattice| for a full-rank echelon basis."""
    if len(basis) != dim:
        return 0
    d = 1
    for r, v in enumerate(basis):
        pc = next(c for c in range(dim) if v[c])
        d *= abs(v[pc])
    return d


def count_kernel_mod_bruteforce(M: Sequence[Sequence[int]], L: int) -> int:
    """Number of e in (Z/L)^g with M e = 0 mod L, by enumeration."""
    g = len(M)
    count = 0
    for e in product(range(L), repeat=g):
        if all(sum(M[i][j] * e[j] for j in range(g)) % L == 0 for i in range(g)):
            count += 1
    return count


# ----------------------------------------------------------------------
# determinants


def bareiss_det(mat: Sequence[Sequence], one=1, exact_div: Callable | None = None):
    """Fraction-free determinant; ``exact_div(a, b)`` divides exactly (default ``//`` or ``/``)."""
    n = len(mat)
    if n == 0:
        return one
    A = [list(r) for r in mat]
    if exact_div is None:
        def exact_div(a, b):
            if isinstance(a, int) and isinstance(b, int):
                q, r = divmod(a, b)
                assert r == 0
                return q
            return a / b
    sign = 1
    prev = one
    for k in range(n - 1):
        if _is_zero(A[k][k]):
            swap = next((r for r in range(k + 1, n) if not _is_zero(A[r][k])), None)
            if swap is None:
                return one * 0
            A[k], A[swap] = A[swap], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = exact_div(A[i][j] * A[k][k] - A[i][k] * A[k][j], prev)
        prev = A[k][k]
    det = A[n - 1][n - 1]
    return det if sign == 1 else -det


def _is_zero(x) -> bool:
    if isinstance(x, (int, Fraction)):
        return x == 0
    if hasattr(x, "is_zero"):
        return x.is_zero()
    return not x


def det_mod_p(mat: Sequence[Sequence[int]], p: int) -> int:
    n = len(mat)
    A = [[x % p for x in r] for r in mat]
    det = 1
    for c in range(n):
        piv = next((r for r in range(c, n) if A[r][c]), None)
        if piv is None:
            return 0
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            det = -det
        pv = A[c][c]
        det = det * pv % p
        inv = pow(pv, p - 2, p)
        for r in range(c + 1, n):
            f = A[r][c] * inv % p
            if f:
                Ar, Ac = A[r], A[c]
                for j in range(c, n):
                    Ar[j] = (Ar[j] - f * Ac[j]) % p
    return det % p


def field_rank(mat: Sequence[Sequence], zero_test=_is_zero) -> int:
    """Rank over a field whose elements support +, -, *, / (exact)."""
    A = [list(r) for r in mat]
    if not A:
        return 0
    rank = 0
    ncols = len(A[0])
    for c in range(ncols):
        piv = next((r for r in range(rank, len(A)) if not zero_test(A[r][c])), None)
        if piv is None:
            continue
        A[rank], A[piv] = A[piv], A[rank]
        pv = A[rank][c]
        for r in range(len(A)):
            if r != rank and not zero_test(A[r][c]):
                f = A[r][c] / pv
                A[r] = [x - f * y for x, y in zip(A[r], A[rank])]
        rank += 1
    return rank


def connected_blocks(n: int, nonzero: Callable[[int, int], bool]) -> list[tuple[list[int], list[int]]]:
    """Split the support of an n x n matrix into independent (rows, cols) blocks.

    Rows and columns are joined when the (row, col) entry is nonzero; the
    determinant is then the signed product of the block determinants.
    """
    parent = list(range(2 * n))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for i in range(n):
        for j in range(n):
            if nonzero(i, j):
                ra, rb = find(i), find(n + j)
                if ra != rb:
                    parent[ra] = rb
    groups: dict[int, tuple[list[int], list[int]]] = {}
    for v in range(2 * n):
        r = find(v)
        g = groups.setdefault(r, ([], []))
        (g[0] if v < n else g[1]).append(v if v < n else v - n)
    return [g for g in groups.values()]


def permutation_sign(perm: Sequence[int]) -> int:
    seen = [False] * len(perm)
    sign = 1
    for i in range(len(perm)):
        if not seen[i]:
            j, length = i, 0
            while not seen[j]:
                seen[j] = True
                j = perm[j]
                length += 1
            if length % 2 == 0:
                sign = -sign
    return sign


def block_det(mat: Sequence[Sequence], det_fn, one=1):
    """Determinant via the connected-block decomposition of the support."""
    n = len(mat)
    blocks = connected_blocks(n, lambda i, j: not _is_zero(mat[i][j]))
    result = one
    order_rows: list[int] = []
    order_cols: list[int] = []
    for rows, cols in blocks:
        if len(rows) != len(cols):
            return one * 0
        sub = [[mat[i][j] for j in cols] for i in rows]
        result = result * det_fn(sub)
        order_rows.extend(rows)
        order_cols.extend(cols)
    # permuting rows and columns into block order changes the sign
    rp = permutation_sign(order_rows)
    cp = permutation_sign(order_cols)
    return result if rp * cp == 1 else -result
