"""Quantum matrix algebras: presentations, PBW straightening and element arithmetic.

Generators ``x[i,j]`` are ordered row-major.  A PBW monomial is an exponent
vector over the generators of a presentation (its subset, if one was given),
read as the ordered product with factors in increasing generator order.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .coeff import (
    CyclotomicScalar,
    LaurentScalar,
    ParameterAssignment,
    _format_rational,
    cyclo,
    cyclotomic_field,
    laurent_ring,
    specialize,
)

Position = tuple[int, int]
Monomial = tuple[int, ...]


class PresentationError(ValueError):
    pass


def multiparameter_names(size: int) -> tuple[str, ...]:
    """Parameter names of the generic ring: lambda and p_ij for i < j."""
    names = ["lambda"]
    for i in range(1, size + 1):
        for j in range(i + 1, size + 1):
            names.append(f"p{i}{j}")
    return tuple(names)


def raw_rule(lam, p, a: Position, b: Position) -> list[tuple[object, Position, Position]]:
    """Straighten x_a x_b for a > b (row-major) into (coef, first, second) terms."""
    (l, m), (i, j) = a, b
    if l > i and m > j:
        return [(p[l, i] * p[j, m], b, a), ((lam - 1) * p[l, i], (i, m), (l, j))]
    if l > i:
        return [(lam * p[l, i] * p[j, m], b, a)]
    if l == i and m > j:
        return [(p[j, m], b, a)]
    raise PresentationError(f"x{a} x{b} is not an out-of-order pair")


class QMAPresentation:
    """A quantum matrix algebra (or straightening-closed subalgebra) with its rules.

    ``ring`` is the coefficient domain (a :class:`~qma.coeff.LaurentRing` or a
    :class:`~qma.coeff.CyclotomicField`); ``lam`` and ``p`` live in it.
    """

    def __init__(
        self,
        rows: int,
        cols: int,
        ring,
        lam,
        p: Mapping[Position, object],
        subset: Iterable[Position] | None = None,
        *,
        mode: str = "generic",
        assignment: ParameterAssignment | None = None,
        q=None,
        name: str = "",
    ):
        if rows < 1 or cols < 1:
            raise PresentationError("grid must be nonempty")
        self.rows, self.cols = rows, cols
        self.size = max(rows, cols)
        self.ring = ring
        self.lam = ring(lam)
        self.mode = mode
        self.assignment = assignment
        self.q = None if q is None else ring(q)
        self.name = name
        self.p = {}
        for i in range(1, self.size + 1):
            for j in range(1, self.size + 1):
                self.p[i, j] = ring(p[i, j]) if (i, j) in p else (ring.one if i == j else None)
        for (i, j), v in self.p.items():
            if v is None:
                raise PresentationError(f"p[{i},{j}] missing")
            if v * self.p.get((j, i), ring.one) != ring.one:
                raise PresentationError(f"antisymmetry violated: p[{i},{j}]*p[{j},{i}] != 1")
        if mode == "cyclotomic" and self.lam * self.lam == ring.one:
            raise PresentationError("lambda^2 = 1 is excluded")
        grid = [(i, j) for i in range(1, rows + 1) for j in range(1, cols + 1)]
        if subset is None:
            self.positions: tuple[Position, ...] = tuple(grid)
            self.subset = None
        else:
            sub = {tuple(s) for s in subset}
            bad = sub - set(grid)
            if bad:
                raise PresentationError(f"subset positions outside the grid: {sorted(bad)}")
            self.positions = tuple(pos for pos in grid if pos in sub)
            self.subset = self.positions
        self.index = {pos: k for k, pos in enumerate(self.positions)}
        self.ngens = len(self.positions)
        self.rules: dict[tuple[int, int], tuple[tuple[Monomial, object], ...]] = {}
        for ia, a in enumerate(self.positions):
            for ib in range(ia):
                b = self.positions[ib]
                terms = []
                for coef, u, v in raw_rule(self.lam, self.p, a, b):
                    if coef == 0:
                        continue
                    if u not in self.index or v not in self.index:
                        raise PresentationError(
                            f"subset not straightening-closed: x[{a[0]},{a[1]}]*x[{b[0]},{b[1]}] "
                            f"produces x[{u[0]},{u[1]}]*x[{v[0]},{v[1]}]"
                        )
                    e = [0] * self.ngens
                    e[self.index[u]] += 1
                    e[self.index[v]] += 1
                    terms.append((tuple(e), coef))
                self.rules[ia, ib] = tuple(terms)
        self._zero_mono = (0,) * self.ngens
        self._suffix_memo: dict[tuple[Monomial, int], dict] = {}
        # x_k x_g = gamma x_g x_k exactly (no lower terms) for these pairs k > g
        self._pure: dict[tuple[int, int], object] = {}
        for (ia, ib), terms in self.rules.items():
            if len(terms) == 1 and terms[0][0][ia] == 1 and terms[0][0][ib] == 1:
                self._pure[ia, ib] = terms[0][1]
        self._pure_powers: dict[tuple[int, int, int], object] = {}

    # ------------------------------------------------------------------
    # descriptive helpers

    @property
    def is_single_parameter(self) -> bool:
        return self.q is not None

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols and self.subset is None

    def __repr__(self) -> str:
        sub = "" if self.subset is None else f", subset of {self.ngens}"
        return f"QMAPresentation({self.rows}x{self.cols}, {self.mode}{sub})"

    def same_as(self, other: "QMAPresentation") -> bool:
        return other is self or (
            other.positions == self.positions
            and other.ring == self.ring
            and other.lam == self.lam
            and other.p == self.p
        )

    def scalar(self, value):
        return self.ring(value)

    # ------------------------------------------------------------------
    # constructors of elements

    def zero(self) -> "AlgebraElement":
        return AlgebraElement(self, {})

    def one(self) -> "AlgebraElement":
        return AlgebraElement(self, {self._zero_mono: self.ring.one})

    def const(self, c) -> "AlgebraElement":
        c = self.ring(c)
        return AlgebraElement(self, {self._zero_mono: c} if c else {})

    def x(self, i: int, j: int) -> "AlgebraElement":
        if (i, j) not in self.index:
            raise PresentationError(f"x[{i},{j}] is not a generator of {self!r}")
        e = [0] * self.ngens
        e[self.index[i, j]] = 1
        return AlgebraElement(self, {tuple(e): self.ring.one})

    def gens(self) -> list["AlgebraElement"]:
        return [self.x(*pos) for pos in self.positions]

    def monomial(self, exps: Mapping[Position, int] | Monomial, coef=None) -> "AlgebraElement":
        if isinstance(exps, tuple) and (not exps or isinstance(exps[0], int)):
            e = exps
        else:
            vec = [0] * self.ngens
            for pos, k in exps.items():
                vec[self.index[pos]] += k
            e = tuple(vec)
        c = self.ring.one if coef is None else self.ring(coef)
        return AlgebraElement(self, {e: c} if c else {})

    # ------------------------------------------------------------------
    # straightening engine

    def _mono_times_gen(self, mono: Monomial, g: int) -> dict:
        n = self.ngens
        last = n - 1
        while last >= 0 and mono[last] == 0:
            last -= 1
        if last <= g:
            e = list(mono)
            e[g] += 1
            return {tuple(e): self.ring.one}
        # prefix uses generators <= g, every term of suffix*x_g uses generators >= g
        prefix = mono[: g + 1] + (0,) * (n - g - 1)
        suffix = (0,) * (g + 1) + mono[g + 1:]
        out = {}
        for t, c in self._suffix_times_gen(suffix, g).items():
            out[tuple(a + b for a, b in zip(prefix, t))] = c
        return out

    def _suffix_times_gen(self, suffix: Monomial, g: int) -> dict:
        key = (suffix, g)
        hit = self._suffix_memo.get(key)
        if hit is not None:
            return hit
        k = self.ngens - 1
        while suffix[k] == 0:
            k -= 1
        rest = list(suffix)
        rest[k] -= 1
        rest = tuple(rest)
        out: dict = {}
        for mono2, coef in self.rules[k, g]:
            for t, c in self._mul_mono(rest, mono2).items():
                v = out.get(t)
                v = coef * c if v is None else v + coef * c
                if v:
                    out[t] = v
                else:
                    out.pop(t, None)
        self._suffix_memo[key] = out
        return out

    def _pure_product(self, a: Monomial, b: Monomial):
        """Scalar c with x^a x^b = c x^(a+b) when only pure swaps are needed, else None."""
        coef = self.ring.one
        for g, eb in enumerate(b):
            if not eb:
                continue
            for k in range(g + 1, self.ngens):
                ea = a[k]
                if not ea:
                    continue
                gamma = self._pure.get((k, g))
                if gamma is None:
                    return None
                key = (k, g, ea * eb)
                pw = self._pure_powers.get(key)
                if pw is None:
                    pw = self._pure_powers[key] = gamma ** (ea * eb)
                coef = coef * pw
        return coef

    def _mul_mono(self, a: Monomial, b: Monomial) -> dict:
        coef = self._pure_product(a, b)
        if coef is not None:
            return {tuple(x + y for x, y in zip(a, b)): coef}
        cur = {a: self.ring.one}
        for g, k in enumerate(b):
            for _ in range(k):
                nxt: dict = {}
                for mono, c in cur.items():
                    for t, c2 in self._mono_times_gen(mono, g).items():
                        v = nxt.get(t)
                        v = c * c2 if v is None else v + c * c2
                        if v:
                            nxt[t] = v
                        else:
                            nxt.pop(t, None)
                cur = nxt
        return cur

    def clear_cache(self) -> None:
        self._suffix_memo.clear()

    # ------------------------------------------------------------------

    def normal_form(self, word: Sequence) -> "AlgebraElement":
        """Normal form of a word of generator positions, optionally led by a scalar.

        ``word`` items are positions ``(i, j)``; a leading non-tuple item is
        taken as a coefficient.
        """
        coef = self.ring.one
        items = list(word)
        if items and not isinstance(items[0], tuple):
            coef = self.ring(items.pop(0))
        result = self.const(coef)
        for pos in items:
            result = result * self.x(*pos)
        return result

    def rule_element(self, a: Position, b: Position) -> "AlgebraElement":
        """Right-hand side of the straightening rule for x_a x_b (a > b)."""
        ia, ib = self.index[a], self.index[b]
        if ia <= ib:
            raise PresentationError("rule requested for an in-order pair")
        return AlgebraElement(self, dict(self.rules[ia, ib]))

    def rule_table(self) -> dict[tuple[Position, Position], dict[tuple[Position, ...], object]]:
        """Rules keyed by positions, each right-hand side keyed by generator words."""
        table = {}
        for (ia, ib), terms in self.rules.items():
            rhs = {}
            for mono, c in terms:
                rhs[self.word_of(mono)] = c
            table[self.positions[ia], self.positions[ib]] = rhs
        return table

    def word_of(self, mono: Monomial) -> tuple[Position, ...]:
        out = []
        for k, e in enumerate(mono):
            out.extend([self.positions[k]] * e)
        return tuple(out)

    def to_json(self) -> dict:
        return {"rows": self.rows, "cols": self.cols, "mode": self.mode, "name": self.name}


# ----------------------------------------------------------------------
# elements


def _is_scalar(v) -> bool:
    return isinstance(v, (int, Fraction, CyclotomicScalar, LaurentScalar))


class AlgebraElement:
    """Finite linear combination of PBW monomials in normal form."""

    __slots__ = ("P", "terms")

    def __init__(self, P: QMAPresentation, terms: dict):
        self.P = P
        self.terms = terms

    def _check(self, other: "AlgebraElement") -> None:
        if other.P is not self.P and not self.P.same_as(other.P):
            raise PresentationError("presentation mismatch")

    def _lift(self, other) -> "AlgebraElement":
        if isinstance(other, AlgebraElement):
            self._check(other)
            return other
        if _is_scalar(other):
            return self.P.const(other)
        return NotImplemented

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset((m, hash(c)) for m, c in self.terms.items()))

    def __neg__(self) -> "AlgebraElement":
        return AlgebraElement(self.P, {m: -c for m, c in self.terms.items()})

    def __add__(self, other) -> "AlgebraElement":
        other = self._lift(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m)
            v = c if v is None else v + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return AlgebraElement(self.P, out)

    __radd__ = __add__

    def __sub__(self, other) -> "AlgebraElement":
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> "AlgebraElement":
        return (-self) + other

    def scale(self, c) -> "AlgebraElement":
        c = self.P.ring(c)
        if not c:
            return self.P.zero()
        out = {}
        for m, v in self.terms.items():
            w = v * c
            if w:
                out[m] = w
        return AlgebraElement(self.P, out)

    def __mul__(self, other) -> "AlgebraElement":
        if _is_scalar(other):
            return self.scale(other)
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        self._check(other)
        P = self.P
        out: dict = {}
        for ma, ca in self.terms.items():
            for mb, cb in other.terms.items():
                cab = ca * cb
                for t, c in P._mul_mono(ma, mb).items():
                    v = out.get(t)
                    v = cab * c if v is None else v + cab * c
                    if v:
                        out[t] = v
                    else:
                        out.pop(t, None)
        return AlgebraElement(P, out)

    def __rmul__(self, other) -> "AlgebraElement":
        if _is_scalar(other):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, k: int) -> "AlgebraElement":
        if k < 0:
            raise ValueError("negative powers are not defined")
        result = self.P.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # ------------------------------------------------------------------

    def degree(self) -> int:
        return max((sum(m) for m in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(m) for m in self.terms}) <= 1

    def component(self, d: int) -> "AlgebraElement":
        return AlgebraElement(self.P, {m: c for m, c in self.terms.items() if sum(m) == d})

    def coefficient(self, mono: Monomial):
        return self.terms.get(mono, self.P.ring.zero)

    def leading(self) -> tuple[Monomial, object]:
        """Row-major lex-largest monomial (x11 > x12 > ...) with its coefficient."""
        m = max(self.terms)
        return m, self.terms[m]

    def map_coefficients(self, f, P: QMAPresentation) -> "AlgebraElement":
        out = {}
        for m, c in self.terms.items():
            v = f(c)
            if v:
                out[m] = v
        return AlgebraElement(P, out)

    def __repr__(self) -> str:
        return f"AlgebraElement({self})"

    def __str__(self) -> str:
        return format_element(self)


def commutator(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    return a * b - b * a


def multiply(P: QMAPresentation, a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    if a.P is not P and not P.same_as(a.P):
        raise PresentationError("presentation mismatch")
    return a * b


def normal_form(P: QMAPresentation, word: Sequence) -> AlgebraElement:
    return P.normal_form(word)


# ----------------------------------------------------------------------
# printing


def format_monomial(P: QMAPresentation, mono: Monomial) -> str:
    parts = []
    for k, e in enumerate(mono):
        if e:
            i, j = P.positions[k]
            parts.append(f"x[{i},{j}]" if e == 1 else f"x[{i},{j}]^{e}")
    return "*".join(parts)


def _coef_sign_and_text(c) -> tuple[bool, str]:
    """(negative?, magnitude text); compound coefficients are parenthesised
    with the sign of their first printed term pulled out."""
    if isinstance(c, (int, Fraction)):
        return c < 0, _format_rational(abs(c))
    if isinstance(c, LaurentScalar):
        lead = c.terms[max(c.terms)]
    elif isinstance(c, CyclotomicScalar):
        lead = next(v for v in c.coords if v)
    else:
        return False, str(c)
    neg = lead < 0
    mag = -c if neg else c
    text = str(mag)
    single = len(c.terms) == 1 if isinstance(c, LaurentScalar) else sum(1 for v in c.coords if v) == 1
    return neg, text if single else f"({text})"


def format_element(a: AlgebraElement) -> str:
    if not a.terms:
        return "0"
    out = []
    for idx, m in enumerate(sorted(a.terms, reverse=True)):
        neg, ctext = _coef_sign_and_text(a.terms[m])
        mtext = format_monomial(a.P, m)
        if not mtext:
            body = ctext
        elif ctext == "1":
            body = mtext
        else:
            body = f"{ctext}*{mtext}"
        if idx == 0:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f" - {body}" if neg else f" + {body}")
    return "".join(out)


# ----------------------------------------------------------------------
# bigrading


@dataclass(frozen=True)
class BiDegree:
    rowdeg: tuple[int, ...]
    coldeg: tuple[int, ...]


def monomial_bidegree(P: QMAPresentation, mono: Monomial) -> BiDegree:
    r = [0] * P.rows
    c = [0] * P.cols
    for k, e in enumerate(mono):
        if e:
            i, j = P.positions[k]
            r[i - 1] += e
            c[j - 1] += e
    return BiDegree(tuple(r), tuple(c))


def bidegree(P: QMAPresentation, a: AlgebraElement) -> BiDegree | str:
    """Common bidegree of the terms of ``a``, or ``"inhomogeneous"``.

    The zero element has no bidegree and is reported as ``"zero"``.
    """
    if not a.terms:
        return "zero"
    degs = {monomial_bidegree(P, m) for m in a.terms}
    if len(degs) > 1:
        return "inhomogeneous"
    return degs.pop()


# ----------------------------------------------------------------------
# standard presentations


def generic_multiparameter(rows: int, cols: int | None = None, subset=None) -> QMAPresentation:
    """O_{lambda,p} with symbolic lambda and p_ij (i < j), p_ji = p_ij^-1."""
    cols = rows if cols is None else cols
    size = max(rows, cols)
    R = laurent_ring(multiparameter_names(size))
    p = {}
    for i in range(1, size + 1):
        for j in range(1, size + 1):
            if i < j:
                p[i, j] = R.gen(f"p{i}{j}")
            elif i > j:
                p[i, j] = R.gen(f"p{j}{i}", -1)
    return QMAPresentation(rows, cols, R, R.gen("lambda"), p, subset, mode="generic",
                           name="generic multiparameter")


def cyclotomic_multiparameter(
    rows: int, cols: int | None, level: int, lambda_exp: int, p_exps: Mapping[Position, int],
    subset=None,
) -> QMAPresentation:
    """O_{lambda,p} with lambda = zeta^lambda_exp and p_ij = zeta^p_exps[i,j].

    ``p_exps`` may list only i < j entries; the others follow by antisymmetry.
    """
    cols = rows if cols is None else cols
    size = max(rows, cols)
    exps = {}
    for i in range(1, size + 1):
        for j in range(i + 1, size + 1):
            k = p_exps.get((i, j))
            kt = p_exps.get((j, i))
            if k is None and kt is None:
                k = 0
            elif k is None:
                k = -kt
            elif kt is not None and (k + kt) % level:
                raise PresentationError(f"antisymmetry violated at p[{i},{j}]")
            exps[f"p{i}{j}"] = k
        if p_exps.get((i, i), 0) % level:
            raise PresentationError(f"p[{i},{i}] must be 1")
    exps["lambda"] = lambda_exp
    try:
        a = ParameterAssignment(level, exps)
    except ValueError as err:
        raise PresentationError(str(err)) from None
    F = cyclotomic_field(level)
    p = {}
    for i in range(1, size + 1):
        for j in range(1, size + 1):
            if i < j:
                p[i, j] = F.zeta(exps[f"p{i}{j}"])
            elif i > j:
                p[i, j] = F.zeta(-exps[f"p{j}{i}"])
    return QMAPresentation(rows, cols, F, F.zeta(lambda_exp), p, subset, mode="cyclotomic",
                           assignment=a, name="cyclotomic multiparameter")


def single_parameter(n: int, q=None, *, cols: int | None = None, subset=None) -> QMAPresentation:
    """O_q with p_ij = q (i > j) and lambda = q^-2.

    ``q`` is either a scalar (LaurentScalar or CyclotomicScalar) or ``None``
    for a generic symbol.  An integer ``q`` is read as the level m with q = zeta_m.
    """
    if q is None:
        q = laurent_ring(("q",)).gen("q")
    elif isinstance(q, int):
        q = cyclo(q, 1)
    if isinstance(q, CyclotomicScalar):
        ring = q.field
        mode = "cyclotomic"
        k = q.root_exponent()
        if k is None:
            raise PresentationError("q must be a root of unity zeta^k")
        if (4 * k) % q.level == 0:
            raise PresentationError("q = +-1 or q^2 = -1 gives lambda^2 = 1")
        assignment = ParameterAssignment(q.level, {"q": k})
    else:
        ring = q.ring
        mode = "generic"
        assignment = None
    cols = n if cols is None else cols
    size = max(n, cols)
    qi = q.inverse()
    p = {}
    for i in range(1, size + 1):
        for j in range(1, size + 1):
            if i > j:
                p[i, j] = q
            elif i < j:
                p[i, j] = qi
    return QMAPresentation(n, cols, ring, qi * qi, p, subset, mode=mode,
                           assignment=assignment, q=q, name="single parameter")


def build_presentation(r: int, c: int, lam, p: Mapping[Position, object], subset=None,
                       ring=None) -> QMAPresentation:
    """Presentation from explicit scalars; ``ring`` defaults to that of ``lam``."""
    if ring is None:
        if isinstance(lam, CyclotomicScalar):
            ring = lam.field
        elif isinstance(lam, LaurentScalar):
            ring = lam.ring
        else:
            raise PresentationError("cannot infer the coefficient domain")
    mode = "cyclotomic" if isinstance(lam, CyclotomicScalar) else "generic"
    return QMAPresentation(r, c, ring, lam, p, subset, mode=mode)


# the subalgebras of O_q(M_3) used for automorphism and center checks
SUBSETS: dict[str, tuple[int, int, tuple[Position, ...]]] = {
    "B1": (2, 3, tuple((i, j) for i in (1, 2) for j in (1, 2, 3))),
    "B2": (3, 3, tuple((i, j) for i in (1, 2) for j in (1, 2, 3)) + ((3, 1),)),
    "B3": (3, 3, tuple((i, j) for i in (1, 2) for j in (1, 2, 3)) + ((3, 1), (3, 2))),
    "C": (3, 3, tuple((i, j) for i in (1, 2, 3) for j in (1, 2, 3) if i + j >= 4)),
}


def named_subalgebra(name: str, q=None) -> QMAPresentation:
    rows, cols, subset = SUBSETS[name]
    if name == "B1":
        P = single_parameter(rows, q, cols=cols)
    else:
        P = single_parameter(rows, q, cols=cols, subset=subset)
    P.name = name
    return P


# ----------------------------------------------------------------------
# JSON spec files


def presentation_from_spec(spec: Mapping) -> QMAPresentation:
    """Build a presentation from the JSON algebra-spec dictionary."""
    rows = int(spec["rows"])
    cols = int(spec.get("cols", rows))
    mode = spec.get("mode", "generic")
    subset = spec.get("subset")
    if subset is not None:
        subset = [tuple(s) for s in subset]
    if mode == "generic":
        if spec.get("single_parameter"):
            return single_parameter(rows, None, cols=cols, subset=subset)
        return generic_multiparameter(rows, cols, subset)
    if mode != "cyclotomic":
        raise PresentationError(f"unknown mode {mode!r}")
    level = int(spec["level"])
    if "q_exp" in spec:
        return single_parameter(rows, cyclo(level, int(spec["q_exp"])), cols=cols, subset=subset)
    p_exps = {}
    mat = spec.get("p_exps", [])
    for i, row in enumerate(mat, start=1):
        for j, k in enumerate(row, start=1):
            p_exps[i, j] = int(k)
    for i, j in list(p_exps):
        if (j, i) in p_exps and (p_exps[i, j] + p_exps[j, i]) % level:
            raise PresentationError(f"antisymmetry violated at p[{i},{j}]")
    upper = {(i, j): k for (i, j), k in p_exps.items() if i < j}
    lower = {(i, j): k for (i, j), k in p_exps.items() if i > j and (j, i) not in p_exps}
    return cyclotomic_multiparameter(rows, cols, level, int(spec["lambda_exp"]),
                                     {**lower, **upper}, subset)


def load_spec(path: str) -> QMAPresentation:
    with open(path) as fh:
        return presentation_from_spec(json.load(fh))


# ----------------------------------------------------------------------
# specialisation and table comparison


def specialize_presentation(P: QMAPresentation, a: ParameterAssignment) -> QMAPresentation:
    """Cyclotomic presentation obtained by evaluating the parameters of ``P``."""
    if P.mode != "generic":
        raise PresentationError("only generic presentations can be specialised")
    F = cyclotomic_field(a.level)
    p = {k: specialize(v, a) for k, v in P.p.items()}
    q = specialize(P.q, a) if P.q is not None else None
    out = QMAPresentation(P.rows, P.cols, F, specialize(P.lam, a), p, P.subset,
                          mode="cyclotomic", assignment=a, q=q, name=P.name)
    return out


def specialize_element(a: AlgebraElement, target: QMAPresentation) -> AlgebraElement:
    asg = target.assignment
    return a.map_coefficients(lambda c: specialize(c, asg), target)


def substitute_presentation(P: QMAPresentation, images: Mapping[str, object]) -> dict:
    """Rule table of ``P`` with its parameters replaced via ``images``."""
    table = {}
    for key, rhs in P.rule_table().items():
        table[key] = {w: c.substitute(images) for w, c in rhs.items()}
    return table


def single_parameter_table_matches(n: int) -> tuple[bool, list]:
    """Compare the generic single-parameter table with the multiparameter one at p_ij=q, lambda=q^-2."""
    S = single_parameter(n)
    M = generic_multiparameter(n)
    q = S.q
    images = {"lambda": q ** -2}
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            images[f"p{i}{j}"] = q ** -1
    derived = substitute_presentation(M, images)
    direct = S.rule_table()
    mismatches = []
    for key in sorted(set(derived) | set(direct)):
        a = {w: c for w, c in derived.get(key, {}).items() if c}
        b = direct.get(key, {})
        if a != b:
            mismatches.append(key)
    return not mismatches, mismatches


# ----------------------------------------------------------------------
# independent oracle: naive rewriting of words


def rewrite_word_naive(P: QMAPresentation, word: Sequence[Position], strategy: str = "leftmost",
                       rng: random.Random | None = None) -> AlgebraElement:
    """Straighten a word by rewriting one adjacent out-of-order pair at a time.

    Works directly on words (no memo, no PBW splitting); ``strategy`` is
    ``"leftmost"`` or ``"random"`` and the result must not depend on it.
    """
    idx = P.index
    table = {}
    for (a, b), rhs in P.rule_table().items():
        table[idx[a], idx[b]] = [(list(w), c) for w, c in rhs.items()]
    pending: dict[tuple[int, ...], object] = {tuple(idx[w] for w in word): P.ring.one}
    done: dict[Monomial, object] = {}
    rng = rng or random.Random(0)
    while pending:
        w, c = pending.popitem()
        spots = [k for k in range(len(w) - 1) if w[k] > w[k + 1]]
        if not spots:
            e = [0] * P.ngens
            for g in w:
                e[g] += 1
            e = tuple(e)
            v = done.get(e)
            v = c if v is None else v + c
            if v:
                done[e] = v
            else:
                done.pop(e, None)
            continue
        k = spots[0] if strategy == "leftmost" else rng.choice(spots)
        for rw, rc in table[w[k], w[k + 1]]:
            nw = w[:k] + tuple(idx[pos] for pos in rw) + w[k + 2:]
            v = pending.get(nw)
            v = c * rc if v is None else v + c * rc
            if v:
                pending[nw] = v
            else:
                pending.pop(nw, None)
    return AlgebraElement(P, done)


def random_element(P: QMAPresentation, rng: random.Random, terms: int = 3, max_deg: int = 3,
                   coeff_range: int = 3) -> AlgebraElement:
    out = P.zero()
    for _ in range(terms):
        deg = rng.randint(0, max_deg)
        word = [P.positions[rng.randrange(P.ngens)] for _ in range(deg)]
        c = rng.randint(-coeff_range, coeff_range) or 1
        out = out + P.normal_form([c] + word)
    return out


# ----------------------------------------------------------------------
# cocycle twist


def twist_check(n: int, level: int, q_exp: int, p_exps: Mapping[Position, int]) -> dict:
    """Twist O_q(M_n) by c(a,b) = prod_{i>j} (q p_ji)^{a_i b_j} and compare with O_{lambda,p}.

    lambda is q^-2 by construction.  Every ordered generator pair is compared.
    """
    F = cyclotomic_field(level)
    q = F.zeta(q_exp)
    A = single_parameter(n, q)
    M = cyclotomic_multiparameter(n, n, level, (-2 * q_exp) % level, p_exps)
    p = M.p

    def c_unit(i: int, j: int) -> CyclotomicScalar:
        # c(e_i, e_j) = q p_ji when i > j, else 1
        return q * p[j, i] if i > j else F.one

    matches = 0
    mismatches = []
    for u in M.positions:
        for v in M.positions:
            prod = A.x(*u) * A.x(*v)
            # u' * v' = c(r_u, r_v)^-1 c(c_u, c_v) (uv)'
            factor = c_unit(u[0], v[0]).inverse() * c_unit(u[1], v[1])
            twisted = {}
            for mono, coef in prod.terms.items():
                s, t = A.word_of(mono)
                # (x_s x_t)' = c(r_s, r_t) c(c_s, c_t)^-1 x'_s * x'_t
                back = c_unit(s[0], t[0]) * c_unit(s[1], t[1]).inverse()
                twisted[mono] = factor * coef * back
            target = (M.x(*u) * M.x(*v)).terms
            if {k: w for k, w in twisted.items() if w} == target:
                matches += 1
            else:
                mismatches.append([list(u), list(v)])
    total = len(M.positions) ** 2
    return {
        "n": n,
        "level": level,
        "q_exp": q_exp,
        "lambda_exp": (-2 * q_exp) % level,
        "pairs": total,
        "matching": matches,
        "mismatches": mismatches,
        "isomorphic": not mismatches,
        "summary": (f"isomorphic: all {total} generator-pair products match" if not mismatches
                    else f"not isomorphic: {len(mismatches)} of {total} products differ"),
    }


def bicharacter(level: int, q_exp: int, p_exps: Mapping[Position, int], a: Sequence[int],
                b: Sequence[int]) -> CyclotomicScalar:
    """c(a, b) = prod_{i>j} (q p_ji)^{a_i b_j} with q = zeta^q_exp, p_ji = zeta^p_exps."""
    total = 0
    n = len(a)
    for i in range(1, n + 1):
        for j in range(1, i):
            pji = p_exps.get((j, i))
            if pji is None:
                pji = -p_exps.get((i, j), 0)
            total += (q_exp + pji) * a[i - 1] * b[j - 1]
    return cyclo(level, total)


# ----------------------------------------------------------------------
# substitution of generator images


def apply_map(a: AlgebraElement, images: Mapping[Position, AlgebraElement],
              target: QMAPresentation | None = None, cache: dict | None = None) -> AlgebraElement:
    """Extend ``x_pos -> images[pos]`` multiplicatively and linearly to ``a``.

    Generators without an image map to themselves (in ``target``).  ``cache``
    may be shared across calls with the same images to reuse powers.
    """
    T = target or a.P
    cache = {} if cache is None else cache

    def power(pos: Position, k: int) -> AlgebraElement:
        key = (pos, k)
        if key not in cache:
            if k == 1:
                cache[key] = images[pos] if pos in images else T.x(*pos)
            else:
                cache[key] = power(pos, k - 1) * power(pos, 1)
        return cache[key]

    out = T.zero()
    for mono, c in a.terms.items():
        term = T.const(c) if T.ring == a.P.ring else T.const(1).scale(c)
        for k, e in enumerate(mono):
            if e:
                term = term * power(a.P.positions[k], e)
        out = out + term
    return out
