"""Sparse commutative polynomials with exact coefficients."""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Iterable, Sequence


def _norm(x):
    if type(x) is Fraction and x.denominator == 1:
        return x.numerator
    return x


class Poly:
    """Polynomial over a fixed tuple of variable names.

    Coefficients are ints/Fractions or any exact field element supporting
    ``+ - * /`` (e.g. cyclotomic scalars).
    """

    __slots__ = ("names", "terms")

    def __init__(self, names: Sequence[str], terms: dict | None = None):
        self.names = tuple(names)
        self.terms = terms if terms is not None else {}

    # construction -----------------------------------------------------

    @classmethod
    def var(cls, names: Sequence[str], name: str, power: int = 1) -> "Poly":
        e = [0] * len(names)
        e[list(names).index(name)] = power
        return cls(names, {tuple(e): 1})

    @classmethod
    def const(cls, names: Sequence[str], c) -> "Poly":
        return cls(names, {(0,) * len(names): c} if c else {})

    @classmethod
    def monomial(cls, names: Sequence[str], exps: Sequence[int], c=1) -> "Poly":
        return cls(names, {tuple(exps): c} if c else {})

    def gens(self) -> list["Poly"]:
        return [Poly.var(self.names, n) for n in self.names]

    # arithmetic -------------------------------------------------------

    def _lift(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.names != self.names:
                raise ValueError("variable mismatch")
            return other
        return Poly.const(self.names, other)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Poly):
            other = Poly.const(self.names, other)
        return self.names == other.names and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def __neg__(self) -> "Poly":
        return Poly(self.names, {e: -c for e, c in self.terms.items()})

    def __add__(self, other) -> "Poly":
        other = self._lift(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e)
            v = c if v is None else v + c
            if v:
                out[e] = _norm(v)
            else:
                out.pop(e, None)
        return Poly(self.names, out)

    __radd__ = __add__

    def __sub__(self, other) -> "Poly":
        return self + (-self._lift(other))

    def __rsub__(self, other) -> "Poly":
        return (-self) + other

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            if not other:
                return Poly(self.names, {})
            return Poly(self.names, {e: _norm(c * other) for e, c in self.terms.items()})
        other = self._lift(other)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = out.get(e)
                v = c1 * c2 if v is None else v + c1 * c2
                if v:
                    out[e] = v
                else:
                    out.pop(e, None)
        return Poly(self.names, {e: _norm(c) for e, c in out.items()})

    def __rmul__(self, other) -> "Poly":
        return self * other

    def __pow__(self, k: int) -> "Poly":
        if k < 0:
            raise ValueError("negative power")
        result = Poly.const(self.names, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def mul_monomial(self, exps: Sequence[int], c=1) -> "Poly":
        return Poly(self.names, {tuple(a + b for a, b in zip(e, exps)): _norm(v * c)
                                 for e, v in self.terms.items()})

    # inspection -------------------------------------------------------

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def degree_in(self, k: int) -> int:
        return max((e[k] for e in self.terms), default=-1)

    def leading(self, key: Callable) -> tuple[tuple[int, ...], object]:
        e = max(self.terms, key=key)
        return e, self.terms[e]

    def homogeneous_part(self, d: int, weights: Sequence[int] | None = None) -> "Poly":
        w = weights or (1,) * len(self.names)
        return Poly(self.names, {e: c for e, c in self.terms.items()
                                 if sum(a * b for a, b in zip(e, w)) == d})

    def top_form(self, weights: Sequence[int] | None = None) -> "Poly":
        w = weights or (1,) * len(self.names)
        d = max(sum(a * b for a, b in zip(e, w)) for e in self.terms)
        return self.homogeneous_part(d, w)

    def diff(self, k: int) -> "Poly":
        out = {}
        for e, c in self.terms.items():
            if e[k]:
                f = list(e)
                f[k] -= 1
                out[tuple(f)] = _norm(c * e[k])
        return Poly(self.names, out)

    def evaluate(self, point: Sequence, one=1):
        total = one * 0
        for e, c in self.terms.items():
            term = one * c
            for x, k in zip(point, e):
                if k:
                    term = term * x ** k
            total = total + term
        return total

    def substitute(self, images: Sequence["Poly"], target_names: Sequence[str]) -> "Poly":
        out = Poly(target_names, {})
        cache: dict = {}
        for e, c in self.terms.items():
            term = Poly.const(target_names, c)
            for k, p in enumerate(e):
                if p:
                    key = (k, p)
                    if key not in cache:
                        cache[key] = images[k] ** p
                    term = term * cache[key]
            out = out + term
        return out

    def is_scalar_multiple_of(self, other: "Poly"):
        """c with self == c * other, or None."""
        if not other.terms:
            return None if self.terms else 0
        if set(self.terms) != set(other.terms):
            return None
        e0 = next(iter(other.terms))
        c = _div(self.terms[e0], other.terms[e0])
        for e, v in other.terms.items():
            if self.terms[e] != v * c:
                return None
        return _norm(c)

    def monomial_text(self, e: Sequence[int]) -> str:
        parts = []
        for name, k in zip(self.names, e):
            if k:
                parts.append(name if k == 1 else f"{name}^{k}")
        return "*".join(parts)

    def __repr__(self) -> str:
        return f"Poly({self})"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        pieces = []
        for idx, e in enumerate(sorted(self.terms, reverse=True)):
            c = self.terms[e]
            mono = self.monomial_text(e)
            neg = _rational(c) and c < 0
            mag = -c if neg else c
            if not _rational(mag):
                ctext = f"({mag})"
            elif isinstance(mag, Fraction):
                ctext = f"({mag})"
            else:
                ctext = str(mag)
            if mono:
                body = mono if ctext == "1" else f"{ctext}*{mono}"
            else:
                body = ctext
            if idx == 0:
                pieces.append(f"-{body}" if neg else body)
            else:
                pieces.append(f" - {body}" if neg else f" + {body}")
        return "".join(pieces)


def _rational(c) -> bool:
    return isinstance(c, (int, Fraction))


# ----------------------------------------------------------------------
# division


def reduce_poly(f: Poly, basis: Sequence[Poly], key: Callable) -> Poly:
    """Full multivariate reduction of f by ``basis`` under the order given by ``key``."""
    leads = []
    for g in basis:
        e, c = g.leading(key)
        leads.append((e, c, g))
    remainder: dict = {}
    work = dict(f.terms)
    while work:
        e = max(work, key=key)
        c = work.pop(e)
        for le, lc, g in leads:
            if all(a >= b for a, b in zip(e, le)):
                shift = tuple(a - b for a, b in zip(e, le))
                factor = _div(c, lc)
                for ge, gc in g.terms.items():
                    if ge == le:
                        continue
                    t = tuple(a + b for a, b in zip(ge, shift))
                    v = work.get(t)
                    v = -factor * gc if v is None else v - factor * gc
                    if v:
                        work[t] = _norm(v)
                    else:
                        work.pop(t, None)
                break
        else:
            remainder[e] = c
    return Poly(f.names, remainder)


def _div(a, b):
    if _rational(a) and _rational(b):
        return _norm(Fraction(a) / b)
    return a / b


def s_polynomial(f: Poly, g: Poly, key: Callable) -> Poly:
    ef, cf = f.leading(key)
    eg, cg = g.leading(key)
    lcm = tuple(max(a, b) for a, b in zip(ef, eg))
    sf = tuple(a - b for a, b in zip(lcm, ef))
    sg = tuple(a - b for a, b in zip(lcm, eg))
    return f.mul_monomial(sf, _div(1, cf)) - g.mul_monomial(sg, _div(1, cg))


def lex_key(e: tuple[int, ...]) -> tuple[int, ...]:
    return e


def divide_exact(a: Poly, b: Poly) -> Poly:
    """Quotient a / b, raising ``ArithmeticError`` if b does not divide a."""
    if not b.terms:
        raise ZeroDivisionError("division by the zero polynomial")
    le, lc = b.leading(lex_key)
    quotient: dict = {}
    work = dict(a.terms)
    while work:
        e = max(work)
        c = work[e]
        if not all(x >= y for x, y in zip(e, le)):
            raise ArithmeticError("inexact polynomial division")
        shift = tuple(x - y for x, y in zip(e, le))
        factor = _div(c, lc)
        quotient[shift] = factor
        for be, bc in b.terms.items():
            t = tuple(x + y for x, y in zip(be, shift))
            v = work.get(t, 0) - factor * bc
            if v:
                work[t] = _norm(v)
            else:
                work.pop(t, None)
    return Poly(a.names, quotient)


def monomials_of_degree(nvars: int, degree: int, weights: Sequence[int] | None = None) -> Iterable[tuple[int, ...]]:
    """Exponent vectors of weighted degree exactly ``degree``."""
    w = weights or (1,) * nvars

    def rec(k: int, left: int):
        if k == nvars - 1:
            if left % w[k] == 0:
                yield (left // w[k],)
            return
        for e in range(left // w[k] + 1):
            for rest in rec(k + 1, left - e * w[k]):
                yield (e,) + rest

    if nvars == 0:
        if degree == 0:
            yield ()
        return
    yield from rec(0, degree)
