"""Exact coefficient domains.

Two kinds of scalars are used throughout the package:

* :class:`CyclotomicScalar` -- an element of Q(zeta_L), stored as its residue
  modulo the L-th cyclotomic polynomial, so equal values have equal
  representations.
* :class:`LaurentScalar` -- a Laurent polynomial with rational coefficients in
  named parameters (``q``, ``lambda``, ``p12``, ...).

:func:`specialize` maps the second kind onto the first.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Mapping, Union

Rational = Union[int, Fraction]


def _norm(x: Rational) -> Rational:
    if type(x) is Fraction and x.denominator == 1:
        return x.numerator
    return x


def _divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


@lru_cache(maxsize=None)
def cyclotomic_polynomial(level: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_level, lowest degree first."""
    if level < 1:
        raise ValueError("level must be positive")
    # start from x^L - 1 and divide out Phi_d for proper divisors d
    num = [-1] + [0] * (level - 1) + [1]
    for d in _divisors(level)[:-1]:
        den = cyclotomic_polynomial(d)
        quot = [0] * (len(num) - len(den) + 1)
        rem = list(num)
        for k in range(len(quot) - 1, -1, -1):
            c = rem[k + len(den) - 1]
            quot[k] = c
            if c:
                for i, dc in enumerate(den):
                    rem[k + i] -= c * dc
        num = quot
    return tuple(num)


class CyclotomicField:
    """The field Q(zeta_L) with power basis 1, zeta, ..., zeta^(phi(L)-1)."""

    def __init__(self, level: int):
        if level < 1:
            raise ValueError("level must be positive")
        self.level = level
        self.poly = cyclotomic_polynomial(level)
        self.degree = len(self.poly) - 1
        phi = self.degree
        # x^k mod Phi_L for 0 <= k < max(2*phi - 1, level)
        rows: list[tuple[int, ...]] = []
        cur = [0] * phi
        cur[0] = 1
        for _ in range(max(2 * phi - 1, level)):
            rows.append(tuple(cur))
            top = cur[-1]
            cur = [0] + cur[:-1]
            if top:
                for i in range(phi):
                    cur[i] -= top * self.poly[i]
        self._powers = rows
        self.zero = CyclotomicScalar(self, (0,) * phi)
        self.one = CyclotomicScalar(self, (1,) + (0,) * (phi - 1))

    def __repr__(self) -> str:
        return f"CyclotomicField({self.level})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, CyclotomicField) and other.level == self.level

    def __hash__(self) -> int:
        return hash(("cyclotomic", self.level))

    def __call__(self, value: object) -> "CyclotomicScalar":
        if isinstance(value, CyclotomicScalar):
            if value.field.level == self.level:
                return value
            return value.embed(self.level)
        if isinstance(value, (int, Fraction)):
            return CyclotomicScalar(self, (_norm(value),) + (0,) * (self.degree - 1))
        raise TypeError(f"cannot coerce {value!r} into {self}")

    def zeta(self, k: int = 1) -> "CyclotomicScalar":
        return CyclotomicScalar(self, self._powers[k % self.level])

    def from_power_sums(self, vec: list) -> "CyclotomicScalar":
        """Element sum_k vec[k] * zeta^k for a length-L vector."""
        phi = self.degree
        out = [0] * phi
        for k, c in enumerate(vec):
            if c:
                row = self._powers[k]
                for i in range(phi):
                    if row[i]:
                        out[i] += c * row[i]
        return CyclotomicScalar(self, tuple(_norm(x) for x in out))


@lru_cache(maxsize=None)
def cyclotomic_field(level: int) -> CyclotomicField:
    return CyclotomicField(level)


class CyclotomicScalar:
    __slots__ = ("field", "coords")

    def __init__(self, field: CyclotomicField, coords: tuple):
        self.field = field
        self.coords = coords

    @property
    def level(self) -> int:
        return self.field.level

    def _coerce(self, other: object) -> "CyclotomicScalar":
        if isinstance(other, CyclotomicScalar):
            if other.field.level != self.field.level:
                raise ValueError("cyclotomic level mismatch")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field(other)
        return NotImplemented

    def is_zero(self) -> bool:
        return not any(self.coords)

    def __bool__(self) -> bool:
        return any(self.coords)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = self.field(other)
        if not isinstance(other, CyclotomicScalar):
            return NotImplemented
        return self.field.level == other.field.level and self.coords == other.coords

    def __hash__(self) -> int:
        if not any(self.coords[1:]):
            return hash(self.coords[0])
        return hash((self.field.level, self.coords))

    def __neg__(self) -> "CyclotomicScalar":
        return CyclotomicScalar(self.field, tuple(-c for c in self.coords))

    def __add__(self, other: object) -> "CyclotomicScalar":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return CyclotomicScalar(
            self.field, tuple(_norm(a + b) for a, b in zip(self.coords, other.coords))
        )

    __radd__ = __add__

    def __sub__(self, other: object) -> "CyclotomicScalar":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return CyclotomicScalar(
            self.field, tuple(_norm(a - b) for a, b in zip(self.coords, other.coords))
        )

    def __rsub__(self, other: object) -> "CyclotomicScalar":
        return (-self) + other

    def __mul__(self, other: object) -> "CyclotomicScalar":
        if isinstance(other, (int, Fraction)):
            return CyclotomicScalar(self.field, tuple(_norm(a * other) for a in self.coords))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.coords, other.coords
        phi = self.field.degree
        if phi == 1:
            return CyclotomicScalar(self.field, (_norm(a[0] * b[0]),))
        conv = [0] * (2 * phi - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        conv[i + j] += x * y
        out = list(conv[:phi])
        powers = self.field._powers
        for k in range(phi, 2 * phi - 1):
            c = conv[k]
            if c:
                row = powers[k]
                for i in range(phi):
                    if row[i]:
                        out[i] += c * row[i]
        return CyclotomicScalar(self.field, tuple(_norm(x) for x in out))

    __rmul__ = __mul__

    def inverse(self) -> "CyclotomicScalar":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        phi = self.field.degree
        # columns of the multiplication-by-self matrix are self * zeta^j
        cols = []
        basis = self.field.one
        z = self.field.zeta(1)
        for _ in range(phi):
            cols.append((self * basis).coords)
            basis = basis * z
        mat = [[Fraction(cols[j][i]) for j in range(phi)] + [Fraction(int(i == 0))]
               for i in range(phi)]
        for c in range(phi):
            piv = next(r for r in range(c, phi) if mat[r][c] != 0)
            mat[c], mat[piv] = mat[piv], mat[c]
            pv = mat[c][c]
            mat[c] = [x / pv for x in mat[c]]
            for r in range(phi):
                if r != c and mat[r][c] != 0:
                    f = mat[r][c]
                    mat[r] = [x - f * y for x, y in zip(mat[r], mat[c])]
        return CyclotomicScalar(self.field, tuple(_norm(mat[i][phi]) for i in range(phi)))

    def __truediv__(self, other: object) -> "CyclotomicScalar":
        if isinstance(other, (int, Fraction)):
            return CyclotomicScalar(
                self.field, tuple(_norm(Fraction(a) / other) for a in self.coords)
            )
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other: object) -> "CyclotomicScalar":
        return self.inverse() * other

    def __pow__(self, n: int) -> "CyclotomicScalar":
        if n < 0:
            return self.inverse() ** (-n)
        result = self.field.one
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def embed(self, level: int) -> "CyclotomicScalar":
        """Image in Q(zeta_level); requires self.level | level."""
        if level % self.level:
            raise ValueError(f"Q(zeta_{self.level}) does not embed in Q(zeta_{level})")
        target = cyclotomic_field(level)
        step = level // self.level
        vec = [0] * level
        for k, c in enumerate(self.coords):
            vec[(k * step) % level] += c
        return target.from_power_sums(vec)

    def is_rational(self) -> bool:
        return not any(self.coords[1:])

    def rational(self) -> Rational:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coords[0]

    def root_exponent(self) -> int | None:
        """k with self == zeta_L^k (0 <= k < L), or None if there is none."""
        for k in range(self.field.level):
            if self.field.zeta(k) == self:
                return k
        return None

    def __repr__(self) -> str:
        return f"CyclotomicScalar({self.field.level}, {self.coords})"

    def __str__(self) -> str:
        parts = []
        for k, c in enumerate(self.coords):
            if not c:
                continue
            if k == 0:
                parts.append((c, ""))
            elif k == 1:
                parts.append((c, "zeta"))
            else:
                parts.append((c, f"zeta^{k}"))
        return _format_sum(parts)


def _format_rational(c: Rational) -> str:
    if isinstance(c, Fraction):
        return f"({c.numerator}/{c.denominator})" if c.denominator != 1 else str(c.numerator)
    return str(c)


def _format_sum(parts: list[tuple[Rational, str]]) -> str:
    """Render sum of (coefficient, monomial-text) pairs in the expression grammar."""
    if not parts:
        return "0"
    out = []
    for idx, (c, mono) in enumerate(parts):
        neg = c < 0
        mag = -c if neg else c
        if mono:
            body = mono if mag == 1 else f"{_format_rational(mag)}*{mono}"
        else:
            body = _format_rational(mag)
        if idx == 0:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f" - {body}" if neg else f" + {body}")
    return "".join(out)


def cyclo(level: int, k: int) -> CyclotomicScalar:
    """zeta_level^k in canonical form."""
    if level < 1:
        raise ValueError("level must be positive")
    return cyclotomic_field(level).zeta(k)


def order_of(s: CyclotomicScalar) -> int | str:
    """Multiplicative order of s, or ``"infinite"`` when s is not a root of unity."""
    if s.is_zero():
        raise ValueError("order of zero is undefined")
    # roots of unity in Q(zeta_L) have order dividing lcm(L, 2)
    bound = s.level if s.level % 2 == 0 else 2 * s.level
    for d in _divisors(bound):
        if s ** d == 1:
            return d
    return "infinite"


# --------------------------------------------------------------------------
# Laurent polynomials in named parameters


class LaurentRing:
    """Q[params^(+-1)] for a fixed ordered tuple of parameter names."""

    def __init__(self, names: tuple[str, ...]):
        self.names = tuple(names)
        self.index = {n: i for i, n in enumerate(self.names)}
        self.nvars = len(self.names)
        self.zero = LaurentScalar(self, {})
        self.one = LaurentScalar(self, {(0,) * self.nvars: 1})

    def __repr__(self) -> str:
        return f"LaurentRing({', '.join(self.names)})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, LaurentRing) and other.names == self.names

    def __hash__(self) -> int:
        return hash(("laurent", self.names))

    def __call__(self, value: object) -> "LaurentScalar":
        if isinstance(value, LaurentScalar):
            if value.ring != self:
                raise ValueError("Laurent ring mismatch")
            return value
        if isinstance(value, (int, Fraction)):
            value = _norm(value)
            return LaurentScalar(self, {(0,) * self.nvars: value} if value else {})
        raise TypeError(f"cannot coerce {value!r} into {self}")

    def gen(self, name: str, power: int = 1) -> "LaurentScalar":
        if name not in self.index:
            raise KeyError(f"unknown parameter {name!r}")
        exps = [0] * self.nvars
        exps[self.index[name]] = power
        return LaurentScalar(self, {tuple(exps): 1})

    def monomial(self, exps: Mapping[str, int], coeff: Rational = 1) -> "LaurentScalar":
        vec = [0] * self.nvars
        for n, e in exps.items():
            vec[self.index[n]] += e
        return LaurentScalar(self, {tuple(vec): coeff} if coeff else {})


@lru_cache(maxsize=None)
def laurent_ring(names: tuple[str, ...]) -> LaurentRing:
    return LaurentRing(names)


class LaurentScalar:
    __slots__ = ("ring", "terms")

    def __init__(self, ring: LaurentRing, terms: dict):
        self.ring = ring
        self.terms = terms

    def _coerce(self, other: object) -> "LaurentScalar":
        if isinstance(other, LaurentScalar):
            if other.ring is not self.ring and other.ring != self.ring:
                raise ValueError("Laurent ring mismatch")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring(other)
        return NotImplemented

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = self.ring(other)
        if not isinstance(other, LaurentScalar):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self) -> int:
        if not self.terms:
            return hash(0)
        zero = (0,) * self.ring.nvars
        if len(self.terms) == 1 and zero in self.terms:
            return hash(self.terms[zero])
        return hash(frozenset(self.terms.items()))

    def __neg__(self) -> "LaurentScalar":
        return LaurentScalar(self.ring, {e: -c for e, c in self.terms.items()})

    def __add__(self, other: object) -> "LaurentScalar":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = _norm(v)
            else:
                out.pop(e, None)
        return LaurentScalar(self.ring, out)

    __radd__ = __add__

    def __sub__(self, other: object) -> "LaurentScalar":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other: object) -> "LaurentScalar":
        return (-self) + other

    def __mul__(self, other: object) -> "LaurentScalar":
        if isinstance(other, (int, Fraction)):
            if not other:
                return self.ring.zero
            return LaurentScalar(self.ring, {e: _norm(c * other) for e, c in self.terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = out.get(e, 0) + c1 * c2
                if v:
                    out[e] = v
                else:
                    del out[e]
        return LaurentScalar(self.ring, {e: _norm(c) for e, c in out.items()})

    __rmul__ = __mul__

    def is_unit(self) -> bool:
        return len(self.terms) == 1

    def inverse(self) -> "LaurentScalar":
        if not self.is_unit():
            raise ZeroDivisionError(f"{self} is not a unit of the Laurent ring")
        ((e, c),) = self.terms.items()
        return LaurentScalar(self.ring, {tuple(-x for x in e): _norm(Fraction(1) / c)})

    def __truediv__(self, other: object) -> "LaurentScalar":
        if isinstance(other, (int, Fraction)):
            return self * (Fraction(1) / other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __pow__(self, n: int) -> "LaurentScalar":
        if n < 0:
            return self.inverse() ** (-n)
        result = self.ring.one
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def substitute(self, images: Mapping[str, object], target=None):
        """Ring map sending each parameter name to the given image.

        Images must be invertible where negative exponents occur.  ``target``
        supplies the codomain's one; by default it is taken from the images.
        """
        if target is None:
            target = next(iter(images.values())) if images else None
        one = target.ring.one if isinstance(target, LaurentScalar) else (
            target.field.one if isinstance(target, CyclotomicScalar) else target)
        result = one * 0
        cache: dict = {}
        for e, c in self.terms.items():
            term = one
            for name, k in zip(self.ring.names, e):
                if not k:
                    continue
                if name not in images:
                    raise KeyError(f"unassigned parameter {name!r}")
                key = (name, k)
                if key not in cache:
                    cache[key] = images[name] ** k
                term = term * cache[key]
            result = result + term * c
        return result

    def __repr__(self) -> str:
        return f"LaurentScalar({self.ring.names}, {self.terms})"

    def __str__(self) -> str:
        parts = []
        for e in sorted(self.terms, reverse=True):
            c = self.terms[e]
            factors = []
            for name, k in zip(self.ring.names, e):
                if k:
                    factors.append(param_text(name, k))
            parts.append((c, "*".join(factors)))
        return _format_sum(parts)


def param_text(name: str, k: int) -> str:
    """Render ``name^k`` in the expression grammar (``p12^-1`` prints as ``p[2,1]``)."""
    if name.startswith("p") and len(name) == 3 and name[1:].isdigit():
        i, j = name[1], name[2]
        if k < 0:
            base, k = f"p[{j},{i}]", -k
        else:
            base = f"p[{i},{j}]"
    else:
        base = name
    return base if k == 1 else f"{base}^{k}"


# --------------------------------------------------------------------------


@dataclass(frozen=True)
class ParameterAssignment:
    """Parameters specialised to powers of zeta_level."""

    level: int
    exponents: Mapping[str, int] = field(default_factory=dict)

    def __post_init__(self):
        if self.level < 1:
            raise ValueError("level must be positive")
        exps = {n: k % self.level for n, k in dict(self.exponents).items()}
        object.__setattr__(self, "exponents", exps)
        lam = exps.get("lambda")
        if lam is not None and (2 * lam) % self.level == 0:
            raise ValueError("lambda^2 = 1 is excluded")
        for n, k in exps.items():
            if n.startswith("p") and len(n) == 3 and n[1:].isdigit():
                i, j = n[1], n[2]
                if i == j and k:
                    raise ValueError(f"{n} must be 1")
                mirror = f"p{j}{i}"
                if mirror in exps and (k + exps[mirror]) % self.level:
                    raise ValueError(f"p[{i},{j}]*p[{j},{i}] != 1")

    def value(self, name: str) -> CyclotomicScalar:
        if name not in self.exponents:
            raise KeyError(f"unassigned parameter {name!r}")
        return cyclo(self.level, self.exponents[name])

    def __hash__(self) -> int:
        return hash((self.level, tuple(sorted(self.exponents.items()))))


def specialize(s: LaurentScalar | Rational, a: ParameterAssignment) -> CyclotomicScalar:
    """Evaluate a Laurent scalar at the roots of unity given by ``a``."""
    F = cyclotomic_field(a.level)
    if isinstance(s, (int, Fraction)):
        return F(s)
    ks = []
    for name in s.ring.names:
        ks.append(a.exponents.get(name))
    vec = [0] * a.level
    for e, c in s.terms.items():
        total = 0
        for k, x in zip(ks, e):
            if x:
                if k is None:
                    raise KeyError(f"unassigned parameter {s.ring.names[ks.index(k)]!r}")
                total += k * x
        vec[total % a.level] += c
    return F.from_power_sums(vec)


def is_scalar_zero(c) -> bool:
    if isinstance(c, (int, Fraction)):
        return c == 0
    return c.is_zero()


def lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)
