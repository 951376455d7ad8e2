"""Expression grammar for algebra elements: parsing, printing and evaluation.

    expr   := ['-'] term (('+'|'-') term)*
    term   := factor ('*' factor)*
    factor := atom ['^' integer]
    atom   := x[i,j] | D | A(i,j) | Dt(t) | Z[i,j]
            | integer | q | lambda | p[i,j] | zeta | '(' expr ')'

Products are noncommutative and evaluated left to right.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

from .qalgebra import AlgebraElement, PresentationError, QMAPresentation


class ExpressionError(ValueError):
    def __init__(self, message: str, position: int | None = None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


@dataclass(frozen=True)
class Num:
    value: int


@dataclass(frozen=True)
class Sym:
    name: str  # "q", "lambda" or "zeta"


@dataclass(frozen=True)
class Param:
    i: int
    j: int


@dataclass(frozen=True)
class Gen:
    i: int
    j: int


@dataclass(frozen=True)
class Short:
    kind: str  # "D", "A", "Dt", "Z"
    args: tuple[int, ...] = ()


@dataclass(frozen=True)
class Pow:
    base: "Node"
    exp: int


@dataclass(frozen=True)
class Mul:
    factors: tuple["Node", ...]


@dataclass(frozen=True)
class Add:
    terms: tuple[tuple[int, "Node"], ...]  # (sign, node)


Node = Union[Num, Sym, Param, Gen, Short, Pow, Mul, Add]

_TOKENS = re.compile(
    r"(?P<ws>\s+)|(?P<int>\d+)|(?P<name>lambda|zeta|q|Dt|D|A|Z|x|p)"
    r"|(?P<op>[-+*^(),\[\]])"
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKENS.match(text, pos)
        if not m:
            raise ExpressionError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        if kind != "ws":
            out.append((kind, m.group(), pos))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.k = 0

    def peek(self) -> tuple[str, str, int]:
        return self.toks[self.k]

    def take(self, value: str | None = None, kind: str | None = None) -> tuple[str, str, int]:
        tok = self.toks[self.k]
        if (value is not None and tok[1] != value) or (kind is not None and tok[0] != kind):
            want = value if value is not None else kind
            got = tok[1] or "end of input"
            raise ExpressionError(f"expected {want!r}, found {got!r}", tok[2])
        self.k += 1
        return tok

    def integer(self) -> int:
        sign = 1
        if self.peek()[1] in "+-" and self.peek()[0] == "op":
            sign = -1 if self.take()[1] == "-" else 1
        return sign * int(self.take(kind="int")[1])

    def expr(self) -> Node:
        terms = []
        sign = 1
        if self.peek()[1] in ("-", "+"):
            sign = -1 if self.take()[1] == "-" else 1
        terms.append((sign, self.term()))
        while self.peek()[1] in ("+", "-"):
            sign = -1 if self.take()[1] == "-" else 1
            terms.append((sign, self.term()))
        if len(terms) == 1 and terms[0][0] == 1:
            return terms[0][1]
        return Add(tuple(terms))

    def term(self) -> Node:
        factors = [self.factor()]
        while self.peek()[1] == "*":
            self.take()
            factors.append(self.factor())
        return factors[0] if len(factors) == 1 else Mul(tuple(factors))

    def factor(self) -> Node:
        base = self.atom()
        if self.peek()[1] == "^":
            self.take()
            return Pow(base, self.integer())
        return base

    def pair(self, open_: str, close: str) -> tuple[int, int]:
        self.take(open_)
        i = self.integer()
        self.take(",")
        j = self.integer()
        self.take(close)
        return i, j

    def atom(self) -> Node:
        kind, val, pos = self.peek()
        if kind == "int":
            self.take()
            return Num(int(val))
        if val == "(":
            self.take()
            node = self.expr()
            self.take(")")
            return node
        if kind != "name":
            raise ExpressionError(f"unexpected {val or 'end of input'!r}", pos)
        self.take()
        if val in ("q", "lambda", "zeta"):
            return Sym(val)
        if val == "p":
            return Param(*self.pair("[", "]"))
        if val == "x":
            return Gen(*self.pair("[", "]"))
        if val == "Z":
            return Short("Z", self.pair("[", "]"))
        if val == "A":
            return Short("A", self.pair("(", ")"))
        if val == "Dt":
            self.take("(")
            t = self.integer()
            self.take(")")
            return Short("Dt", (t,))
        return Short("D")


def parse_expression(text: str) -> Node:
    parser = _Parser(text)
    node = parser.expr()
    kind, val, pos = parser.peek()
    if kind != "end":
        raise ExpressionError(f"unexpected {val!r}", pos)
    return node


# ----------------------------------------------------------------------
# printing


def _is_atomic(node: Node) -> bool:
    return isinstance(node, (Num, Sym, Param, Gen, Short))


def to_text(node: Node) -> str:
    if isinstance(node, Num):
        return str(node.value)
    if isinstance(node, Sym):
        return node.name
    if isinstance(node, Param):
        return f"p[{node.i},{node.j}]"
    if isinstance(node, Gen):
        return f"x[{node.i},{node.j}]"
    if isinstance(node, Short):
        if node.kind == "D":
            return "D"
        if node.kind == "Dt":
            return f"Dt({node.args[0]})"
        if node.kind == "A":
            return f"A({node.args[0]},{node.args[1]})"
        return f"Z[{node.args[0]},{node.args[1]}]"
    if isinstance(node, Pow):
        base = to_text(node.base)
        if not _is_atomic(node.base):
            base = f"({base})"
        return f"{base}^{node.exp}"
    if isinstance(node, Mul):
        return "*".join(f"({to_text(f)})" if isinstance(f, (Mul, Add)) else to_text(f)
                        for f in node.factors)
    parts = []
    for k, (sign, t) in enumerate(node.terms):
        body = f"({to_text(t)})" if isinstance(t, Add) else to_text(t)
        if k == 0:
            parts.append(f"-{body}" if sign < 0 else body)
        else:
            parts.append(f" - {body}" if sign < 0 else f" + {body}")
    return "".join(parts)


# ----------------------------------------------------------------------
# evaluation


def central_exponent(P: QMAPresentation) -> int:
    """m with x_ij^m central: ord(q) in the single-parameter case, else the power-centrality ell."""
    if P.mode != "cyclotomic":
        raise ExpressionError("Z[i,j] needs root-of-unity parameters")
    from .center import power_centrality
    from .coeff import order_of

    if P.is_single_parameter:
        return order_of(P.q)
    return power_centrality(P)["ell"]


def evaluate(node: Node, P: QMAPresentation) -> AlgebraElement:
    from .qdet import A, D_t, quantum_determinant

    if isinstance(node, Num):
        return P.const(node.value)
    if isinstance(node, Sym):
        if node.name == "q":
            if P.q is None:
                raise ExpressionError("q is only defined for single-parameter presentations")
            return P.const(P.q)
        if node.name == "lambda":
            return P.const(P.lam)
        if P.mode != "cyclotomic":
            raise ExpressionError("zeta needs a root-of-unity presentation")
        return P.const(P.ring.zeta(1))
    if isinstance(node, Param):
        if (node.i, node.j) not in P.p:
            raise ExpressionError(f"p[{node.i},{node.j}] is out of range")
        return P.const(P.p[node.i, node.j])
    if isinstance(node, Gen):
        try:
            return P.x(node.i, node.j)
        except PresentationError as err:
            raise ExpressionError(str(err)) from None
    if isinstance(node, Short):
        try:
            if node.kind == "D":
                return quantum_determinant(P)
            if node.kind == "A":
                return A(P, *node.args)
            if node.kind == "Dt":
                return D_t(P, node.args[0])
            return P.x(*node.args) ** central_exponent(P)
        except (PresentationError, ValueError) as err:
            raise ExpressionError(str(err)) from None
    if isinstance(node, Pow):
        base = evaluate(node.base, P)
        if node.exp >= 0:
            return base ** node.exp
        zero = (0,) * P.ngens
        if set(base.terms) != {zero}:
            raise ExpressionError("negative powers are only defined for scalars")
        c = base.terms[zero]
        if hasattr(c, "is_unit") and not c.is_unit():
            raise ExpressionError("scalar is not invertible")
        return P.const(c.inverse() ** (-node.exp))
    if isinstance(node, Mul):
        out = evaluate(node.factors[0], P)
        for f in node.factors[1:]:
            out = out * evaluate(f, P)
        return out
    out = P.zero()
    for sign, t in node.terms:
        v = evaluate(t, P)
        out = out + v if sign > 0 else out - v
    return out


def parse_element(text: str, P: QMAPresentation) -> AlgebraElement:
    return evaluate(parse_expression(text), P)
