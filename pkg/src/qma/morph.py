"""Checked endomorphisms and automorphisms of quantum matrix algebras."""

from __future__ import annotations

import random
import re
from dataclasses import dataclass, field
from math import comb
from typing import Iterable, Mapping, Sequence

from .coeff import cyclo
from .compoly import Poly
from .qalgebra import (
    AlgebraElement,
    Position,
    PresentationError,
    QMAPresentation,
    apply_map,
    generic_multiparameter,
    named_subalgebra,
    single_parameter,
)
from .qdet import A, quantum_determinant


class MorphismError(ValueError):
    pass


@dataclass
class GeneratorMap:
    """Images of generators; ``verify`` checks every straightening relation."""

    P: QMAPresentation
    images: dict[Position, AlgebraElement]
    name: str = ""
    certificate: list = field(default_factory=list)
    violations: list = field(default_factory=list)
    verified: bool | None = None

    def __post_init__(self):
        for pos, img in self.images.items():
            if pos not in self.P.index:
                raise MorphismError(f"x[{pos[0]},{pos[1]}] is not a generator")
            if not self.P.same_as(img.P):
                raise MorphismError("image lives in a different presentation")
        self._cache: dict = {}

    def image(self, pos: Position) -> AlgebraElement:
        return self.images.get(pos) or self.P.x(*pos)

    def changed(self) -> list[Position]:
        return [pos for pos in self.P.positions if self.image(pos) != self.P.x(*pos)]

    def apply(self, a: AlgebraElement) -> AlgebraElement:
        return apply_map(a, self.images, self.P, self._cache)

    def verify(self) -> bool:
        P = self.P
        moved = set(self.changed())
        self.certificate, self.violations = [], []
        for (ia, ib), terms in P.rules.items():
            a, b = P.positions[ia], P.positions[ib]
            lhs = self.image(a) * self.image(b)
            rhs = P.zero()
            for mono, c in terms:
                word = P.word_of(mono)
                rhs = rhs + (self.image(word[0]) * self.image(word[1])).scale(c)
            diff = lhs - rhs
            label = f"x[{a[0]},{a[1]}]*x[{b[0]},{b[1]}]"
            touched = bool(moved & ({a, b} | {w for mono, _ in terms for w in P.word_of(mono)}))
            self.certificate.append({"relation": label, "involves_moved_generator": touched,
                                     "holds": diff.is_zero()})
            if not diff.is_zero():
                self.violations.append({"relation": label, "residual": str(diff)})
        self.verified = not self.violations
        return self.verified

    def to_report(self) -> dict:
        return {
            "name": self.name,
            "images": {f"x{i}{j}": str(self.image((i, j))) for i, j in self.P.positions},
            "verified": self.verified,
            "relations_checked": len(self.certificate),
            "violations": self.violations,
            "graded": is_graded(self),
        }


def make_endomorphism(P: QMAPresentation, images: Mapping[Position, AlgebraElement],
                      name: str = "") -> GeneratorMap:
    f = GeneratorMap(P, dict(images), name)
    f.verify()
    return f


def compose(f: GeneratorMap, g: GeneratorMap) -> GeneratorMap:
    """f o g: first g, then f."""
    if not f.P.same_as(g.P):
        raise MorphismError("maps act on different presentations")
    images = {pos: f.apply(g.image(pos)) for pos in f.P.positions}
    return GeneratorMap(f.P, images, f"{f.name}*{g.name}")


def verify_inverse(f: GeneratorMap, g: GeneratorMap) -> bool:
    fg, gf = compose(f, g), compose(g, f)
    return all(fg.image(pos) == f.P.x(*pos) and gf.image(pos) == f.P.x(*pos)
               for pos in f.P.positions)


def is_graded(f: GeneratorMap) -> bool:
    return all(all(sum(m) == 1 for m in f.image(pos).terms) and f.image(pos).terms
               for pos in f.P.positions)


# ----------------------------------------------------------------------
# built-in maps


def _q_power_order(m: int) -> int:
    if m < 3:
        raise MorphismError("ord(q) must be at least 3")
    return m


def phi_map(n: int, m: int, r: int = 1, P: QMAPresentation | None = None) -> GeneratorMap:
    """x11 -> x11 + r A(1,1)^(m-1); r = -1 is the inverse rho."""
    P = P or single_parameter(n, cyclo(_q_power_order(m), 1))
    return GeneratorMap(P, {(1, 1): P.x(1, 1) + A(P, 1, 1) ** (m - 1) * r},
                        "phi" if r == 1 else ("rho" if r == -1 else f"phi^{r}"))


def psi_map(n: int, m: int, r: int = 1, P: QMAPresentation | None = None) -> GeneratorMap:
    P = P or single_parameter(n, cyclo(_q_power_order(m), 1))
    return GeneratorMap(P, {(n, n): P.x(n, n) + A(P, n, n) ** (m - 1) * r},
                        "psi" if r == 1 else ("psi_inv" if r == -1 else f"psi^{r}"))


def tau_map(P: QMAPresentation) -> GeneratorMap:
    if not P.is_single_parameter or P.rows != P.cols:
        raise MorphismError("the transpose preserves the relations only in the "
                            "single-parameter square case")
    images = {}
    for i, j in P.positions:
        if (j, i) not in P.index:
            raise MorphismError("the generator set is not closed under transposition")
        images[i, j] = P.x(j, i)
    return GeneratorMap(P, images, "tau")


def scalar_map(P: QMAPresentation, scalars: Mapping[Position, object]) -> GeneratorMap:
    return GeneratorMap(P, {pos: P.x(*pos).scale(c) for pos, c in scalars.items()}, "scalar")


def nagata_element(P: QMAPresentation, m: int) -> AlgebraElement:
    """cu + b^(m+1) with a, b, c, d = x11, x12, x21, x22 and u = a^m."""
    a, b, c = P.x(1, 1), P.x(1, 2), P.x(2, 1)
    return c * a ** m + b ** (m + 1)


def _sigma_parts(P: QMAPresentation, m: int, b_img: AlgebraElement, c_nabla_u_power: int):
    a, b, c = P.x(1, 1), P.x(1, 2), P.x(2, 1)
    u = a ** m
    nab = nagata_element(P, m)
    s_c = P.zero()
    s_d = c * nab * u ** c_nabla_u_power
    for i in range(1, m + 2):
        k = comb(m + 1, i)
        common = b ** (m + 1 - i) * nab ** i
        s_c = s_c + common * u ** (2 * i - 1) * k
        s_d = s_d - common * u ** (2 * (i - 1)) * b_img * k
    return u, nab, s_c, s_d


def wild_sigma(m: int, variant: str = "corrected") -> GeneratorMap:
    """The automorphism restricting to a Nagata-type map on k[b, c, u].

    The image of d is d + q a^(m-1) E with u E = sigma(b) sigma(c) - b c, which is
    forced by the relation ad - da = (q - q^-1) bc.  That makes the first term of E
    equal to c*nabla*u; ``variant="display"`` uses c*nabla*u^2 instead, which
    violates the x22*x11 relation.
    """
    if variant not in ("corrected", "display"):
        raise MorphismError("variant must be 'corrected' or 'display'")
    if m < 3 or m % 2 == 0:
        raise MorphismError("m must be odd and at least 3")
    P = single_parameter(2, cyclo(m, 1))
    a, b, c, d = P.x(1, 1), P.x(1, 2), P.x(2, 1), P.x(2, 2)
    nab = nagata_element(P, m)
    u = a ** m
    b_img = b + nab * u ** 2
    _, _, s_c, s_d = _sigma_parts(P, m, b_img, 1 if variant == "corrected" else 2)
    images = {(1, 1): a, (1, 2): b_img, (2, 1): c - s_c,
              (2, 2): d + (a ** (m - 1) * s_d).scale(P.q)}
    return GeneratorMap(P, images, "sigma" if variant == "corrected" else "sigma_display")


def wild_sigma_inverse(sigma: GeneratorMap, m: int) -> GeneratorMap:
    """Triangular inverse: undo b, then c, then d, using sigma(nabla) = nabla."""
    P = sigma.P
    a, b, c, d = P.x(1, 1), P.x(1, 2), P.x(2, 1), P.x(2, 2)
    u = a ** m
    nab = nagata_element(P, m)
    b_inv = b - nab * u ** 2
    c_inv = c
    for i in range(1, m + 2):
        c_inv = c_inv + b_inv ** (m + 1 - i) * nab ** i * u ** (2 * i - 1) * comb(m + 1, i)
    partial = GeneratorMap(P, {(1, 2): b_inv, (2, 1): c_inv})
    # sigma(d) = d + q a^(m-1) E with E free of d
    E = (sigma.image((2, 2)) - d)
    d_inv = d - partial.apply(E)
    return GeneratorMap(P, {(1, 2): b_inv, (2, 1): c_inv, (2, 2): d_inv}, "sigma_inv")


def b3_phi(m: int, sign: int = 1, name: str = "B3") -> GeneratorMap:
    P = named_subalgebra(name, cyclo(m, 1))
    x = P.x
    extra = x(1, 2) * x(2, 3) - (x(1, 3) * x(2, 2)).scale(P.q)
    label = f"{name.lower()}_phi" + ("" if sign == 1 else "_inv")
    return GeneratorMap(P, {(3, 1): x(3, 1) + extra * sign}, label)


def b2_psi(m: int, sign: int = 1) -> GeneratorMap:
    P = named_subalgebra("B2", cyclo(m, 1))
    x = P.x
    images = {
        (1, 1): x(1, 1) + x(2, 1) * x(2, 2) ** (m - 1) * x(2, 3) ** (m - 1) * x(3, 1) * sign,
        (1, 2): x(1, 2) + x(2, 2) ** m * x(2, 3) ** (m - 1) * x(3, 1) * sign,
    }
    return GeneratorMap(P, images, "b2_psi" + ("" if sign == 1 else "_inv"))


BUILTINS = ("tau", "phi", "rho", "psi", "psi_inv", "sigma", "sigma_inv", "b3_phi", "b3_phi_inv",
            "b2_phi", "b2_phi_inv", "b2_psi", "b2_psi_inv", "scalar")


def builtin(name: str, n: int = 2, m: int = 3, P: QMAPresentation | None = None,
            scalars: Mapping[Position, object] | None = None) -> GeneratorMap:
    """Return a verified built-in map; failing verification raises."""
    if name == "tau":
        f = tau_map(P or single_parameter(n, cyclo(m, 1)))
    elif name in ("phi", "rho"):
        f = phi_map(n, m, 1 if name == "phi" else -1, P)
    elif name in ("psi", "psi_inv"):
        f = psi_map(n, m, 1 if name == "psi" else -1, P)
    elif name in ("sigma", "sigma_inv"):
        if n != 2:
            raise MorphismError("sigma is defined on 2x2 quantum matrices")
        f = wild_sigma(m)
        if name == "sigma_inv":
            f = wild_sigma_inverse(f, m)
    elif name in ("b3_phi", "b3_phi_inv", "b2_phi", "b2_phi_inv"):
        f = b3_phi(m, -1 if name.endswith("_inv") else 1, "B3" if name.startswith("b3") else "B2")
    elif name in ("b2_psi", "b2_psi_inv"):
        f = b2_psi(m, -1 if name.endswith("_inv") else 1)
    elif name == "scalar":
        P = P or single_parameter(n, cyclo(m, 1))
        # torus scalars alpha_i beta_j respect every relation
        scalars = scalars or {(i, j): (i + 1) * (2 * j + 1) for i, j in P.positions}
        f = scalar_map(P, scalars)
    else:
        raise MorphismError(f"unknown built-in map {name!r}; choose from {', '.join(BUILTINS)}")
    if not f.verify():
        raise MorphismError(f"built-in map {name} failed verification: {f.violations[:1]}")
    return f


INVERSE_PAIRS = {"phi": "rho", "psi": "psi_inv", "sigma": "sigma_inv", "b3_phi": "b3_phi_inv",
                 "b2_phi": "b2_phi_inv", "b2_psi": "b2_psi_inv", "tau": "tau"}


# ----------------------------------------------------------------------
# free-group words in phi and psi


@dataclass(frozen=True)
class GroupWord:
    """Letters (name, exponent), written left to right; the rightmost acts first."""

    letters: tuple[tuple[str, int], ...]

    def is_reduced(self) -> bool:
        return all(e != 0 for _, e in self.letters) and all(
            self.letters[k][0] != self.letters[k + 1][0] for k in range(len(self.letters) - 1))

    def reduced(self) -> "GroupWord":
        out: list[list] = []
        for name, e in self.letters:
            if out and out[-1][0] == name:
                out[-1][1] += e
                if out[-1][1] == 0:
                    out.pop()
            elif e:
                out.append([name, e])
        return GroupWord(tuple((n, e) for n, e in out))

    def names(self) -> set[str]:
        return {n for n, _ in self.letters}

    def __mul__(self, other: "GroupWord") -> "GroupWord":
        return GroupWord(self.letters + other.letters)

    def __str__(self) -> str:
        return " ".join(n if e == 1 else f"{n}^{e}" for n, e in self.letters) or "1"


_LETTER = re.compile(r"^(phi|psi)(?:\^([+-]?\d+))?$")


def parse_word(text: str) -> GroupWord:
    letters = []
    for tok in text.split():
        mt = _LETTER.match(tok)
        if not mt:
            raise MorphismError(f"bad word letter {tok!r}; use phi or psi with optional ^k")
        letters.append((mt.group(1), int(mt.group(2) or 1)))
    return GroupWord(tuple(letters))


class WordActor:
    """Applies words in phi, psi on O_q(M_n) with q = zeta_m, caching maps."""

    def __init__(self, n: int, m: int):
        self.n, self.m = n, m
        self.P = single_parameter(n, cyclo(m, 1))
        self._maps: dict[tuple[str, int], GeneratorMap] = {}

    def letter(self, name: str, sign: int) -> GeneratorMap:
        key = (name, sign)
        if key not in self._maps:
            make = phi_map if name == "phi" else psi_map
            self._maps[key] = make(self.n, self.m, sign, self.P)
        return self._maps[key]

    def act(self, w: GroupWord, a: AlgebraElement) -> AlgebraElement:
        cur = a
        for name, e in reversed(w.letters):
            f = self.letter(name, 1 if e > 0 else -1)
            for _ in range(abs(e)):
                cur = f.apply(cur)
        return cur


def word_action(n: int, m: int, w: GroupWord | str, target: Position = (1, 1),
                actor: WordActor | None = None) -> AlgebraElement:
    if isinstance(w, str):
        w = parse_word(w)
    actor = actor or WordActor(n, m)
    return actor.act(w, actor.P.x(*target))


def small_words(max_len: int = 2, exps: Sequence[int] = (1, -1, 2, -2)) -> list[GroupWord]:
    out = []

    def rec(prefix: list, last: str | None):
        if prefix:
            out.append(GroupWord(tuple(prefix)))
        if len(prefix) == max_len:
            return
        for name in ("phi", "psi"):
            if name != last:
                for e in exps:
                    rec(prefix + [(name, e)], name)

    rec([], None)
    return out


def random_words(count: int, max_len: int, seed: int,
                 exps: Sequence[int] = (1, -1, 2, -2)) -> list[GroupWord]:
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        length = rng.randint(1, max_len)
        name = rng.choice(("phi", "psi"))
        letters = []
        for _ in range(length):
            letters.append((name, rng.choice(exps)))
            name = "psi" if name == "phi" else "phi"
        out.append(GroupWord(tuple(letters)))
    return out


def free_witness(n: int, m: int, words: Iterable[GroupWord]) -> dict:
    """For each reduced word: w(x11) != x11 unless w is a psi-power, w(xnn) != xnn unless a phi-power."""
    actor = WordActor(n, m)
    P = actor.P
    rows = []
    for w in words:
        if not w.is_reduced() or not w.letters:
            raise MorphismError(f"word {w} is not reduced and nonempty")
        entry = {"word": str(w)}
        ok = True
        if w.names() != {"psi"}:
            moved = actor.act(w, P.x(1, 1)) != P.x(1, 1)
            entry["moves_x11"] = moved
            ok &= moved
        if w.names() != {"phi"}:
            moved = actor.act(w, P.x(n, n)) != P.x(n, n)
            entry[f"moves_x{n}{n}"] = moved
            ok &= moved
        entry["witness"] = ok
        rows.append(entry)
    return {"n": n, "m": m, "words": rows, "holds": all(r["witness"] for r in rows)}


# ----------------------------------------------------------------------
# leading forms and the fixed ideal (b, c)


BCU = ("b", "c", "u")


def to_bcu(a: AlgebraElement, m: int) -> Poly:
    """Read an element of k[b, c, u] (u = a^m) off its PBW normal form."""
    out = {}
    for (ea, eb, ec, ed), coef in a.terms.items():
        if ed or ea % m:
            raise MorphismError("element is not in the commutative subring k[b,c,u]")
        out[(eb, ec, ea // m)] = coef.rational() if coef.is_rational() else coef
    return Poly(BCU, out)


def leading_form_check(m: int, sigma: GeneratorMap | None = None) -> dict:
    sigma = sigma or wild_sigma(m)
    P = sigma.P
    nab = nagata_element(P, m)
    fixes_nabla = sigma.apply(nab) == nab
    b, u = (Poly.var(BCU, v) for v in ("b", "u"))
    expected = {
        "sigma(b)": b ** (m + 1) * u ** 2,
        "sigma(c)": b ** ((m + 1) ** 2) * u ** (2 * m + 1),
        "sigma(u)": u,
    }
    images = {
        "sigma(b)": sigma.image((1, 2)),
        "sigma(c)": sigma.image((2, 1)),
        "sigma(u)": sigma.image((1, 1)) ** m,
    }
    rows = []
    for key, img in images.items():
        top = to_bcu(img, m).top_form()
        scalar = top.is_scalar_multiple_of(expected[key])
        rows.append({"image": key, "top_form": str(top), "expected": str(expected[key]),
                     "scalar": None if scalar is None else str(scalar),
                     "matches_up_to_scalar": scalar is not None and scalar != 0})
    return {"m": m, "sigma_fixes_nabla": fixes_nabla, "leading_forms": rows,
            "holds": fixes_nabla and all(r["matches_up_to_scalar"] for r in rows)}


def quotient_by_bc(a: AlgebraElement) -> Poly:
    """Image in O_q(M_2)/(b,c) = k[a,d]: drop every monomial containing b or c."""
    out = {}
    for (ea, eb, ec, ed), coef in a.terms.items():
        if eb == 0 and ec == 0:
            out[(ea, ed)] = coef.rational() if coef.is_rational() else coef
    return Poly(("a", "d"), out)


def fixed_ideal_check(f: GeneratorMap, m: int) -> dict:
    P = f.P
    if P.rows != 2 or P.cols != 2 or P.subset is not None:
        raise MorphismError("the (b,c) check is for 2x2 quantum matrices")
    b_img = quotient_by_bc(f.image((1, 2)))
    c_img = quotient_by_bc(f.image((2, 1)))
    D = quantum_determinant(P)
    det_image = quotient_by_bc(D)
    a_, d_ = Poly.var(("a", "d"), "a"), Poly.var(("a", "d"), "d")
    b, c = P.x(1, 2), P.x(2, 1)
    # v = b^m, w = c^m, t_r = b^r c^(m-r): each is a product of m generators of (b, c)
    containment = [{"element": "v", "word": "b" * m, "holds": b ** m == P.x(1, 2) ** m}]
    containment.append({"element": "w", "word": "c" * m, "holds": c ** m == P.x(2, 1) ** m})
    for r in range(1, m):
        prod = P.one()
        for letter in "b" * r + "c" * (m - r):
            prod = prod * (b if letter == "b" else c)
        containment.append({"element": f"t{r}", "word": "b" * r + "c" * (m - r),
                            "holds": prod == b ** r * c ** (m - r) and all(
                                mono[1] + mono[2] >= m for mono in prod.terms)})
    return {
        "map": f.name,
        "image_of_b_mod_bc": str(b_img),
        "image_of_c_mod_bc": str(c_img),
        "determinant_mod_bc": str(det_image),
        "determinant_maps_to_ad": det_image == a_ * d_,
        "containment": containment,
        "holds": b_img.is_zero() and c_img.is_zero() and det_image == a_ * d_
        and all(r["holds"] for r in containment),
    }


# ----------------------------------------------------------------------
# diagonal maps on the generic 2x2 multiparameter algebra


def diagonal_map_check(scalars: Mapping[Position, object]) -> dict:
    P = generic_multiparameter(2)
    f = make_endomorphism(P, {pos: P.x(*pos).scale(c) for pos, c in scalars.items()}, "diagonal")
    c = scalars
    constraint = c[1, 1] * c[2, 2] == c[1, 2] * c[2, 1]
    return {"scalars": {f"c{i}{j}": str(v) for (i, j), v in c.items()},
            "verified": f.verified, "c11c22_equals_c12c21": constraint,
            "consistent": f.verified == constraint}
