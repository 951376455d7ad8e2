"""Command-line front end.

Element-valued commands (nf, det, auto word) print a PBW normal form as text;
everything else prints a JSON report.  Exit codes: 0 pass, 1 fail, 2 usage.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from fractions import Fraction
from typing import Sequence

from . import __version__
from .acceptance import run_suite
from .center import is_central, noncommuting_generators, power_centrality, verify_center_generators
from .coeff import order_of
from .disc import (
    DiscriminantError,
    discriminant_eval_check,
    discriminant_modular_check,
    inner_witness_check,
    qaffine_discriminant,
)
from .expr import ExpressionError, parse_element
from .morph import (
    BUILTINS,
    INVERSE_PAIRS,
    MorphismError,
    builtin,
    make_endomorphism,
    verify_inverse,
    word_action,
)
from .present import (
    groebner_verify,
    hilbert_degree,
    jacobian_rank_at,
    normal_monomial_count,
    p_locus_survey,
    socle_witness,
)
from .qalgebra import PresentationError, QMAPresentation, format_element, presentation_from_spec, twist_check
from .qdet import A, D_t, minor_identities_n3, minors_commutation_n3, quantum_determinant, quantum_minor, verify_laplace


class UsageError(Exception):
    pass


USAGE_ERRORS = (UsageError, ExpressionError, PresentationError, MorphismError, DiscriminantError,
                ValueError, KeyError, OSError)


# ----------------------------------------------------------------------
# helpers


def load_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as err:
        raise UsageError(f"{path}: invalid JSON ({err})") from None


def spec_digest(spec: dict) -> str:
    text = json.dumps(spec, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(text.encode()).hexdigest()[:16]


def load_algebra(path: str) -> tuple[QMAPresentation, dict]:
    spec = load_json(path)
    if not isinstance(spec, dict):
        raise UsageError(f"{path}: an algebra spec must be a JSON object")
    return presentation_from_spec(spec), spec


def parse_position(text: str) -> tuple[int, int]:
    t = text.strip()
    if t.startswith("x"):
        t = t[1:]
    t = t.strip("[]")
    if "," in t:
        i, j = t.split(",")
    elif len(t) == 2 and t.isdigit():
        i, j = t[0], t[1]
    else:
        raise UsageError(f"cannot read a generator position from {text!r}")
    return int(i), int(j)


def parse_index_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.replace(" ", "").split(",") if v]
    except ValueError:
        raise UsageError(f"bad index list {text!r}; use e.g. 1,3") from None


def parse_number(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except ValueError:
        raise UsageError(f"bad number {text!r}") from None


def emit(report: dict) -> None:
    print(json.dumps(report, indent=2, default=str))


def verdict_code(ok: bool) -> int:
    return 0 if ok else 1


# ----------------------------------------------------------------------
# algebra commands


def cmd_nf(args) -> int:
    P, spec = load_algebra(args.spec)
    el = parse_element(args.expr, P)
    if args.json:
        emit({"command": "nf", "inputs": {"expr": args.expr, "spec_digest": spec_digest(spec)},
              "normal_form": format_element(el), "terms": len(el.terms)})
    else:
        print(format_element(el))
    return 0


def cmd_det(args) -> int:
    P, spec = load_algebra(args.spec)
    chosen = sum(v is not None for v in (args.minor, args.comp, args.dt))
    if chosen > 1:
        raise UsageError("give at most one of --minor, --comp, --dt")
    if args.minor:
        el = quantum_minor(P, parse_index_list(args.minor[0]), parse_index_list(args.minor[1]))
    elif args.comp:
        el = A(P, *args.comp)
    elif args.dt is not None:
        el = D_t(P, args.dt)
    else:
        el = quantum_determinant(P)
    if args.json:
        emit({"command": "det", "inputs": {"minor": args.minor, "comp": args.comp, "dt": args.dt,
                                           "spec_digest": spec_digest(spec)},
              "element": format_element(el)})
    else:
        print(format_element(el))
    return 0


def cmd_central(args) -> int:
    P, spec = load_algebra(args.spec)
    el = parse_element(args.expr, P)
    bad = noncommuting_generators(P, el)
    emit({"command": "central", "inputs": {"expr": args.expr, "spec_digest": spec_digest(spec)},
          "central": not bad, "fails_against": [f"x[{i},{j}]" for i, j in bad]})
    return verdict_code(not bad)


def _root_order(P: QMAPresentation) -> int:
    if P.mode != "cyclotomic" or not P.is_single_parameter:
        raise UsageError("center generators need a single-parameter root-of-unity spec")
    m = order_of(P.q)
    if not isinstance(m, int) or m % 2 == 0 or m < 3:
        raise UsageError(f"ord(q) must be odd and at least 3, got {m}")
    if P.rows != P.cols or P.subset is not None:
        raise UsageError("center generators need the full square algebra")
    return m


def cmd_center_gens(args) -> int:
    P, spec = load_algebra(args.spec)
    m = _root_order(P)
    r = verify_center_generators(P.rows, m)
    r = {"command": "center-gens", "inputs": {"spec_digest": spec_digest(spec)}, **r}
    emit(r)
    return verdict_code(r["holds"])


def cmd_laplace(args) -> int:
    P, spec = load_algebra(args.spec)
    r = verify_laplace(P)
    emit({"command": "laplace", "inputs": {"spec_digest": spec_digest(spec)}, **r})
    return verdict_code(r["holds"])


def cmd_minor_ids(args) -> int:
    P, spec = load_algebra(args.spec)
    if P.rows != 3 or P.cols != 3 or P.subset is not None:
        raise UsageError("the minor identities are stated for full 3x3 algebras")
    checks = []
    for label, lhs, rhs in minor_identities_n3(P):
        diff = lhs - rhs
        checks.append({"identity": label, "holds": diff.is_zero(), "difference": format_element(diff)})
    if P.is_single_parameter:
        for label, comm in minors_commutation_n3(P):
            checks.append({"identity": f"{label} = 0", "holds": comm.is_zero(),
                           "difference": format_element(comm)})
    ok = all(c["holds"] for c in checks)
    emit({"command": "minor-ids", "inputs": {"spec_digest": spec_digest(spec)}, "checks": checks,
          "holds": ok})
    return verdict_code(ok)


def read_p_exponents(path: str, n: int) -> dict[tuple[int, int], int]:
    """Either {"p12": k, ...} or an n x n exponent matrix (entries above the diagonal are used)."""
    data = load_json(path)
    if isinstance(data, dict) and "p_exps" in data:
        data = data["p_exps"]
    out = {}
    if isinstance(data, list):
        for i, row in enumerate(data, start=1):
            for j, k in enumerate(row, start=1):
                if i < j:
                    out[i, j] = int(k)
    elif isinstance(data, dict):
        for key, k in data.items():
            i, j = parse_position(key.lstrip("p"))
            out[i, j] = int(k)
    else:
        raise UsageError("the p file must hold an exponent matrix or a {\"p12\": k} object")
    if any(not (1 <= i <= n and 1 <= j <= n) for i, j in out):
        raise UsageError("p index out of range")
    return out


def cmd_twist(args) -> int:
    p = read_p_exponents(args.pfile, args.n)
    r = twist_check(args.n, args.L, args.qexp, p)
    r = {"command": "twist", "inputs": {"n": args.n, "L": args.L, "qexp": args.qexp,
                                        "p_exps": {f"p{i}{j}": k for (i, j), k in sorted(p.items())}},
         **r}
    emit(r)
    return verdict_code(r["isomorphic"])


# ----------------------------------------------------------------------
# presentation commands


def _check_nm(n: int, m: int) -> None:
    if n < 2 or m < 3 or m % 2 == 0:
        raise UsageError("need n >= 2 and odd m >= 3")


def cmd_gb(args) -> int:
    _check_nm(args.n, args.m)
    r = groebner_verify(args.n, args.m)
    emit({"command": "gb", **r})
    return verdict_code(r["holds"])


def cmd_hilbert(args) -> int:
    _check_nm(args.n, args.m)
    if args.max_degree < 0:
        raise UsageError("--max-degree must be non-negative")
    counts = [normal_monomial_count(args.n, args.m, N) for N in range(args.max_degree + 1)]
    r = hilbert_degree(args.n, args.m)
    emit({"command": "hilbert", "inputs": {"n": args.n, "m": args.m, "max_degree": args.max_degree},
          "counts_by_degree": counts, "hilbert_polynomial_degree": r["degree"],
          "krull_dimension": r["krull_dimension"], "certifying_window": r})
    return 0


def cmd_jacobian(args) -> int:
    _check_nm(args.n, args.m)
    point = [parse_number(v) for v in args.point.split(",")]
    rank = jacobian_rank_at(args.n, args.m, point)
    emit({"command": "jacobian", "inputs": {"n": args.n, "m": args.m,
                                            "point": [str(v) for v in point]},
          "rank": rank})
    return 0


def cmd_plocus(args) -> int:
    _check_nm(2, args.m)
    r = p_locus_survey(args.m, args.samples, args.seed)
    emit({"command": "plocus", **r})
    return verdict_code(r["holds"])


def cmd_socle(args) -> int:
    _check_nm(args.n, args.m)
    r = socle_witness(args.n, args.m)
    emit({"command": "socle", **r})
    return verdict_code(r["not_gorenstein"])


# ----------------------------------------------------------------------
# discriminants and witnesses


def cmd_disc_affine(args) -> int:
    if args.g < 1 or args.m < 2:
        raise UsageError("need g >= 1 and m >= 2")
    r = qaffine_discriminant(None, args.g, args.m)
    emit({"command": "disc affine", **r})
    ok = r["matches_claim"] and r.get("dense_determinant_agrees", True)
    return verdict_code(ok)


def cmd_disc_check(args) -> int:
    P, spec = load_algebra(args.spec)
    if P.mode != "cyclotomic":
        raise UsageError("discriminant checks need a root-of-unity spec")
    ell = args.ell or power_centrality(P)["ell"]
    check = discriminant_modular_check if args.modular else discriminant_eval_check
    r = check(P, ell, args.claim, args.points, args.seed)
    r.pop("points", None)
    emit({"command": "disc check", "inputs": {"spec_digest": spec_digest(spec), "ell": ell,
                                              "points": args.points, "seed": args.seed,
                                              "modular": args.modular}, **r})
    return verdict_code(r["verdict"] == "pass")


def cmd_witness(args) -> int:
    r = inner_witness_check(args.family)
    emit({"command": "witness", **r})
    return verdict_code(r["holds"])


# ----------------------------------------------------------------------
# morphisms


def read_morphism(path: str, P: QMAPresentation, spec: dict):
    data = load_json(path)
    if not isinstance(data, dict) or not isinstance(data.get("images"), dict):
        raise UsageError(f"{path}: expected {{\"algebra\": ..., \"images\": {{...}}}}")
    ref = data.get("algebra")
    if isinstance(ref, dict) and spec_digest(ref) != spec_digest(spec):
        raise UsageError("the morphism file names a different algebra than the given spec")
    images = {}
    for key, text in data["images"].items():
        pos = parse_position(key)
        if pos not in P.index:
            raise UsageError(f"{key} is not a generator of this algebra")
        images[pos] = parse_element(text, P)
    return images, ref


def cmd_auto_verify(args) -> int:
    P, spec = load_algebra(args.spec)
    images, ref = read_morphism(args.morphfile, P, spec)
    f = make_endomorphism(P, images, "user map")
    emit({"command": "auto verify", "inputs": {"spec_digest": spec_digest(spec),
                                               "algebra_reference": ref}, **f.to_report()})
    return verdict_code(bool(f.verified))


def cmd_auto_builtin(args) -> int:
    if args.name not in BUILTINS:
        raise UsageError(f"unknown built-in {args.name!r}; choose from {', '.join(BUILTINS)}")
    report = {"command": "auto builtin", "inputs": {"name": args.name, "n": args.n, "m": args.m}}
    try:
        f = builtin(args.name, args.n, args.m)
    except MorphismError as err:
        if "failed verification" not in str(err):
            raise
        report.update({"verified": False, "error": str(err)})
        emit(report)
        return 1
    report.update(f.to_report())
    partner = INVERSE_PAIRS.get(args.name) or next(
        (k for k, v in INVERSE_PAIRS.items() if v == args.name), None)
    if partner is not None:
        g = builtin(partner, args.n, args.m, f.P)
        report["inverse"] = {"name": partner, "two_sided": verify_inverse(f, g)}
    emit(report)
    return verdict_code(bool(f.verified))


def cmd_auto_word(args) -> int:
    target = parse_position(args.target)
    if not (1 <= target[0] <= args.n and 1 <= target[1] <= args.n):
        raise UsageError("target generator out of range")
    _check_nm(args.n, args.m)
    img = word_action(args.n, args.m, args.word, target)
    differs = img != img.P.x(*target)
    name = f"x{target[0]}{target[1]}"
    if args.json:
        emit({"command": "auto word", "inputs": {"n": args.n, "m": args.m, "word": args.word,
                                                 "target": name},
              "image": format_element(img), "differs": differs})
    else:
        print(f"w({name}) = {format_element(img)}")
        print(f"differs from {name}: {'true' if differs else 'false'}")
    return 0


# ----------------------------------------------------------------------
# acceptance


def cmd_accept(args) -> int:
    only = args.only.split(",") if args.only else None
    results = run_suite(args.suite, echo=lambda line: print(line, flush=True), only=only)
    ok = all(r.holds for r in results)
    print(f"{sum(r.holds for r in results)}/{len(results)} criteria pass")
    if args.report:
        with open(args.report, "w") as fh:
            json.dump({"command": "accept", "inputs": {"suite": args.suite, "only": only},
                       "criteria": [r.to_report(args.timings) for r in results], "holds": ok},
                      fh, indent=2, default=str)
            fh.write("\n")
    return verdict_code(ok)


# ----------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qma", description="Exact computations in quantum matrix algebras.")
    ap.add_argument("--version", action="version", version=f"qma {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def spec_cmd(name, func, help_):
        p = sub.add_parser(name, help=help_)
        p.add_argument("spec", help="algebra spec JSON file")
        p.set_defaults(func=func)
        return p

    p = spec_cmd("nf", cmd_nf, "normal form of an expression")
    p.add_argument("expr")
    p.add_argument("--json", action="store_true")
    p = spec_cmd("det", cmd_det, "quantum determinant or a minor")
    p.add_argument("--minor", nargs=2, metavar=("I", "J"), help="row and column lists, e.g. 1,2 2,3")
    p.add_argument("--comp", nargs=2, type=int, metavar=("i", "j"), help="complementary minor A(i,j)")
    p.add_argument("--dt", type=int, metavar="t", help="top-right t x t minor")
    p.add_argument("--json", action="store_true")
    p = spec_cmd("central", cmd_central, "test whether an expression is central")
    p.add_argument("expr")
    spec_cmd("center-gens", cmd_center_gens, "check the center generators at a root of unity")
    spec_cmd("laplace", cmd_laplace, "check Laplace expansions of the determinant")
    spec_cmd("minor-ids", cmd_minor_ids, "check the 3x3 minor identities")

    p = sub.add_parser("twist", help="compare a cocycle twist with the multiparameter algebra")
    p.add_argument("n", type=int)
    p.add_argument("L", type=int, help="level of the root of unity")
    p.add_argument("qexp", type=int, help="q = zeta_L^qexp")
    p.add_argument("pfile", help="JSON with p exponents")
    p.set_defaults(func=cmd_twist)

    for name, func, help_ in (("gb", cmd_gb, "verify the Groebner basis of the center presentation"),
                              ("socle", cmd_socle, "socle of the quotient by the Z_ij")):
        p = sub.add_parser(name, help=help_)
        p.add_argument("n", type=int)
        p.add_argument("m", type=int)
        p.set_defaults(func=func)
    p = sub.add_parser("hilbert", help="normal-monomial counts and Hilbert polynomial degree")
    p.add_argument("n", type=int)
    p.add_argument("m", type=int)
    p.add_argument("--max-degree", type=int, default=10)
    p.set_defaults(func=cmd_hilbert)
    p = sub.add_parser("jacobian", help="Jacobian rank of the presentation at a point")
    p.add_argument("n", type=int)
    p.add_argument("m", type=int)
    p.add_argument("--point", required=True, help="comma-separated rational coordinates")
    p.set_defaults(func=cmd_jacobian)
    p = sub.add_parser("plocus", help="sample Jacobian ranks around the claimed locus (n = 2)")
    p.add_argument("m", type=int)
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_plocus)

    disc = sub.add_parser("disc", help="discriminant computations").add_subparsers(dest="disc", required=True)
    p = disc.add_parser("affine", help="quantum affine space discriminant")
    p.add_argument("g", type=int)
    p.add_argument("m", type=int)
    p.set_defaults(func=cmd_disc_affine)
    p = disc.add_parser("check", help="ratio test of a claimed discriminant formula")
    p.add_argument("spec")
    p.add_argument("--claim", required=True)
    p.add_argument("--points", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--ell", type=int, help="power defining the central subalgebra (default: detected)")
    p.add_argument("--modular", action="store_true", help="evaluate modulo a large prime (probabilistic)")
    p.set_defaults(func=cmd_disc_check)

    p = sub.add_parser("witness", help="inner-derivation witness displays")
    p.add_argument("family", choices=["n2", "n3"])
    p.set_defaults(func=cmd_witness)

    auto = sub.add_parser("auto", help="endomorphisms and automorphisms").add_subparsers(dest="auto", required=True)
    p = auto.add_parser("verify", help="verify a user-supplied map")
    p.add_argument("spec")
    p.add_argument("morphfile")
    p.set_defaults(func=cmd_auto_verify)
    p = auto.add_parser("builtin", help="verify a built-in map")
    p.add_argument("name")
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--m", type=int, default=3)
    p.set_defaults(func=cmd_auto_builtin)
    p = auto.add_parser("word", help="apply a word in phi and psi")
    p.add_argument("n", type=int)
    p.add_argument("m", type=int)
    p.add_argument("word")
    p.add_argument("--target", default="x11")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_auto_word)

    p = sub.add_parser("accept", help="run the acceptance suite")
    p.add_argument("--suite", choices=["fast", "full"], default="fast")
    p.add_argument("--report", help="write the JSON report here")
    p.add_argument("--timings", action="store_true", help="include wall-clock times in the report")
    p.add_argument("--only", help="comma-separated criterion keys, e.g. 1,6a")
    p.set_defaults(func=cmd_accept)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except USAGE_ERRORS as err:
        print(f"qma {args.command}: error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
