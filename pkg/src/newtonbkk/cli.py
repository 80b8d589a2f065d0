"""Command-line front end.

Input files are JSON::

    {"n": 3, "field": "Q" | {"Fp": 32003},
     "polynomials": [[{"exp": [1, 0, 0], "coef": "3/2"}, ...], ...]}

or ``{"n": 3, "supports": [[[1, 0, 0], ...], ...]}`` for jobs that only need
exponents.  A coefficient may be the string ``"generic"``; such terms get a
random nonzero value drawn from the job seed.  With ``--format expr`` the
file holds one polynomial per line in ``3*x1^2*x3 - 5/2*x2 + 1`` syntax
(``#`` starts a comment, an optional ``n = 3`` line fixes the arity).

Exit codes: 0 success or non-degenerate, 1 parse error, 2 semantic error,
3 degenerate, 4 oracle budget exceeded.
"""
from __future__ import annotations

import argparse
import json
import os
import random
import re
import sys
from fractions import Fraction

from . import local
from .affine import SubsetFamily, bkk_extended, check_P_nondegenerate, classify_subspaces
from .geometry import convex_hull, lattice_volume, mixed_volume
from .local import (
    check_G_nondegenerate,
    check_inner_newton_nondegenerate,
    check_newton_nondegenerate,
    kushnirenko_solve,
    mult0_finiteness,
    mult0_generic,
)
from .newton import WeightVector, diagram_of, initial_form
from .polysys import (
    DEFAULT_PRIME,
    GF,
    LOCAL_DEGLEX,
    GREVLEX,
    QQ,
    BudgetExceeded,
    SparsePolynomial,
    buchberger,
    mora_local_length,
    parse_polynomial,
    partial_derivative,
    sample_admissible,
    torus_has_common_zero,
    torus_root_count,
)

EXIT_OK, EXIT_PARSE, EXIT_SEMANTIC, EXIT_DEGENERATE, EXIT_BUDGET = 0, 1, 2, 3, 4
ENV_PREFIX = "NEWTONBKK_"

COMMANDS = ("mixed-volume", "mult0", "milnor", "kushnirenko", "bkk", "check-local",
            "check-newton", "check-inner", "check-affine", "oracle-compare", "corpus")


class ParseError(Exception):
    pass


class SemanticError(Exception):
    pass


# ---------------------------------------------------------------------------
# parsing

def parse_field(text):
    if isinstance(text, dict):
        if set(text) != {"Fp"}:
            raise SemanticError(f"unknown field {text!r}")
        text = text["Fp"]
    text = str(text).strip()
    if text.upper() in ("Q", "QQ", "0", "RATIONAL"):
        return QQ
    m = re.fullmatch(r"(?:GF\((\d+)\)|F[Pp]?:?(\d+)|(\d+))", text)
    if not m:
        raise SemanticError(f"unknown field {text!r}")
    p = int(next(g for g in m.groups() if g))
    try:
        return GF(p)
    except ValueError as exc:
        raise SemanticError(str(exc)) from exc


def parse_family(text, n):
    """``[[1,2],[3]]`` or ``1,2;3``; an empty member is written ``[]`` or ``{}``."""
    if text is None:
        return SubsetFamily.of(n)
    text = text.strip()
    if not text:
        return SubsetFamily.of(n)
    if text.startswith("["):
        try:
            members = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"--S: {exc.msg} at column {exc.colno}") from exc
    else:
        members = []
        for chunk in text.split(";"):
            chunk = chunk.strip().strip("{}")
            members.append([int(x) for x in chunk.split(",") if x.strip()])
    out = []
    for member in members:
        if any(not isinstance(i, int) or not 1 <= i <= n for i in member):
            raise SemanticError(f"subset {member} is not inside [1..{n}]")
        out.append(frozenset(member))
    return SubsetFamily.of(n, out)


def _check_exponent(exp, n, where):
    if not isinstance(exp, list) or len(exp) != n:
        raise SemanticError(f"{where}: exponent must be a list of {n} integers")
    if any(not isinstance(e, int) or isinstance(e, bool) for e in exp):
        raise SemanticError(f"{where}: exponent entries must be integers")
    if any(e < 0 for e in exp):
        raise SemanticError(f"{where}: negative exponent {exp}")
    return tuple(exp)


class System:
    """What an input file holds: arity, field, supports and maybe polynomials."""

    def __init__(self, n, field, supports, polynomials=None):
        self.n = n
        self.field = field
        self.supports = supports
        self.polynomials = polynomials

    def require_polynomials(self):
        if self.polynomials is None:
            raise SemanticError("this command needs polynomials, the file only has supports")
        return self.polynomials

    def require_square(self):
        if len(self.supports) != self.n:
            raise SemanticError(f"need {self.n} entries for n = {self.n}, got {len(self.supports)}")

    def require_single(self):
        if len(self.supports) != 1:
            raise SemanticError(f"need exactly one polynomial, got {len(self.supports)}")


def _load_json(text):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc


def system_from_json(data, field=None, seed=0):
    if not isinstance(data, dict) or "n" not in data:
        raise SemanticError('top level must be an object with key "n"')
    n = data["n"]
    if not isinstance(n, int) or n < 1:
        raise SemanticError('"n" must be a positive integer')
    if field is None:
        field = parse_field(data.get("field", "Q"))
    if "polynomials" in data:
        rng = random.Random(seed)
        polys, supports = [], []
        for j, raw in enumerate(data["polynomials"], 1):
            terms = {}
            for t, term in enumerate(raw, 1):
                where = f"polynomial {j}, term {t}"
                if not isinstance(term, dict) or "exp" not in term:
                    raise SemanticError(f'{where}: expected {{"exp": [...], "coef": ...}}')
                exp = _check_exponent(term["exp"], n, where)
                coef = term.get("coef", "generic")
                if coef == "generic":
                    value = field.random_nonzero(rng)
                else:
                    try:
                        value = field(Fraction(str(coef)))
                    except (ValueError, ZeroDivisionError) as exc:
                        raise ParseError(f"{where}: bad coefficient {coef!r}") from exc
                terms[exp] = terms.get(exp, 0) + value
            f = SparsePolynomial(n, terms, field)
            if f.is_zero():
                raise SemanticError(f"polynomial {j} is zero")
            polys.append(f)
            supports.append(f.support())
        return System(n, field, supports, polys)
    if "supports" in data:
        supports = []
        for j, raw in enumerate(data["supports"], 1):
            pts = [_check_exponent(p, n, f"support {j}, point {t}") for t, p in enumerate(raw, 1)]
            if not pts:
                raise SemanticError(f"support {j} is empty")
            supports.append(sorted(set(pts)))
        return System(n, field, supports)
    raise SemanticError('expected "polynomials" or "supports"')


def system_from_expr(text, field=None):
    field = field or QQ
    lines = []
    n = None
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        m = re.fullmatch(r"n\s*[=:]\s*(\d+)", line)
        if m:
            n = int(m.group(1))
            continue
        lines.append((lineno, line))
    if not lines:
        raise ParseError("no polynomials in input")
    if n is None:
        used = [int(i) for _, line in lines for i in re.findall(r"x(\d+)", line)]
        n = max(used, default=1)
    polys = []
    for lineno, line in lines:
        try:
            f = parse_polynomial(line, n, field)
        except ValueError as exc:
            raise ParseError(f"line {lineno}: {exc}") from exc
        if f.is_zero():
            raise SemanticError(f"line {lineno}: polynomial is zero")
        polys.append(f)
    return System(n, field, [f.support() for f in polys], polys)


def parse_system(path, fmt="json", field=None, seed=0):
    try:
        with open(path, encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from exc
    if fmt == "expr":
        return system_from_expr(text, field)
    return system_from_json(_load_json(text), field, seed)


# ---------------------------------------------------------------------------
# commands

def _num(x):
    if isinstance(x, float):
        return "inf" if x > 0 else "-inf"
    if isinstance(x, Fraction):
        return str(x)
    return x


def _hulls(system):
    return [convex_hull(pts, system.n) for pts in system.supports]


def _diagrams(system):
    return [diagram_of(pts, system.n) for pts in system.supports]


def cmd_mixed_volume(system, args):
    system.require_square()
    return EXIT_OK, {"command": "mixed-volume", "value": mixed_volume(_hulls(system))}


def cmd_mult0(system, args):
    system.require_square()
    diagrams = _diagrams(system)
    status = mult0_finiteness(diagrams)
    result = mult0_generic(diagrams)
    return EXIT_OK, {"command": "mult0", "status": status, **result.to_json()}


def _single(system):
    system.require_single()
    return system.require_polynomials()[0]


def cmd_milnor(system, args):
    f = _single(system)
    partials = [partial_derivative(f, i) for i in range(1, f.n + 1)]
    value = mora_local_length(partials, LOCAL_DEGLEX, budget=args.oracle_budget)
    return EXIT_OK, {"command": "milnor", "value": _num(value)}


def cmd_kushnirenko(system, args):
    system.require_single()
    out = kushnirenko_solve(system.supports[0], system.field.characteristic)
    return EXIT_OK, {"command": "kushnirenko", "finite": out["finite"],
                     "status": out["status"], "value": _num(out["min_milnor"]),
                     "ledger": local._jsonify(out.get("ledger", []))}


def cmd_bkk(system, args):
    system.require_square()
    S = parse_family(args.S, system.n)
    result = bkk_extended(_hulls(system), S)
    return EXIT_OK, {"command": "bkk", "S": [sorted(x) for x in S],
                     "classification": result.classification.to_json(), **result.to_json()}


def _verdict(name, verdict):
    code = EXIT_OK if verdict.nondegenerate else EXIT_DEGENERATE
    return code, {"command": name, **verdict.to_json()}


def cmd_check_local(system, args):
    system.require_square()
    return _verdict("check-local", check_G_nondegenerate(system.require_polynomials()))


def cmd_check_newton(system, args):
    return _verdict("check-newton", check_newton_nondegenerate(_single(system)))


def cmd_check_inner(system, args):
    return _verdict("check-inner", check_inner_newton_nondegenerate(_single(system)))


def cmd_check_affine(system, args):
    system.require_square()
    S = parse_family(args.S, system.n)
    return _verdict("check-affine", check_P_nondegenerate(system.require_polynomials(), S))


# oracle comparison ----------------------------------------------------------

def random_supports(n, rng, max_points=6, max_degree=3, convenient=True):
    """Random supports; ``convenient`` puts a pure power on every axis so
    that the multiplicity at the origin is finite."""
    supports = []
    for _ in range(n):
        pts = set()
        if convenient:
            for i in range(n):
                e = [0] * n
                e[i] = rng.randint(1, max_degree)
                pts.add(tuple(e))
        while len(pts) < max_points and rng.random() < 0.7:
            e = tuple(rng.randint(0, max_degree) for _ in range(n))
            if any(e):
                pts.add(e)
        supports.append(sorted(pts))
    return supports


def _parse_seeds(text):
    m = re.fullmatch(r"\s*(\d+)\s*\.\.\s*(\d+)\s*", text)
    if m:
        return list(range(int(m.group(1)), int(m.group(2)) + 1))
    return [int(x) for x in text.split(",") if x.strip()]


def _compare_once(target, supports, n, field, seed, budget):
    fs = sample_admissible(supports, field, seed)
    if target == "mult0":
        expected = mult0_generic([diagram_of(s, n) for s in supports]).value
        if not check_G_nondegenerate(fs).nondegenerate:
            return "DEGENERATE", expected, None
        actual = mora_local_length(fs, LOCAL_DEGLEX, budget=budget)
    elif target == "bkk":
        expected = bkk_extended([convex_hull(s, n) for s in supports]).value
        if not check_P_nondegenerate(fs).nondegenerate:
            return "DEGENERATE", expected, None
        actual = buchberger(fs, GREVLEX, budget=budget).length
    else:
        hulls = [convex_hull(s, n) for s in supports]
        expected = mixed_volume(hulls)
        actual = torus_root_count(fs, budget=budget)
    return ("AGREE" if actual == expected else "DISAGREE"), expected, actual


def cmd_oracle_compare(system, args):
    field = args.field_obj or GF(DEFAULT_PRIME)
    seeds = _parse_seeds(args.seeds) if args.seeds else [args.seed]
    rows = []
    worst = EXIT_OK
    for seed in seeds:
        if system is not None:
            supports, n = system.supports, system.n
        else:
            n = args.random_n
            supports = random_supports(n, random.Random(seed))
        try:
            verdict, expected, actual = _compare_once(args.target, supports, n, field,
                                                      seed, args.oracle_budget)
        except BudgetExceeded:
            verdict, expected, actual = "BUDGET", None, None
            worst = EXIT_BUDGET
        if verdict == "DISAGREE":
            worst = EXIT_SEMANTIC
        rows.append({"seed": seed, "verdict": verdict, "formula": _num(expected),
                     "oracle": _num(actual), "supports": [list(map(list, s)) for s in supports]})
    return worst, {"command": "oracle-compare", "target": args.target, "rows": rows}


# regression corpus ------------------------------------------------------------

def _ex0_supports():
    return [[(1, 0, 0), (0, 1, 0), (0, 0, 1)],
            [(3, 0, 0), (1, 0, 2), (0, 3, 0), (0, 1, 2)],
            [(2, 0, 0), (1, 0, 2), (0, 2, 0), (0, 1, 2)]]


TETRAHEDRON = [(0, 0, 0), (1, 1, 0), (0, 1, 1), (1, 0, 1)]


def _tetra_system(coeffs, field):
    """g_j = a_j + b_j xy + c_j yz + d_j zx with f_3 = z g_3."""
    out = []
    for j, (a, b, c, d) in enumerate(coeffs):
        lift = 1 if j == 2 else 0
        terms = {(0, 0, lift): a, (1, 1, lift): b, (0, 1, 1 + lift): c, (1, 0, 1 + lift): d}
        out.append(SparsePolynomial(3, terms, field))
    return out


def _c_example(field):
    """A system with a common zero (1,1) of f1, f2 where f31 and f41 vanish."""
    def poly(text):
        return parse_polynomial(text, 4, field)
    x3, x4 = poly("x3"), poly("x4")
    f1, f2 = poly("1+2*x1-3*x2"), poly("2-5*x1+3*x2^2")
    f3 = x3 * poly("x1-x2") + x4 * poly("1+4*x1+x2")
    f4 = x3 * poly("3*x1-2-x2") + x4 * poly("2+x1*x2")
    return [f1, f2, f3, f4]


def _witness_is_valid(fs, witness):
    kind = "degree" if witness["kind"] == "infinity" else "valuation"
    w = WeightVector(tuple(witness["I"]), tuple(witness["weight"]), kind)
    gs = [f.restrict(frozenset(witness["I"])) for f in fs]
    return torus_has_common_zero([initial_form(w, g) for g in gs if not g.is_zero()])


def corpus_cases():
    """(name, expected, thunk, note); note marks a documented deviation."""
    F = GF(DEFAULT_PRIME)
    ex0 = _ex0_supports()
    cases = [
        ("ex0 mult0", 6, lambda: mult0_generic([diagram_of(s, 3) for s in ex0]).value, None),
        ("ex0 bkk", 9, lambda: bkk_extended([convex_hull(s, 3) for s in ex0]).value, None),
        ("ex0 families", {"E": [], "I1": [[1, 2, 3], [3]]}, lambda: (lambda c: {
            "E": c["E"], "I1": sorted(c["I1"], key=lambda I: (-len(I), I))})(
            classify_subspaces([convex_hull(s, 3) for s in ex0]).to_json()), None),
        ("tetrahedron volume", 2, lambda: lattice_volume(convex_hull(TETRAHEDRON)), None),
    ]
    tetra = convex_hull(TETRAHEDRON)
    lifted = convex_hull([(a, b, c + 1) for a, b, c in TETRAHEDRON])
    cases.append(("b-example bound", 2, lambda: bkk_extended([tetra, tetra, lifted]).value, None))
    cases.append(("b-example T", [[1, 2]],
                  lambda: classify_subspaces([tetra, tetra, lifted]).to_json()["T"], None))
    c_polys = _c_example(F)
    cases.append(("c-example T", [[1, 2, 3, 4]], lambda: classify_subspaces(
        [convex_hull(f.support(), 4) for f in c_polys]).to_json()["T"], None))
    for k in (1, 2, 3):
        lin = convex_hull([(1, 0, 0), (0, 1, 0)])
        lin0 = convex_hull([(1, 0, 0), (0, 1, 0), (0, 0, 0)])
        quad = convex_hull([(1, 0, 0), (0, 1, 0), (2, 0, 0)])
        quad0 = convex_hull([(1, 0, 0), (0, 1, 0), (2, 0, 0), (0, 0, 0)])
        third = convex_hull([(1, 0, k), (0, 0, 0)])
        cases += [
            (f"counterexample k={k} bkk", 0,
             lambda a=lin, t=third: bkk_extended([a, a, t]).value, None),
            (f"counterexample k={k} hulled mv", k,
             lambda a=lin0, t=third: mixed_volume([a, a, t]), None),
            (f"counterexample' k={k} bkk", k,
             lambda a=quad, t=third: bkk_extended([a, a, t]).value, None),
            (f"counterexample' k={k} hulled mv", 2 * k,
             lambda a=quad0, t=third: mixed_volume([a, a, t]), None),
        ]
    same = [(3, 5, 7, 11), (3, 5, 19, 23), (3, 5, 37, 41)]
    b3 = _tetra_system(same, F)

    def b_case3():
        v = check_P_nondegenerate(b3)
        return (not v.nondegenerate and v.witness["kind"] == "infinity"
                and v.witness["I"] == [1, 2, 3] and _witness_is_valid(b3, v.witness))
    cases.append(("b-example case 3 degenerate at infinity", True, b_case3, None))

    def c_case2():
        v = check_P_nondegenerate(c_polys)
        zeros = [i for i, w in zip(v.witness["I"], v.witness["weight"]) if w == 0] if v.witness else None
        return (not v.nondegenerate and v.witness["kind"] == "centered" and zeros == [1, 2]
                and _witness_is_valid(c_polys, v.witness))
    cases.append(("c-example case 2 centered degeneracy", True, c_case2, None))
    milnor_support = [(1, 0, 0), (0, 3, 0), (0, 2, 1), (0, 1, 2), (0, 0, 3)]
    cases.append(("x1+(x2+x3)^3 minimal Milnor number", 1,
                  lambda: kushnirenko_solve(milnor_support, 0)["min_milnor"],
                  "a linear term makes the polynomial smooth at the origin, so the "
                  "Milnor number there is 0"))
    cases.append(("single monomial support is infinite", False,
                  lambda: kushnirenko_solve([(2, 2, 2)], 0)["finite"], None))
    return cases


def cmd_corpus(system, args):
    rows = []
    worst = EXIT_OK
    for name, expected, thunk, note in corpus_cases():
        got = thunk()
        if got == expected:
            status = "PASS"
        elif note:
            status = "KNOWN-DEVIATION"
        else:
            status = "FAIL"
            worst = EXIT_SEMANTIC
        row = {"case": name, "expected": _num(expected), "got": _num(got), "status": status}
        if note and status != "PASS":
            row["note"] = note
        rows.append(row)
    return worst, {"command": "corpus", "rows": rows}


HANDLERS = {
    "mixed-volume": cmd_mixed_volume, "mult0": cmd_mult0, "milnor": cmd_milnor,
    "kushnirenko": cmd_kushnirenko, "bkk": cmd_bkk, "check-local": cmd_check_local,
    "check-newton": cmd_check_newton, "check-inner": cmd_check_inner,
    "check-affine": cmd_check_affine, "oracle-compare": cmd_oracle_compare,
    "corpus": cmd_corpus,
}


# ---------------------------------------------------------------------------
# output

def render_text(report):
    lines = []
    command = report.get("command")
    if command in ("corpus",):
        for row in report["rows"]:
            tail = f"  ({row['note']})" if "note" in row else ""
            lines.append(f"{row['status']:<15} {row['case']}: expected {row['expected']}, "
                         f"got {row['got']}{tail}")
        return "\n".join(lines)
    if command == "oracle-compare":
        for row in report["rows"]:
            lines.append(f"{row['verdict']} seed={row['seed']} formula={row['formula']} "
                         f"oracle={row['oracle']}")
        return "\n".join(lines)
    if "nondegenerate" in report:
        if report["nondegenerate"]:
            return "nondegenerate"
        w = report.get("witness") or {}
        parts = [f"{k}={json.dumps(w[k])}" for k in sorted(w)]
        return "degenerate " + " ".join(parts)
    lines.append(f"value: {report['value']}")
    for key in ("status", "finite"):
        if key in report:
            lines.append(f"{key}: {json.dumps(report[key])}")
    for entry in report.get("ledger", []):
        lines.append("  " + json.dumps(entry, sort_keys=True))
    return "\n".join(lines)


def render(report, output):
    if output == "json":
        return json.dumps(report, sort_keys=True, indent=2)
    return render_text(report)


# ---------------------------------------------------------------------------
# argument handling

def _env(name, default=None):
    return os.environ.get(ENV_PREFIX + name, default)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="newtonbkk",
        description="Root counts and non-degeneracy tests for sparse polynomial systems.")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("target", nargs="?", help="oracle-compare: mult0, bkk or mixed-volume")
    parser.add_argument("input", nargs="?", help="input file (JSON, or text with --format expr)")
    parser.add_argument("--field", default=_env("FIELD"), help="Q or a prime p (default: file, else Q)")
    parser.add_argument("--seed", type=int, default=int(_env("SEED", "0")))
    parser.add_argument("--seeds", default=_env("SEEDS"), help="oracle-compare seeds, e.g. 1..5")
    parser.add_argument("--S", dest="S", default=_env("S"),
                        help="removed subspaces, e.g. '[[1,2],[3]]' or '1,2;3'")
    parser.add_argument("--output", choices=("text", "json"), default=_env("OUTPUT", "text"))
    parser.add_argument("--format", dest="fmt", choices=("json", "expr"), default=_env("FORMAT", "json"))
    parser.add_argument("--max-n", type=int, default=int(_env("MAX_N", str(local.MAX_N))))
    parser.add_argument("--oracle-budget", type=int, default=int(_env("ORACLE_BUDGET", "200000")))
    parser.add_argument("--random-n", type=int, default=int(_env("RANDOM_N", "2")),
                        help="oracle-compare without input: number of variables")
    return parser


def _fix_positionals(args, parser):
    # 'target' only exists for oracle-compare; elsewhere it is the input file
    if args.command == "oracle-compare":
        if args.target not in ("mult0", "bkk", "mixed-volume"):
            parser.error("oracle-compare needs a target: mult0, bkk or mixed-volume")
    else:
        if args.input is not None:
            parser.error("unexpected extra argument")
        args.input, args.target = args.target, None
        if args.input is None and args.command != "corpus":
            parser.error(f"{args.command} needs an input file")


def run(argv=None, out=None):
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    _fix_positionals(args, parser)
    try:
        args.field_obj = parse_field(args.field) if args.field else None
        system = None
        if args.input is not None:
            system = parse_system(args.input, args.fmt, args.field_obj, args.seed)
            if system.n > args.max_n:
                raise SemanticError(f"n = {system.n} exceeds --max-n {args.max_n}")
        previous_cap = local.MAX_N
        local.MAX_N = max(local.MAX_N, args.max_n)
        try:
            code, report = HANDLERS[args.command](system, args)
        finally:
            local.MAX_N = previous_cap
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except BudgetExceeded as exc:
        print(f"oracle budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (SemanticError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SEMANTIC
    print(render(report, args.output), file=out)
    return code


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
