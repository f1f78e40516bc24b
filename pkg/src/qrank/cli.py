"""Command-line front end.

Every subcommand prints one JSON report on stdout (and to ``--json`` when
given).  Wall time goes to stderr so reports are byte-identical across runs.
Exit codes: 0 ok, 2 usage, 3 malformed data, 4 budget exceeded, 5 a
requested verdict failed.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time
from pathlib import Path
from typing import Sequence

from . import linalg
from .codes import (
    RankMetricCode,
    apply_equivalence,
    classify_linearity,
    code_from_json,
    code_to_json,
    induced_qmatroid,
    is_almost_affine,
    min_distance,
    parse_scope,
    puncture,
    shorten,
)
from .constructions import (
    BUNDLED,
    agtg_make,
    bundled_examples,
    gabidulin_make,
    load_semifield,
    semifield_code_2dim,
    semifield_code_kdim,
    semifield_from_json,
    semifield_search,
    semifield_validate,
)
from .errors import BudgetExceeded, NotAlmostAffine, NotSimple, QRankError
from .fields import tower_to_json
from .geometry import code_from_geometry, geometry_from_code, verify_geometry_properties
from .invariants import (
    dual_circuits,
    generalized_weights,
    macwilliams,
    rank_counts,
    weight_distribution_bruteforce,
    weight_distribution_formula,
)
from .ports import Port, connectivity, port_predicates, vertical_separations
from .qmatroids import circuits, rank_table_to_json, verify_axioms
from .subspaces import DEFAULT_BUDGET, Subspace, canonicalize, count_subspaces

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_BUDGET, EXIT_VERDICT = 0, 2, 3, 4, 5


class UsageError(QRankError):
    pass


class DataFileError(QRankError):
    pass


# ---------------------------------------------------------------------------
# input helpers
# ---------------------------------------------------------------------------

def _read_json(path: str):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise DataFileError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise DataFileError(f"{path} is not valid JSON: {exc}") from None


_LOADED_TOWER: list = []


def load_code(path: str) -> RankMetricCode:
    code = code_from_json(_read_json(path))
    _LOADED_TOWER[:] = [code.tower]
    return code


def parse_subspace(text: str, code: RankMetricCode) -> Subspace:
    """A subspace given as JSON rows, e.g. '[[1,0,1,0]]'."""
    try:
        rows = json.loads(text)
    except json.JSONDecodeError:
        raise DataFileError(f"subspace {text!r} is not JSON") from None
    if not isinstance(rows, list) or any(not isinstance(r, list) or len(r) != code.n for r in rows):
        raise DataFileError(f"subspace rows must be lists of length {code.n}")
    f = code.tower.base
    if any(not isinstance(x, int) or not 0 <= x < f.order for r in rows for x in r):
        raise DataFileError(f"subspace entries must be elements of F_{f.order}")
    return canonicalize(f, rows, code.n)


def _rows(v: Subspace) -> list[list[int]]:
    return [list(r) for r in v.rows]


def _budget(args) -> int | None:
    b = getattr(args, "budget", None)
    return DEFAULT_BUDGET if b is None else b


# ---------------------------------------------------------------------------
# subcommands; each returns (payload, verdicts)
# ---------------------------------------------------------------------------

def cmd_code(args):
    code = load_code(args.file)
    action = args.action
    if action == "info":
        lin = classify_linearity(code)
        dim = code.dimension
        return {"n": code.n, "size": code.size, "storage": code.storage,
                "dimension": str(dim) if not isinstance(dim, float) else dim,
                "linearity": lin.to_json()}, {}
    if action == "check-aa":
        parse_scope(args.scope)
        v = is_almost_affine(code, args.scope, args.seed, _budget(args))
        if v.partial and v.almost_affine is not False:
            raise BudgetExceeded(count_subspaces(code.n, code.q), _budget(args))
        return v.to_json(), {"almost_affine": v.almost_affine is not False}
    if action == "qmatroid":
        m = induced_qmatroid(code)
        return rank_table_to_json(m, _budget(args)), {}
    if action in ("puncture", "shorten"):
        if args.z is None:
            raise UsageError(f"code {action} needs --z")
        z = parse_subspace(args.z, code)
        out = puncture(code, z) if action == "puncture" else shorten(code, z)
        return code_to_json(out), {}
    if action == "mindist":
        return {"min_distance": min_distance(code)}, {}
    raise UsageError(f"unknown code action {action!r}")  # pragma: no cover


def cmd_qmatroid(args):
    code = load_code(args.file)
    m = induced_qmatroid(code)
    budget = _budget(args)
    g = verify_axioms(m, "global", budget=budget)
    loc = verify_axioms(m, "local", budget=budget)
    payload = rank_table_to_json(m, budget)
    payload["axioms"] = {"global": g.to_json(), "local": loc.to_json()}
    return payload, {"global_axioms": g.ok, "local_axioms": loc.ok}


def _weights(code: RankMetricCode, budget):
    m = induced_qmatroid(code)
    formula = weight_distribution_formula(m, code.m, budget)
    return m, formula


def cmd_weights(args):
    code = load_code(args.file)
    m, formula = _weights(code, _budget(args))
    brute = weight_distribution_bruteforce(code)
    return ({"A": list(formula.A), "A_bruteforce": list(brute.A), "anchor": list(brute.anchor),
             "rank_counts": rank_counts(m, _budget(args)).to_json()},
            {"formula_matches_bruteforce": formula.A == brute.A})


def cmd_dual_weights(args):
    code = load_code(args.file)
    budget = _budget(args)
    m, formula = _weights(code, budget)
    k = m.full_rank
    b1 = macwilliams(formula, k, code.m, code.n, code.q, "solve")
    b2 = macwilliams(formula, k, code.m, code.n, code.q, "dual_formula", m=m, budget=budget)
    return ({"A": list(formula.A), "B": b1.as_json(), "integral": b1.integral, "nonneg": b1.nonneg},
            {"paths_agree": b1.B == b2.B})


def cmd_gen_weights(args):
    code = load_code(args.file)
    m = induced_qmatroid(code)
    d = generalized_weights(m, code=code, budget=_budget(args)) if m.full_rank else ()
    return {"d": list(d)}, {}


def cmd_circuits(args):
    code = load_code(args.file)
    m = induced_qmatroid(code)
    budget = _budget(args)
    circ = dual_circuits(m, budget) if args.dual else circuits(m, budget=budget)
    return {"dual": bool(args.dual), "circuits": [_rows(c) for c in circ]}, {}


def cmd_port(args):
    code = load_code(args.code)
    m = induced_qmatroid(code)
    port = Port(m, parse_subspace(args.p0, code), parse_subspace(args.p, code))
    verdict = port_predicates(port)
    return verdict.to_json(), {}


def cmd_connectivity(args):
    code = load_code(args.code)
    m = induced_qmatroid(code)
    payload: dict = {"connectivity": connectivity(m)}
    if args.t is not None:
        seps = vertical_separations(m, args.t, budget=_budget(args))
        payload["t"] = args.t
        payload["separations"] = [s.to_json() for s in seps]
    return payload, {}


def cmd_construct(args):
    kind = args.kind
    if kind == "agtg":
        code = agtg_make(args.q0, args.u, args.n, args.k, args.s, args.h, args.eta)
    elif kind == "gabidulin":
        code = gabidulin_make(args.q, args.n, args.k, args.s)
    elif kind == "example":
        code = bundled_examples(args.name)
    elif kind == "semifield-search":
        t = semifield_search(args.q, args.m)
        if t is None:
            return {"semifield": None}, {"found": False}
        cert = semifield_validate(t)
        _write_out(args.out, t.to_json())
        return {"semifield": t.to_json(), "certificate": cert.to_json()}, {"found": cert.valid}
    elif kind == "semifield-code":
        t = semifield_from_json(_read_json(args.semifield)) if args.semifield else load_semifield()
        code = semifield_code_2dim(t) if args.k == 2 else semifield_code_kdim(t, args.k)
    else:  # pragma: no cover
        raise UsageError(f"unknown construction {kind!r}")
    _LOADED_TOWER[:] = [code.tower]
    data = code_to_json(code)
    _write_out(args.out, data)
    return data, {}


def _write_out(path: str | None, data) -> None:
    if not path:
        return
    try:
        Path(path).write_text(json.dumps(data, sort_keys=True) + "\n")
    except OSError as exc:
        raise DataFileError(f"cannot write {path}: {exc.strerror}") from None


def cmd_geometry(args):
    code = load_code(args.file)
    try:
        g = geometry_from_code(code)
    except (NotSimple, NotAlmostAffine) as exc:
        return {"error": type(exc).__name__, "message": str(exc)}, {"geometry": False}
    if args.action == "build":
        return g.to_json(), {}
    if args.action == "verify":
        v = verify_geometry_properties(g, seed=args.seed, all_bases=args.all_bases, budget=_budget(args))
        return v.to_json(), {"properties": v.ok}
    rng = random.Random(args.seed)
    f = code.tower.base
    while True:
        basis = [[rng.randrange(f.order) for _ in range(code.n)] for _ in range(code.n)]
        if linalg.is_invertible(f, basis):
            break
    words = set(code.codewords())
    std = set(code_from_geometry(g).codewords())
    other = set(code_from_geometry(g, basis).codewords())
    target = set(apply_equivalence(code, basis).codewords())
    return ({"basis": basis, "standard_roundtrip": std == words, "random_basis_roundtrip": other == target},
            {"standard_roundtrip": std == words, "random_basis_roundtrip": other == target})


def cmd_verify_paper(args):
    from .verification import run_criterion

    results = {}
    verdicts = {}
    for n in args.only or range(1, 14):
        r = run_criterion(n, args.seed)
        print(r.line(), file=sys.stderr, flush=True)
        results[str(n)] = r.to_json()
        verdicts[f"criterion {n}"] = r.passed
    return {"criteria": results}, verdicts


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _nonneg(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if v < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="seed for every sampled scope")
    common.add_argument("--json", metavar="PATH", help="also write the report to PATH")
    common.add_argument("--budget", type=_nonneg, default=None, help="maximum number of subspaces to enumerate")

    p = _Parser(prog="qrank", description="Almost affine rank-metric codes and their q-matroids.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("code", parents=[common], help="code facts and derived codes")
    c.add_argument("action", choices=["info", "check-aa", "qmatroid", "puncture", "shorten", "mindist"])
    c.add_argument("file")
    c.add_argument("--scope", default="all", help="all | dims=D | sample=N")
    c.add_argument("--z", help="subspace Z as JSON rows")
    c.set_defaults(func=cmd_code)

    for name, func, helptext in (
        ("qmatroid", cmd_qmatroid, "rank table and axiom verdicts"),
        ("weights", cmd_weights, "rank-weight distribution by formula and brute force"),
        ("dual-weights", cmd_dual_weights, "MacWilliams dual distance distribution"),
        ("gen-weights", cmd_gen_weights, "generalized weights"),
    ):
        s = sub.add_parser(name, parents=[common], help=helptext)
        s.add_argument("file")
        s.set_defaults(func=func)

    s = sub.add_parser("circuits", parents=[common], help="circuits of M_C or its dual")
    s.add_argument("file")
    s.add_argument("--dual", action="store_true")
    s.set_defaults(func=cmd_circuits)

    s = sub.add_parser("port", parents=[common], help="q-matroid port predicates")
    s.add_argument("--code", required=True)
    s.add_argument("--p0", required=True, help="dealer subspace as JSON rows")
    s.add_argument("--p", required=True, help="complementary subspace as JSON rows")
    s.set_defaults(func=cmd_port)

    s = sub.add_parser("connectivity", parents=[common], help="vertical connectivity")
    s.add_argument("--code", required=True)
    s.add_argument("--t", type=int)
    s.set_defaults(func=cmd_connectivity)

    s = sub.add_parser("construct", parents=[common], help="build a code or semifield")
    kinds = s.add_subparsers(dest="kind", required=True, parser_class=_Parser)
    k = kinds.add_parser("agtg", parents=[common])
    for flag in ("q0", "u", "n", "k", "s", "h"):
        k.add_argument(f"--{flag}", type=int, required=True)
    k.add_argument("--eta", type=int)
    k = kinds.add_parser("gabidulin", parents=[common])
    for flag in ("q", "n", "k"):
        k.add_argument(f"--{flag}", type=int, required=True)
    k.add_argument("--s", type=int, default=1)
    k = kinds.add_parser("semifield-code", parents=[common])
    k.add_argument("--k", type=int, default=2)
    k.add_argument("--semifield", help="semifield JSON file (default: the shipped order-16 table)")
    k = kinds.add_parser("semifield-search", parents=[common])
    k.add_argument("--q", type=int, required=True)
    k.add_argument("--m", type=int, required=True)
    k = kinds.add_parser("example", parents=[common])
    k.add_argument("name", choices=sorted(BUNDLED))
    for k in kinds.choices.values():
        k.add_argument("--out", metavar="PATH", help="write the constructed object alone to PATH")
    s.set_defaults(func=cmd_construct)

    s = sub.add_parser("geometry", parents=[common], help="partial affine q-geometry of a code")
    s.add_argument("action", choices=["build", "verify", "roundtrip"])
    s.add_argument("file")
    s.add_argument("--all-bases", action="store_true", help="check Property 2 on every ordered basis")
    s.set_defaults(func=cmd_geometry)

    s = sub.add_parser("verify-paper", parents=[common], help="run the acceptance suite")
    s.add_argument("--only", type=int, nargs="+", choices=range(1, 14), metavar="N")
    s.set_defaults(func=cmd_verify_paper)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    _LOADED_TOWER.clear()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    start = time.perf_counter()
    try:
        payload, verdicts = args.func(args)
    except UsageError as exc:
        print(f"qrank: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceeded as exc:
        print(f"qrank: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (NotAlmostAffine, NotSimple) as exc:
        print(f"qrank: verdict failure: {exc}", file=sys.stderr)
        return EXIT_VERDICT
    except (DataFileError, QRankError, ValueError) as exc:
        print(f"qrank: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    elapsed = time.perf_counter() - start
    report = {"command": argv, "result": payload, "verdicts": verdicts}
    if _LOADED_TOWER:
        report["tower"] = tower_to_json(_LOADED_TOWER[0])
    if getattr(args, "scope", None) is not None:
        kind, val = parse_scope(args.scope)
        report["scope"] = {"kind": kind, "value": val, "sampled": kind == "sample", "seed": args.seed}
    text = json.dumps(report, sort_keys=True, indent=2) + "\n"
    sys.stdout.write(text)
    if args.json:
        try:
            Path(args.json).write_text(text)
        except OSError as exc:
            print(f"qrank: cannot write {args.json}: {exc.strerror}", file=sys.stderr)
            return EXIT_DATA
    print(f"wall-time: {elapsed:.3f}s", file=sys.stderr)
    return EXIT_OK if all(verdicts.values()) else EXIT_VERDICT


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
