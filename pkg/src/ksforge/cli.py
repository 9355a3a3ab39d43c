"""Command-line driver.

Exit codes: 0 success/pass, 1 verification failure, 2 usage or input error,
3 no construction recipe for the requested order.

Commands that produce an object print ``{"object": ..., "report": ...}``; with
``--out PATH`` the bare object goes to PATH and stdout gets
``{"out": PATH, "report": ...}``.  Every input file may be either a bare
object or such a document.  ``pipeline`` emits one bundle holding the recipe,
every stage's report and object, and the final KS statistics.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from . import ghmat, ksset, shadamard
from .ghmat import DEFAULT_BUDGET, DEFAULT_MAX_SIDE, GHMatrix, NotFound
from .report import VerificationReport

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_UNREACHABLE = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _default_budget() -> int:
    env = os.environ.get("KSFORGE_BUDGET")
    if env is None:
        return DEFAULT_BUDGET
    try:
        value = int(env)
    except ValueError:
        raise UsageError(f"KSFORGE_BUDGET must be an integer, got {env!r}")
    if value < 1:
        raise UsageError("KSFORGE_BUDGET must be positive")
    return value


def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def _load(path: str) -> dict:
    p = Path(path)
    if not p.is_file():
        raise UsageError(f"{path}: no such file")
    try:
        data = json.loads(p.read_text())
    except json.JSONDecodeError as e:
        raise UsageError(f"{path}: invalid JSON ({e})")
    if isinstance(data, dict) and "object" in data and "kind" not in data:
        data = data["object"]
    return data


def _parse(kind: str, path: str):
    data = _load(path)
    try:
        if kind == "gh":
            return GHMatrix.from_json(data)
        if kind == "shadamard":
            return shadamard.SHadamard.from_json(data)
        return ksset.KSPair.from_json(data)
    except (ValueError, TypeError) as e:
        raise UsageError(f"{path}: {e}")


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _emit_object(args, obj, report: VerificationReport, text_lines=()) -> int:
    payload = obj.to_json()
    if args.out:
        Path(args.out).write_text(_dumps(payload))
    if args.format == "json":
        doc = {"out": args.out} if args.out else {"object": payload}
        doc["report"] = report.to_json()
        sys.stdout.write(_dumps(doc))
    else:
        for line in text_lines:
            print(line)
        print(report.summary())
        if args.out:
            print(f"written to {args.out}")
    if not report.passed:
        _complain(report)
    return EXIT_OK if report.passed else EXIT_FAIL


def _emit_report(args, report: VerificationReport, extra: dict | None = None) -> int:
    if args.format == "json":
        doc = report.to_json()
        if extra:
            doc.update(extra)
        sys.stdout.write(_dumps(doc))
    else:
        print(report.summary())
        for k, v in (extra or {}).items():
            print(f"  {k}: {v}")
    if not report.passed:
        _complain(report)
    return EXIT_OK if report.passed else EXIT_FAIL


def _complain(report: VerificationReport) -> None:
    print(f"error: {report.kind} verification failed; witness: {report.witness}", file=sys.stderr)


# --- gh ----------------------------------------------------------------------


def cmd_gh_make_prime(args) -> int:
    try:
        M = ghmat.gh_cyclic_prime(args.p)
    except ValueError as e:
        raise UsageError(str(e))
    return _emit_object(args, M, ghmat.verify_gh(M), [f"GH({M.g},{M.lam})"])


def cmd_gh_search(args) -> int:
    try:
        M = ghmat.gh_search(args.g, args.lam, budget=args.budget, max_side=args.max_side)
    except ValueError as e:
        raise UsageError(str(e))
    except NotFound as e:
        report = VerificationReport("gh", False, witness={"not_found": e.reason, "nodes": e.nodes})
        return _emit_report(args, report)
    return _emit_object(args, M, ghmat.verify_gh(M), [f"GH({M.g},{M.lam})", str(M)])


def cmd_gh_compose(args) -> int:
    A, B = _parse("gh", args.a), _parse("gh", args.b)
    try:
        M = ghmat.gh_compose(A, B)
    except ValueError as e:
        raise UsageError(str(e))
    return _emit_object(args, M, ghmat.verify_gh(M), [f"GH({M.g},{M.lam}) of side {M.side}"])


def cmd_gh_verify(args) -> int:
    return _emit_report(args, ghmat.verify_gh(_parse("gh", args.file)))


def cmd_gh_import(args) -> int:
    M = _parse("gh", args.file)
    return _emit_object(args, M, ghmat.verify_gh(M))


def cmd_gh_export(args) -> int:
    M = _parse("gh", args.file)
    report = ghmat.verify_gh(M)
    text = ghmat.gh_export(M)
    if args.out:
        Path(args.out).write_text(text + "\n")
    else:
        print(text)
    if not report.passed:
        _complain(report)
    return EXIT_OK if report.passed else EXIT_FAIL


# --- shad --------------------------------------------------------------------


def cmd_shad_from_gh(args) -> int:
    M = _parse("gh", args.file)
    gh_report = ghmat.verify_gh(M)
    if not gh_report.passed:
        return _emit_report(args, gh_report)
    try:
        H = shadamard.from_gh(M)
    except ValueError as e:
        raise UsageError(str(e))
    return _emit_object(args, H, shadamard.verify_shadamard(H), [f"S-Hadamard of order {H.n}"])


def cmd_shad_verify(args) -> int:
    return _emit_report(args, shadamard.verify_shadamard(_parse("shadamard", args.file)))


def cmd_shad_dephase(args) -> int:
    H = shadamard.dephase(_parse("shadamard", args.file))
    return _emit_object(args, H, shadamard.verify_shadamard(H))


# --- ks ----------------------------------------------------------------------


def cmd_ks_build(args) -> int:
    H = _parse("shadamard", args.file)
    if H.n % 2:
        raise UsageError(f"KS construction needs even order, got n={H.n}")
    sh_report = shadamard.verify_shadamard(H)
    if not sh_report.passed:
        return _emit_report(args, sh_report)
    P = ksset.build_ks(H)
    return _emit_object(args, P, ksset.verify_ks(P), [f"|V| = {len(P.vectors)}, |B| = {len(P.bases)}"])


def cmd_ks_verify(args) -> int:
    return _emit_report(args, ksset.verify_ks(_parse("ks", args.file)))


def cmd_ks_noncolor(args) -> int:
    P = _parse("ks", args.file)
    result = ksset.noncolor_check(P, budget=args.budget)
    passed = result.status is ksset.ColoringStatus.NO_VALID_COLORING
    report = VerificationReport(
        "noncolor", passed, witness=None if passed else result.to_json(),
        checks={"no_valid_coloring": passed},
    )
    return _emit_report(args, report, {"result": result.to_json()})


def cmd_ks_stats(args) -> int:
    P = _parse("ks", args.file)
    report = ksset.verify_ks(P)
    return _emit_report(args, report, {"stats": ksset.ks_stats(P)})


# --- plan / pipeline -----------------------------------------------------------


def _even_order(n: int) -> int:
    if n < 2 or n % 2:
        raise UsageError(f"order must be even and >= 2 (got {n}); the KS construction needs even n")
    return n


def _plan(args):
    n = _even_order(args.n)
    imports = []
    for path in args.imports or ():
        try:
            imports.append(ghmat.register_import(path))
        except (OSError, ValueError) as e:
            raise UsageError(f"cannot register import {path}: {e}")
    recipe = ghmat.plan_order(n, imports=imports, max_side=args.max_side)
    if recipe is None:
        print(
            f"error: no recipe reaches n={n}: the built-in constructions (odd-prime "
            "multiplication tables, registered searches, Kronecker sums, imports) give no "
            f"GH(g, {n}/g) over Z_g with g > 2. Orders 2, 4, 8, 32, 40, 42, 60, 64, 66, "
            "70, 78, 84 and 88 have no known suitable GH matrix; this is unreachability, "
            "not a proof of nonexistence.",
            file=sys.stderr,
        )
    return recipe


def cmd_plan(args) -> int:
    recipe = _plan(args)
    if recipe is None:
        if args.format == "json":
            sys.stdout.write(_dumps({"target": args.n, "recipe": None}))
        return EXIT_UNREACHABLE
    if args.format == "json":
        sys.stdout.write(_dumps({"target": args.n, "recipe": recipe.to_json()}))
    else:
        print(f"n={args.n}: {recipe}")
    return EXIT_OK


def cmd_pipeline(args) -> int:
    recipe = _plan(args)
    if recipe is None:
        return EXIT_UNREACHABLE
    bundle: dict = {"n": args.n, "recipe": recipe.to_json(), "reports": {}, "objects": {}}

    def finish(code: int) -> int:
        bundle["pass"] = code == EXIT_OK
        if args.out:
            Path(args.out).write_text(_dumps(bundle))
        if args.format == "json":
            sys.stdout.write(_dumps(bundle))
        else:
            print(f"n={args.n} recipe: {recipe}")
            for stage, rep in bundle["reports"].items():
                print(f"  {stage}: {'pass' if rep['pass'] else 'FAIL'}")
            if "stats" in bundle:
                s = bundle["stats"]
                print(f"  |V| = {s['num_vectors']}, |B| = {s['num_bases']}, memberships {s['memberships']}")
            if "noncolor" in bundle:
                print(f"  noncolor: {bundle['noncolor']['status']}")
        return code

    try:
        M = ghmat.execute_recipe(recipe, budget=args.budget, max_side=args.max_side)
    except NotFound as e:
        bundle["reports"]["gh"] = {"pass": False, "witness": {"not_found": e.reason, "nodes": e.nodes}}
        print(f"error: {e}", file=sys.stderr)
        return finish(EXIT_FAIL)
    gh_report = ghmat.verify_gh(M)
    bundle["reports"]["gh"] = gh_report.to_json()
    bundle["objects"]["gh"] = M.to_json()
    if not gh_report.passed:
        _complain(gh_report)
        return finish(EXIT_FAIL)

    H = shadamard.from_gh(M)
    sh_report = shadamard.verify_shadamard(H)
    bundle["reports"]["shadamard"] = sh_report.to_json()
    bundle["objects"]["shadamard"] = H.to_json()
    if not sh_report.passed:
        _complain(sh_report)
        return finish(EXIT_FAIL)

    P = ksset.build_ks(H)
    ks_report = ksset.verify_ks(P)
    bundle["reports"]["ks_pair"] = ks_report.to_json()
    bundle["objects"]["ks_pair"] = P.to_json()
    bundle["stats"] = ksset.ks_stats(P)
    if not ks_report.passed:
        _complain(ks_report)
        return finish(EXIT_FAIL)

    if args.noncolor:
        result = ksset.noncolor_check(P, budget=args.budget)
        bundle["noncolor"] = result.to_json()
        if result.status is not ksset.ColoringStatus.NO_VALID_COLORING:
            return finish(EXIT_FAIL)
    return finish(EXIT_OK)


# --- parser --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--budget", type=_positive, default=None,
                        help=f"search node budget (default {DEFAULT_BUDGET}, or $KSFORGE_BUDGET)")
    common.add_argument("--max-side", type=_positive, default=DEFAULT_MAX_SIDE,
                        help="largest GH side handed to the backtracking search")
    common.add_argument("--out", metavar="PATH", help="write the produced object here")
    common.add_argument("--seedless", action="store_true",
                        help="accepted for compatibility; search is always deterministic")
    common.add_argument("-v", "--verbose", action="count", default=0)

    parser = argparse.ArgumentParser(
        prog="ksforge",
        description="Construct and exactly verify GH, S-Hadamard and Kochen-Specker objects.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gh = sub.add_parser("gh", help="generalized Hadamard matrices over Z_g")
    ghs = gh.add_subparsers(dest="action", required=True)
    p = ghs.add_parser("make-prime", parents=[common], help="GH(p,1) multiplication table")
    p.add_argument("p", type=int)
    p.set_defaults(func=cmd_gh_make_prime)
    p = ghs.add_parser("search", parents=[common], help="backtracking search for GH(g,lambda)")
    p.add_argument("g", type=int)
    p.add_argument("lam", type=int, metavar="lambda")
    p.set_defaults(func=cmd_gh_search)
    p = ghs.add_parser("compose", parents=[common], help="Kronecker sum of two GH files")
    p.add_argument("a")
    p.add_argument("b")
    p.set_defaults(func=cmd_gh_compose)
    for name, func, help_ in (
        ("verify", cmd_gh_verify, "check the difference condition"),
        ("import", cmd_gh_import, "load and verify an external GH file"),
        ("export", cmd_gh_export, "write the bare GH JSON object"),
    ):
        p = ghs.add_parser(name, parents=[common], help=help_)
        p.add_argument("file")
        p.set_defaults(func=func)

    sh = sub.add_parser("shad", help="S-Hadamard matrices")
    shs = sh.add_subparsers(dest="action", required=True)
    for name, func, help_ in (
        ("from-gh", cmd_shad_from_gh, "lift a GH(g,lambda), g > 2"),
        ("verify", cmd_shad_verify, "check all three conditions exactly"),
        ("dephase", cmd_shad_dephase, "make the first row all ones"),
    ):
        p = shs.add_parser(name, parents=[common], help=help_)
        p.add_argument("file")
        p.set_defaults(func=func)

    ks = sub.add_parser("ks", help="Kochen-Specker pairs")
    kss = ks.add_subparsers(dest="action", required=True)
    for name, func, help_ in (
        ("build", cmd_ks_build, "build a KS pair from an even-order S-Hadamard file"),
        ("verify", cmd_ks_verify, "check the KS pair conditions"),
        ("noncolor", cmd_ks_noncolor, "exhaustively search for an exactly-one marking"),
        ("stats", cmd_ks_stats, "sizes and membership histograms"),
    ):
        p = kss.add_parser(name, parents=[common], help=help_)
        p.add_argument("file")
        p.set_defaults(func=func)

    for name, func, help_ in (
        ("plan", cmd_plan, "find a GH recipe for an even order"),
        ("pipeline", cmd_pipeline, "plan, build and verify a KS pair in dimension N"),
    ):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.add_argument("n", type=int, metavar="N")
        p.add_argument("--import", dest="imports", action="append", metavar="FILE",
                       help="register a verified GH file as a planner ingredient")
        p.set_defaults(func=func)
        if name == "pipeline":
            p.add_argument("--noncolor", action="store_true",
                           help="also run the exhaustive non-colorability check")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose > 1 else logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        if args.budget is None:
            args.budget = _default_budget()
        return args.func(args)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
