"""Command-line front end.

Exit codes: 0 true or success, 1 false, 2 usage, parse or input error,
3 budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys

from .compiler import STRATEGIES, compile_formula, expand_dnf, export_dimacs
from .errors import BudgetExceeded, TeamlogError
from .formula import classify_fragment, free_variables, parse_formula
from .model import Team, load_structure, load_team
from .sat.cnf import parse_dimacs
from .tasks import ENGINES, count_teams, enumerate_teams, maximal_subteams, model_check, reduce_3sat


class _Usage(Exception):
    pass


def _formula(arg: str):
    if arg.startswith("@"):
        with open(arg[1:], encoding="utf-8") as fh:
            arg = fh.read()
    return parse_formula(arg)


def _team(args, A, f):
    if args.team:
        return load_team(args.team, A)
    if free_variables(f):
        raise _Usage("a team (-t) is needed for a formula with free variables")
    return Team((), ((),))


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True)


def _rows(team: Team, A) -> str:
    return json.dumps(team.to_json(A)["rows"])


def cmd_check(args, out) -> int:
    A = load_structure(args.structure)
    f = _formula(args.formula)
    X = _team(args, A, f)
    report = model_check(A, X, f, engine=args.engine, strict=args.strict)
    print(_dump(report.to_json(with_time=args.time)), file=out)
    return 0 if report.verdict else 1


def cmd_compile(args, out) -> int:
    A = load_structure(args.structure)
    f = _formula(args.formula)
    team = load_team(args.team, A) if args.team else None
    c = compile_formula(A, f, args.r, team=team, strategy=args.strategy)
    print(f"class: {c.summary.label}", file=out)
    if args.report:
        print(_dump(c.report()), file=out)
    parts = expand_dnf(c)
    if args.output:
        if len(parts) == 1:
            export_dimacs(parts[0], args.output)
        else:
            stem, dot, ext = args.output.rpartition(".")
            for k, p in enumerate(parts):
                name = f"{stem}.{k}.{ext}" if dot else f"{args.output}.{k}"
                export_dimacs(p, name)
    else:
        for p in parts:
            out.write(export_dimacs(p))
    return 0


def cmd_classify(args, out) -> int:
    label = classify_fragment(_formula(args.formula)).as_dict()
    print(f"fragment={label.pop('fragment')}", file=out)
    print(f"width={label.pop('disjunctionWidth')}", file=out)
    for key in sorted(label):
        value = label[key]
        print(f"{key}={str(value).lower() if isinstance(value, bool) else value}", file=out)
    return 0


def cmd_count(args, out) -> int:
    A = load_structure(args.structure)
    print(count_teams(A, _formula(args.formula), args.r, include_empty=args.include_empty), file=out)
    return 0


def cmd_enumerate(args, out) -> int:
    A = load_structure(args.structure)
    for team in enumerate_teams(A, _formula(args.formula), args.r, include_empty=args.include_empty):
        print(_rows(team, A), file=out)
    return 0


def cmd_maxsub(args, out) -> int:
    A = load_structure(args.structure)
    f = _formula(args.formula)
    for team in maximal_subteams(A, _team(args, A, f), f):
        print(_rows(team, A), file=out)
    return 0


def cmd_reduce3sat(args, out) -> int:
    with open(args.input, encoding="utf-8") as fh:
        cnf = parse_dimacs(fh.read())
    A, X, f = reduce_3sat(cnf.clauses, cnf.num_vars)
    from .formula import format_formula

    doc = {"structure": A.to_json(), "team": X.to_json(A), "formula": format_formula(f)}
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(_dump(doc) + "\n")
    else:
        print(_dump(doc), file=out)
    if args.check:
        verdict = model_check(A, X, f, engine="brute").verdict
        print("true" if verdict else "false", file=out)
        return 0 if verdict else 1
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="teamlog", description="Model checking in team semantics.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(q, structure=True, team=False, arity=False):
        if structure:
            q.add_argument("-s", "--structure", required=True, help="structure JSON file")
        if team:
            q.add_argument("-t", "--team", help="team JSON file")
        q.add_argument("-f", "--formula", required=True, help="formula text or @file")
        if arity:
            q.add_argument("-r", type=int, default=None, help="team arity (default: free variables)")

    q = sub.add_parser("check", help="decide whether a team satisfies a formula")
    common(q, team=True)
    q.add_argument("--engine", choices=ENGINES, default="auto")
    q.add_argument("--strict", action="store_true", help="strict semantics (brute engine)")
    q.add_argument("--time", action="store_true", help="include the running time in the report")
    q.set_defaults(run=cmd_check)

    q = sub.add_parser("compile", help="compile to DIMACS")
    common(q, team=True, arity=True)
    q.add_argument("-o", "--output", help="DIMACS output path")
    q.add_argument("--strategy", choices=STRATEGIES, default="specific")
    q.add_argument("--report", action="store_true", help="print clause counts as JSON")
    q.set_defaults(run=cmd_compile)

    q = sub.add_parser("classify", help="fragment flags and predicted clause class")
    common(q, structure=False)
    q.set_defaults(run=cmd_classify)

    for name, fn, text in (("count", cmd_count, "count satisfying teams"),
                           ("enumerate", cmd_enumerate, "list satisfying teams")):
        q = sub.add_parser(name, help=text)
        common(q, arity=True)
        q.add_argument("--include-empty", action="store_true")
        q.set_defaults(run=fn)

    q = sub.add_parser("maxsub", help="maximal satisfying subteams")
    common(q, team=True)
    q.set_defaults(run=cmd_maxsub)

    q = sub.add_parser("reduce3sat", help="build the independence instance of a 3-CNF")
    q.add_argument("input", help="DIMACS 3-CNF file")
    q.add_argument("-o", "--output", help="write the instance JSON here")
    q.add_argument("--check", action="store_true", help="also decide the instance")
    q.set_defaults(run=cmd_reduce3sat)
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code else 0
    try:
        return args.run(args, out)
    except BudgetExceeded as e:
        print(f"teamlog: {e}", file=sys.stderr)
        return 3
    except (TeamlogError, _Usage, ValueError, OSError) as e:
        print(f"teamlog: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
