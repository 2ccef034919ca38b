"""Command-line front end.

    toeplitz-ball identities --n 2 --d 6 --samples 20 --seed 7
    toeplitz-ball construct --target "z^(1)*zbar^(1)" --n 1
    toeplitz-ball verify-bh --scenario scenario.json --d 8
    toeplitz-ball suite --n 2 --d 6 --seed 7 --format markdown
    toeplitz-ball report --input report.json

Exit codes: 0 when every executed check passed (skips do not count), 1 on any
refutation, 2 on usage or input errors.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import report as rp
from .bergman import berezin_series
from .bhsuite import BHScenario, builtin_suites, operator_suite, verify_bh_scenario
from .errors import ToeplitzBallError
from .mellin import range_decision
from .report import EXACT, Report, at_degree, check
from .symbolic import parse_bipoly, verify_do_identity, verify_h_recursion
from .wirtinger import identity_suite, random_points


class UsageError(Exception):
    pass


def _common(p: argparse.ArgumentParser, n: int = 2, d: int = 6) -> None:
    p.add_argument("--n", type=int, default=n, help="dimension N of the ball")
    p.add_argument("--d", type=int, default=d, help="truncation degree D")
    p.add_argument("--samples", type=int, default=20, help="sample points for pointwise checks")
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--format", choices=("json", "markdown"), default="json")
    p.add_argument("--output", type=Path, default=None, help="write the report here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="toeplitz-ball",
                                     description="Exact checks for Toeplitz operators on the unit ball.")
    sub = parser.add_subparsers(dest="command", required=True)

    _common(sub.add_parser("identities", help="operator identities and kernel identities"))
    _common(sub.add_parser("operators", help="truncated operator calculus consistency"))

    p = sub.add_parser("construct", help="symbol with a given polynomial Berezin transform")
    _common(p, n=1)
    p.add_argument("--target", required=True, help='bipolynomial, e.g. "z^(1)*zbar^(1)"')

    p = sub.add_parser("verify-bh", help="check a scenario file")
    _common(p, d=8)
    p.add_argument("--scenario", type=Path, required=True)

    _common(sub.add_parser("suite", help="built-in example suites"))

    p = sub.add_parser("report", help="re-render a JSON report")
    p.add_argument("--input", type=Path, required=True)
    p.add_argument("--format", choices=("json", "markdown"), default="markdown")
    p.add_argument("--output", type=Path, default=None)
    return parser


def _validate(args) -> None:
    if getattr(args, "n", 1) < 1:
        raise UsageError("--n must be >= 1")
    if getattr(args, "d", 0) < 0:
        raise UsageError("--d must be >= 0")
    if getattr(args, "samples", 1) < 1:
        raise UsageError("--samples must be >= 1")


def run_identities(args) -> list[Report]:
    n, d = args.n, args.d
    parts = [verify_do_identity(m, n, d) for m in range(n + 1)]
    parts += [verify_h_recursion(j, n) for j in range(1, 6)]
    sym = rp.merge(f"symbolic:N={n}", parts)
    pts = random_points(n, args.samples, args.seed)
    return [sym, identity_suite(n, pts)]


def run_construct(args) -> tuple[list[Report], str | None]:
    try:
        target = parse_bipoly(args.target, args.n)
    except (ValueError, ToeplitzBallError) as exc:
        raise UsageError(f"cannot parse --target: {exc}") from exc
    rep = Report(f"construct:N={args.n}")
    res = range_decision(target, args.n)
    if not res.ok:
        v = res.violation
        rep.add(check("target in the Berezin range", False, EXACT,
                      f"d_z{v['j']} dbar_z{v['l']} of the target has degree {v['degree']} > 2N-1 = {v['bound']}",
                      violation=v))
        return [rep], None
    u = res.witness
    cmp = berezin_series(u, args.d).matches(target)
    rep.add(check("B(u) = target", cmp.equal, at_degree(args.d), cmp.witness,
                  symbol=u.to_json(), pretty=u.pretty()))
    return [rep], u.pretty()


def run_verify_bh(args) -> list[Report]:
    try:
        data = json.loads(args.scenario.read_text(encoding="utf-8"))
        sc = BHScenario.from_json(data)
    except (OSError, ValueError, KeyError, TypeError, ToeplitzBallError) as exc:
        raise UsageError(f"bad scenario file {args.scenario}: {exc}") from exc
    return [verify_bh_scenario(sc, args.d)]


def _emit(text: str, output: Path | None) -> None:
    if output is None:
        sys.stdout.write(text)
    else:
        output.write_text(text, encoding="utf-8")


def _render(reports: list[Report], fmt: str) -> str:
    return rp.dumps(reports) if fmt == "json" else rp.to_markdown(reports)


def run_command(argv: list[str]) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        _validate(args)
        if args.command == "report":
            try:
                reports = rp.loads(args.input.read_text(encoding="utf-8"))
            except (OSError, ValueError, KeyError, TypeError) as exc:
                raise UsageError(f"cannot read report {args.input}: {exc}") from exc
            _emit(_render(reports, args.format), args.output)
            return 0 if all(r.passed for r in reports) else 1
        headline = None
        if args.command == "identities":
            reports = run_identities(args)
        elif args.command == "operators":
            reports = [operator_suite(args.n, args.d)]
        elif args.command == "construct":
            reports, headline = run_construct(args)
        elif args.command == "verify-bh":
            reports = run_verify_bh(args)
        else:
            if args.n not in (1, 2, 3):
                raise UsageError("suite needs --n in {1, 2, 3}")
            reports = [builtin_suites(args.n, args.d, args.seed, args.samples)]
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    text = _render(reports, args.format)
    if headline is not None:
        print(headline)
    _emit(text, args.output)
    return 0 if all(r.passed for r in reports) else 1


def main(argv: list[str] | None = None) -> int:
    return run_command(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    raise SystemExit(main())
