"""Command-line front end.

Every subcommand shares the session flags (-p/-k/-N/--modulus/--series/
--samples/--seed/--json) and prints either human-readable lines or a
single JSON report {command, config, inputs, outputs, steps, timings_ms}.
Numeric outputs appear in both the integer/coefficient form and the
Teichmueller digit-vector form.

Exit codes: 0 on success, 1 on domain errors (anything raised by the
algebra with a stable error code), 2 on usage errors (bad flags or
term syntax).
"""

from __future__ import annotations

import argparse
import concurrent.futures
import json
import sys
import time
from pathlib import Path

from .errors import ParseError, SigmadicError
from .hensel import SolveReport, prolong_eval, sigma_hensel_solve
from .leading_terms import LeadingTerm, ResidueRingElem, angular_component
from .selftest import SUITES, run_selftest
from .series import SeparatedSeries, weierstrass_divide, weierstrass_prepare
from .term_parser import format_term, parse_term
from .witt import RingDesc, WittNum, make_ring, parse_witt


def _witt_forms(x: WittNum) -> dict:
    return {"value": str(x), "digits": x.digits_text()}


def _witt_line(label: str, x: WittNum) -> str:
    return f"{label} = {x}  digits {x.digits_text()}"


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-p", type=int, default=2, help="residue characteristic (prime)")
    common.add_argument("-k", type=int, default=1, help="residue degree: residue field F_{p^k}")
    common.add_argument("-N", type=int, default=4, help="absolute precision: work mod p^N")
    common.add_argument(
        "--modulus",
        default=None,
        help="comma-separated residue modulus coefficients, low to high (monic)",
    )
    common.add_argument(
        "--series",
        action="append",
        default=[],
        metavar="FILE",
        help="load a separated series; its name is the file stem (repeatable)",
    )
    common.add_argument("--samples", type=int, default=64, help="sampled pairs for approximation checks")
    common.add_argument("--seed", type=int, default=0, help="seed for sampled checks")
    common.add_argument("--json", action="store_true", help="emit one JSON report")

    top = argparse.ArgumentParser(
        prog="sigmadic",
        description="Finite-precision difference algebra over unramified p-adic rings.",
    )
    sub = top.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("solve", parents=[common], help="run the sigma-Hensel solver")
    sp.add_argument("term", help="term in the CLI grammar, e.g. 'x*x - 2'")
    sp.add_argument("--start", action="append", required=True, help="starting approximation (repeatable)")
    sp.add_argument("--xi", type=int, default=None, help="configuration ball radius")
    sp.add_argument("--newton", action="store_true", help="recompute the gradient each step")
    sp.add_argument("--ordered", action="store_true", help="report batch results in input order")

    ev = sub.add_parser("eval", parents=[common], help="evaluate a term")
    ev.add_argument("term")
    ev.add_argument("--at", action="append", required=True, help="point to evaluate at (repeatable)")

    lt = sub.add_parser("lt", parents=[common], help="leading term of a ring element")
    lt.add_argument("-m", type=int, default=0, help="leading-term level")
    lt.add_argument("value", help="ring element (integer or digit-vector form)")

    ac = sub.add_parser("ac", parents=[common], help="angular component of a ring element")
    ac.add_argument("-m", type=int, default=0, help="angular-component level")
    ac.add_argument("value", help="ring element (integer or digit-vector form)")

    wd = sub.add_parser("wdiv", parents=[common], help="Weierstrass division g = q*f + r")
    wd.add_argument("g", help="dividend series name (from --series)")
    wd.add_argument("f", help="divisor series name (from --series)")
    wd.add_argument("--var", type=int, required=True, help="variable index (X block first, then Y)")

    wp = sub.add_parser("wprep", parents=[common], help="Weierstrass preparation f = u*P")
    wp.add_argument("f", help="series name (from --series)")
    wp.add_argument("--var", type=int, required=True, help="variable index (X block first, then Y)")

    sub.add_parser("selftest", parents=[common], help="run the built-in invariant suites")
    return top


def _session(args) -> tuple[RingDesc, dict[str, SeparatedSeries], dict]:
    modulus = None
    if args.modulus:
        modulus = tuple(int(t) for t in args.modulus.replace(",", " ").split())
    ring = make_ring(args.p, args.k, args.N, modulus)
    env: dict[str, SeparatedSeries] = {}
    for path in args.series:
        env[Path(path).stem] = SeparatedSeries.load(ring, path)
    config = {
        "p": args.p,
        "k": args.k,
        "N": args.N,
        "modulus": list(ring.field.modulus),
        "samples": args.samples,
        "seed": args.seed,
    }
    return ring, env, config


def _solve_one(term, start: WittNum, args) -> SolveReport:
    return sigma_hensel_solve(
        term,
        start,
        xi=args.xi,
        samples=args.samples,
        seed=args.seed,
        mode="newton" if args.newton else "fixed",
    )


def _report_solve(report: SolveReport, start_text: str, write) -> list[dict]:
    write(f"start {start_text}: " + _witt_line("root", report.root) + f"  ({len(report.steps)} steps)")
    steps = []
    for idx, s in enumerate(report.steps):
        write(
            f"  step {idx}: a = {s.point}  residual_val {s.residual_val}  step_size {s.step_size}"
        )
        steps.append(
            {
                "start": start_text,
                "index": idx,
                "point": _witt_forms(s.point),
                "residual_val": s.residual_val,
                "step_size": s.step_size,
            }
        )
    return steps


def _run(args, write) -> dict:
    ring, env, config = _session(args)
    report: dict = {"command": args.command, "config": config, "inputs": {}, "outputs": {}, "steps": []}

    if args.command == "solve":
        term = parse_term(args.term, ring, env)
        report["inputs"] = {"term": format_term(term), "starts": list(args.start), "xi": args.xi}
        starts = [parse_witt(ring, s) for s in args.start]
        outputs = []
        if len(starts) == 1:
            results = [(args.start[0], _solve_one(term, starts[0], args))]
        else:
            with concurrent.futures.ThreadPoolExecutor() as pool:
                pairs = [
                    (text, pool.submit(_solve_one, term, s, args))
                    for text, s in zip(args.start, starts)
                ]
                if args.ordered:
                    results = [(text, fut.result()) for text, fut in pairs]
                else:
                    by_future = {fut: text for text, fut in pairs}
                    results = [
                        (by_future[f], f.result())
                        for f in concurrent.futures.as_completed(by_future)
                    ]
        for text, rep in results:
            report["steps"].extend(_report_solve(rep, text, write))
            outputs.append(
                {
                    "start": text,
                    "root": _witt_forms(rep.root),
                    "residual_val": "inf",
                    "steps": len(rep.steps),
                }
            )
        report["outputs"]["roots"] = outputs

    elif args.command == "eval":
        term = parse_term(args.term, ring, env)
        report["inputs"] = {"term": format_term(term), "at": list(args.at)}
        values = []
        for text in args.at:
            point = parse_witt(ring, text)
            value = prolong_eval(term, point)
            write(_witt_line(f"t({text})", value))
            values.append({"at": text, **_witt_forms(value)})
        report["outputs"]["values"] = values

    elif args.command in ("lt", "ac"):
        x = parse_witt(ring, args.value)
        report["inputs"] = {"value": str(x), "level": args.m}
        if args.command == "lt":
            out = LeadingTerm.from_witt(x, args.m)
            write(str(out))
            report["outputs"] = {
                "lt": str(out),
                "gamma": "inf" if out.is_zero() else int(out.gamma),
                "unit": None if out.is_zero() else list(out.unit),
            }
        else:
            out = angular_component(x, args.m)
            write(str(out))
            report["outputs"] = {"ac": str(out), "coeffs": list(out.value)}

    elif args.command in ("wdiv", "wprep"):
        def named(name: str) -> SeparatedSeries:
            if name not in env:
                raise SigmadicError(f"series {name!r} not loaded; pass --series FILE")
            return env[name]

        if args.command == "wdiv":
            g, f = named(args.g), named(args.f)
            report["inputs"] = {"g": args.g, "f": args.f, "var": args.var}
            q, r = weierstrass_divide(g, f, args.var)
            write("q:")
            for line in q.to_lines():
                write("  " + line)
            write("r:")
            for line in r.to_lines():
                write("  " + line)
            report["outputs"] = {"q": q.to_lines(), "r": r.to_lines()}
        else:
            f = named(args.f)
            report["inputs"] = {"f": args.f, "var": args.var}
            u, P = weierstrass_prepare(f, args.var)
            write("u:")
            for line in u.to_lines():
                write("  " + line)
            write("P:")
            for line in P.to_lines():
                write("  " + line)
            report["outputs"] = {"u": u.to_lines(), "P": P.to_lines()}

    elif args.command == "selftest":
        failures = run_selftest(write)
        report["outputs"] = {"failures": failures, "suites": len(SUITES)}
        if failures:
            raise SigmadicError(f"{failures} selftest suite(s) failed")

    return report


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2

    write = (lambda _line: None) if args.json else print

    started = time.perf_counter()
    try:
        report = _run(args, write)
    except ParseError as exc:
        print(f"syntax error at column {exc.position}: {exc}", file=sys.stderr)
        if exc.expected:
            print("expected: " + ", ".join(sorted(exc.expected)), file=sys.stderr)
        return 2
    except SigmadicError as exc:
        print(f"error[{exc.code}]: {exc}", file=sys.stderr)
        return 1
    report["timings_ms"] = round((time.perf_counter() - started) * 1000.0, 3)

    if args.json:
        print(json.dumps(report, indent=2))
    return 0


def entry() -> None:
    sys.exit(main())
