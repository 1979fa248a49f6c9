"""Command-line entry point: ``bunkbed <subcommand> ...``.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 a resource
cap was exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
import time

from .errors import CapExceededError

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3

log = logging.getLogger("bunkbed")


class UsageError(Exception):
    """Bad flag combination caught after argparse; reported with exit code 2."""


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _nonneg(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {text}")
    return value


def _base_n(text: str) -> int:
    value = int(text)
    if value < 2:
        raise argparse.ArgumentTypeError(f"n must be at least 2 (got {value}); s1 and s_n must differ")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bunkbed", description=__doc__.splitlines()[0])
    parser.add_argument("--threads", type=_positive, default=None,
                        help="worker threads (default: $BUNKBED_THREADS, else 1)")
    parser.add_argument("--output", "-o", default=None, help="write the report here instead of stdout")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def caps(p, enum=True, exact=True):
        if enum:
            p.add_argument("--enum-cap", type=_positive, default=None,
                           help="largest n for exhaustive enumeration (default 5)")
        if exact:
            p.add_argument("--exact-cap", type=_positive, default=None,
                           help="largest n for the exact decomposition (default 16)")

    p = sub.add_parser("verify", help="exact probabilities, gap, group terms and residual for one n")
    p.add_argument("--n", type=_base_n, required=True)
    p.add_argument("--bruteforce", action="store_true", help="also compare against full enumeration")
    p.add_argument("--format", choices=("json", "text"), default="text")
    caps(p)

    p = sub.add_parser("lemmas", help="batch check of the counting identities")
    p.add_argument("--k-max", type=_positive, default=150)
    p.add_argument("--size-cap", type=_positive, default=9)
    p.add_argument("--z-cap", type=_nonneg, default=None)
    p.add_argument("--q-oracle-n", type=_base_n, default=9)
    p.add_argument("--gc-edge-cap", type=_nonneg, default=20)
    p.add_argument("--format", choices=("json", "text"), default="text")
    p.add_argument("--corrupt-q", action="store_true", help=argparse.SUPPRESS)

    p = sub.add_parser("gap", help="exact bunkbed gap P(s1<->s_n) - P(s1<->s_2n) at p=1/2")
    p.add_argument("--n", type=_base_n, required=True)
    p.add_argument("--format", choices=("json", "text"), default="text")
    caps(p, enum=False)

    p = sub.add_parser("gc", help="connected spanning subgraph count of one class, or a CSV table")
    p.add_argument("--x", type=_nonneg)
    p.add_argument("--y", type=_nonneg)
    p.add_argument("--z", type=_nonneg)
    p.add_argument("--table", action="store_true", help="CSV of x,y,z,gc,lower,upper")
    p.add_argument("--max", type=_nonneg, default=12, help="largest x and y in --table")
    p.add_argument("--format", choices=("json", "text"), default="text")

    p = sub.add_parser("mc", help="Monte Carlo estimate of a connection probability")
    p.add_argument("--n", type=_base_n, required=True)
    p.add_argument("--p", default="0.5", help="edge probability, read exactly from its decimal form")
    p.add_argument("--trials", type=_positive, default=1_000_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--streams", type=_positive, default=1)
    p.add_argument("--target", choices=("same_level", "cross_level"), default="same_level")
    p.add_argument("--format", choices=("json", "text"), default="json")

    p = sub.add_parser("ratio", help="ratio P(s1<->s_2n)/P(s1<->s_n) over a p grid (conjecture check)")
    p.add_argument("--n", type=_base_n, required=True)
    p.add_argument("--grid", default="0.01:0.99:0.01", help="start:stop:step or comma list")
    p.add_argument("--method", choices=("exact_poly", "monte_carlo"), default="exact_poly")
    p.add_argument("--trials", type=_positive, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--streams", type=_positive, default=1)
    p.add_argument("--format", choices=("csv", "json", "text"), default="csv")
    caps(p, exact=False)

    p = sub.add_parser("census", help="exhaustive connection histogram for a vertex pair")
    p.add_argument("--n", type=_base_n, required=True)
    p.add_argument("--u", type=_positive, default=1)
    p.add_argument("--v", type=_positive, default=None, help="default s_n")
    caps(p, exact=False)
    return parser


def _threads(args) -> int:
    if args.threads is not None:
        return args.threads
    env = os.environ.get("BUNKBED_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise UsageError(f"BUNKBED_THREADS must be an integer (got {env!r})") from None
    return 1


def _apply_threads(n: int) -> None:
    import numba

    numba.set_num_threads(max(1, min(n, numba.config.NUMBA_NUM_THREADS)))


def cmd_verify(args) -> tuple[int, str]:
    from .decomposition import verify_theorem

    report = verify_theorem(args.n, args.bruteforce, enum_cap=args.enum_cap, exact_cap=args.exact_cap)
    if args.format == "json":
        out = report.to_json()
    else:
        g = report.gap
        lines = [
            f"n = {report.n}, #E = {report.n ** 2}",
            f"P(s1<->s_n)  = {report.p_same.numerator} / 2^{report.p_same.exponent}",
            f"P(s1<->s_2n) = {report.p_cross.numerator} / 2^{report.p_cross.exponent}",
            f"gap          = {g.value} = {g.numerator} / 2^{g.exponent} ~ {g.approx()}",
            f"groups       = {len(report.groups)} (min term {min(t.weighted_sum for t in report.groups)})",
            f"residual     = {report.residual}",
        ]
        if report.bruteforce_match is not None:
            lines.append(f"brute force  = {'match' if report.bruteforce_match else 'MISMATCH'}")
        lines += [f"[{'PASS' if ok else 'FAIL'}] {name}  (main-component decomposition)"
                  for name, ok in report.checks]
        out = "\n".join(lines)
    if not report.passed:
        log.error("verification failed: %s", report.first_failure)
        return EXIT_FAIL, out
    return EXIT_OK, out


def cmd_lemmas(args) -> tuple[int, str]:
    from .counting import q
    from .suite import run_lemma_suite

    q_fn = None
    if args.corrupt_q:
        # Negative control: perturb q on one class so every q-based check must fire.
        def q_fn(n, c):
            return q(n, c) + (1 if tuple(c) == (3, 1, 1) else 0)

    results = run_lemma_suite(args.k_max, args.size_cap, z_cap=args.z_cap, q_oracle_n=args.q_oracle_n,
                              gc_edge_cap=args.gc_edge_cap, q_fn=q_fn)
    if args.format == "json":
        out = json.dumps([{"check": r.name, "label": r.label, "cases": r.cases,
                           "passed": r.passed, "violations": r.violations} for r in results])
    else:
        lines = []
        for r in results:
            lines.append(f"[{'PASS' if r.passed else 'FAIL'}] {r.name} ({r.label}): {r.cases} cases")
            lines += [f"    violation: {v}" for v in r.violations]
        out = "\n".join(lines)
    return (EXIT_OK if all(r.passed for r in results) else EXIT_FAIL), out


def cmd_gap(args) -> tuple[int, str]:
    from .decomposition import bunkbed_gap

    g = bunkbed_gap(args.n, args.exact_cap)
    if args.format == "json":
        out = json.dumps({"n": args.n, "gap": g.to_json(), "approx": g.approx()})
    else:
        out = f"gap(n={args.n}) = {g.numerator} / 2^{g.exponent} ~ {g.approx()}"
    return (EXIT_OK if g.numerator >= 0 else EXIT_FAIL), out


def cmd_gc(args) -> tuple[int, str]:
    from .counting import ClassIndex, gc, gc_bounds

    if args.table:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["x", "y", "z", "gc", "lower", "upper"])
        for x in range(args.max + 1):
            for y in range(args.max + 1):
                for z in range(min(x, y) + 1):
                    lo, hi = gc_bounds((x, y, z)) if z else ("", "")
                    w.writerow([x, y, z, gc((x, y, z)), lo, hi])
        return EXIT_OK, buf.getvalue().rstrip("\n")
    if args.x is None or args.y is None or args.z is None:
        raise UsageError("gc needs --x, --y and --z (or --table)")
    c = ClassIndex(args.x, args.y, args.z)
    if not c.is_valid():
        raise UsageError(f"invalid class {tuple(c)}: need z <= min(x, y)")
    value = gc(c)
    bounds = gc_bounds(c) if c.z else None
    if args.format == "json":
        d = {"x": c.x, "y": c.y, "z": c.z, "gc": str(value)}
        if bounds:
            d["lower"], d["upper"] = str(bounds[0]), str(bounds[1])
        out = json.dumps(d)
    else:
        out = f"gc{tuple(c)} = {value}"
        if bounds:
            out += f"  bounds ({bounds[0]}, {bounds[1]})"
    return EXIT_OK, out


def cmd_mc(args) -> tuple[int, str]:
    from .generalp import mc_estimate

    est = mc_estimate(args.n, args.p, args.target, args.trials, args.seed, args.streams, _threads(args))
    if args.format == "json":
        return EXIT_OK, est.to_json()
    return EXIT_OK, (f"P(s1<->{'s_n' if est.target == 'same_level' else 's_2n'}) at p={est.p}, n={est.n}: "
                     f"{est.estimate:.6f} +- {est.standard_error:.6f} "
                     f"({est.hits}/{est.trials}, seed {est.seed}, {est.stream_count} streams)")


def cmd_ratio(args) -> tuple[int, str]:
    from .generalp import parse_grid, ratio_report, _fmt

    table = ratio_report(args.n, parse_grid(args.grid), args.method, trials=args.trials, seed=args.seed,
                         stream_count=args.streams, enum_cap=args.enum_cap, threads=_threads(args))
    if args.format == "csv":
        out = table.to_csv().rstrip("\n")
    elif args.format == "json":
        out = json.dumps({
            "label": table.label, "n": table.n, "method": table.method,
            "all_nondecreasing": table.all_nondecreasing,
            "rows": [{"p": _fmt(r.p), "p_same": _fmt(r.p_same), "p_cross": _fmt(r.p_cross),
                      "ratio": None if r.ratio is None else _fmt(r.ratio),
                      "nondecreasing_flag": r.nondecreasing} for r in table.rows],
        })
    else:
        out = "\n".join([f"{table.label}: n={table.n}, method={table.method}"]
                        + [f"p={_fmt(r.p):<6} ratio={'' if r.ratio is None else _fmt(r.ratio)}"
                           for r in table.rows]
                        + [f"ratio nondecreasing on the grid: {table.all_nondecreasing}"])
    # A report, not a verification: a decreasing step is data, not a failure.
    return EXIT_OK, out


def cmd_census(args) -> tuple[int, str]:
    from .graph import brute_force_census, build_bunkbed

    graph = build_bunkbed(args.n)
    v = args.n if args.v is None else args.v
    try:
        graph.check_vertex(args.u)
        graph.check_vertex(v)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    return EXIT_OK, brute_force_census(graph, args.u, v, args.enum_cap).to_json()


COMMANDS = {
    "verify": cmd_verify,
    "lemmas": cmd_lemmas,
    "gap": cmd_gap,
    "gc": cmd_gc,
    "mc": cmd_mc,
    "ratio": cmd_ratio,
    "census": cmd_census,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    start = time.perf_counter()
    try:
        _apply_threads(_threads(args))
        code, out = COMMANDS[args.command](args)
    except UsageError as exc:
        parser.error(str(exc))
    except CapExceededError as exc:
        print(f"bunkbed: {exc}", file=sys.stderr)
        return EXIT_CAP
    log.info("%s finished in %.2fs", args.command, time.perf_counter() - start)

    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(out + "\n")
    else:
        print(out)
    return code


if __name__ == "__main__":
    sys.exit(main())
