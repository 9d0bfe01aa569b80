"""Command-line driver.

Exit codes: 0 ok, 1 semantic failure (mismatch, violation, failed check), 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import sys

from .bench import bench
from .dynops import ExposeStrategy
from .fuzz import fuzz
from .mst import mst_demo
from .script import ScriptError, Session, format_script, parse_script


def _sizes(text: str) -> list[int]:
    try:
        sizes = [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad size list {text!r}") from None
    if not sizes or min(sizes) < 2:
        raise argparse.ArgumentTypeError("sizes must be integers >= 2")
    return sizes


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="toptree", description="Splay-based top trees: scripts, fuzzing, MST demo, benchmarks.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--strategy", choices=[s.value for s in ExposeStrategy], default="full",
                        help="expose strategy (default: full)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", parents=[common], help="run an operation script against the tree and the naive oracle")
    p.add_argument("file", help="script path, or - for stdin")
    p.add_argument("--debug", action="store_true", help="brute-force check every rotation")

    p = sub.add_parser("fuzz", parents=[common], help="random operations cross-checked against the oracle")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--vertices", type=int, default=16)
    p.add_argument("--ops", type=int, default=1000)
    p.add_argument("--validate-every", type=int, default=100)
    p.add_argument("--debug", action="store_true", help="brute-force check every rotation")
    p.add_argument("--transcript", help="write script and output to this file")
    p.add_argument("--repro", help="where to write the minimised failing script")

    p = sub.add_parser("mst", parents=[common], help="incremental minimum spanning forest vs Kruskal")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--vertices", type=int, default=256)
    p.add_argument("--edges", type=int, default=4096)

    p = sub.add_parser("bench", parents=[common], help="structural work per operation across sizes")
    p.add_argument("--sizes", type=_sizes, default=[64, 128, 256, 512, 1024, 2048, 4096])
    p.add_argument("--ops", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", help="write per-operation work samples (csv: n,op,work)")
    p.add_argument("--max-spread", type=float, default=3.0,
                   help="fail when work/op/lg n varies by this factor or more (default 3)")
    return parser


def cmd_run(args) -> int:
    try:
        if args.file == "-":
            text = sys.stdin.read()
        else:
            with open(args.file) as fh:
                text = fh.read()
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        commands = parse_script(text)
    except ScriptError as exc:
        print(f"parse error {exc}", file=sys.stderr)
        return 2
    session = Session(strategy=args.strategy, debug=args.debug).run(commands)
    for line in session.output:
        print(line)
    return session.exit_code


def cmd_fuzz(args) -> int:
    if args.vertices < 2 or args.ops < 0 or args.validate_every < 0:
        print("error: need --vertices >= 2 and non-negative --ops/--validate-every", file=sys.stderr)
        return 2
    report = fuzz(args.seed, args.vertices, args.ops, args.validate_every, strategy=args.strategy, debug=args.debug)
    if args.transcript:
        with open(args.transcript, "w") as fh:
            fh.write(report.transcript())
    print(report.summary())
    for v in report.lemma_violations[:20]:
        print(f"lemma violation {v}")
    if report.ok:
        return 0
    for line in report.output:
        if line.startswith(("mismatch", "VIOLATION")):
            print(line)
    repro = format_script(report.minimized or report.script)
    if args.repro:
        with open(args.repro, "w") as fh:
            fh.write(repro)
        print(f"minimised reproduction ({len(report.minimized or [])} commands) written to {args.repro}")
    else:
        print("# minimised reproduction")
        print(repro, end="")
    return 1


def cmd_mst(args) -> int:
    if args.vertices < 2 or args.edges < 0:
        print("error: need --vertices >= 2 and --edges >= 0", file=sys.stderr)
        return 2
    r = mst_demo(args.seed, args.vertices, args.edges, strategy=args.strategy)
    print(f"toptree_total {r.toptree_total:.6g}")
    print(f"kruskal_total {r.kruskal_total:.6g}")
    print(f"links {r.links} swaps {r.swaps} rejected {r.rejected}")
    print("equal" if r.ok else "DIFFERENT")
    return 0 if r.ok else 1


def cmd_bench(args) -> int:
    samples = open(args.samples, "w") if args.samples else None
    try:
        result = bench(args.sizes, args.ops, args.strategy, seed=args.seed, samples=samples)
    finally:
        if samples is not None:
            samples.close()
    print(result.table())
    status = 0
    for v in result.violations[:20]:
        print(f"lemma violation at {v}")
        status = 1
    if len(result.rows) > 1 and result.spread >= args.max_spread:
        print(f"spread {result.spread:.6g} is not below {args.max_spread:g}")
        status = 1
    return status


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)  # exits with status 2 on usage errors
    handler = {"run": cmd_run, "fuzz": cmd_fuzz, "mst": cmd_mst, "bench": cmd_bench}[args.command]
    return handler(args)


if __name__ == "__main__":
    sys.exit(main())
