"""Command-line front end.

Exit statuses: 0 success, 1 runtime failure (I/O, bad input file), 2 usage
error (bad flags; nothing has run yet). Machine-readable output goes to
stdout or ``--output``; progress goes to stderr, at most once per second.
"""

import argparse
import csv
import io
import json
import math
import os
import sys
import threading
import time

import numpy as np

from . import baselines
from .errors import ContractError, ParseError
from .optimizer import RunConfig, run_parallel, write_trace_csv
from .oracle import MAX_EXHAUSTIVE_LENGTH, exhaustive_min_psl
from .sequence import BinarySequence, aacf, compute_sidelobes, evaluate

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_USAGE = 2

SEED_ENV = "PSLOPT_SEED"
BENCH_SCHEMA = "pslopt.bench/1"
BENCH_COLUMNS = (
    "schema_version",
    "length",
    "budget_seconds",
    "instances",
    "seed",
    "optimizer_psl",
    "sqrt_n",
    "below_sqrt_n",
    "mseq_degree",
    "mseq_psl",
    "mseq_rotation_psl",
    "reference_mseq_psl",
    "reference_optimizer_psl",
    "elapsed_seconds",
)
SUMMARY_COLUMNS = (
    "n", "seed", "budget_seconds", "best_psl", "best_fitness", "iterations",
    "probes", "kicks", "elapsed_seconds", "stop_reason", "best_sequence",
)


class UsageError(Exception):
    pass


def default_instances():
    return max(1, min(os.cpu_count() or 1, 12))


class Progress:
    """Rate-limited stderr reporter, safe to call from worker threads."""

    def __init__(self, stream=None, interval=1.0, enabled=True):
        self.stream = stream
        self.interval = interval
        self.enabled = enabled
        self._last = -math.inf
        self._pending = None
        self._lock = threading.Lock()

    def __call__(self, psl, elapsed):
        if not self.enabled:
            return
        with self._lock:
            self._pending = (psl, elapsed)
            now = time.monotonic()
            if now - self._last >= self.interval:
                self._emit(now)

    def _emit(self, now):
        psl, elapsed = self._pending
        stream = self.stream or sys.stderr
        print(f"[pslopt] best PSL {psl} at {elapsed:.2f}s", file=stream, flush=True)
        self._last = now
        self._pending = None


def _positive_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _positive_float(text):
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text}")
    return value


def _length_list(text):
    try:
        values = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad length list {text!r}") from None
    return values


def _square_range(text):
    lo, sep, hi = text.partition(":")
    if not sep:
        raise argparse.ArgumentTypeError("expected A:B")
    return [x * x for x in range(int(lo), int(hi) + 1)]


def build_parser():
    parser = argparse.ArgumentParser(prog="pslopt", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(
        dest="command", metavar="{optimize,generate,analyze,bench}", required=True
    )

    opt = sub.add_parser("optimize", help="search for a low-PSL sequence")
    opt.add_argument("--length", type=int, required=True)
    _campaign_flags(opt)
    opt.add_argument("--target-psl", type=int, help="stop once best PSL <= this")
    opt.add_argument(
        "--init", default="random", help="random | mseq | legendre | rudin-shapiro | file:PATH"
    )
    opt.add_argument("--kick-max", type=_positive_int, default=4)
    opt.add_argument("--max-iterations", type=int, help="deterministic cap on scan steps")
    opt.add_argument(
        "--keep-cost-after-kick",
        action="store_true",
        help="compare post-kick neighbours against the pre-kick cost",
    )
    opt.add_argument("--output", help="write the report here instead of stdout")
    opt.add_argument("--format", choices=("json", "csv", "text"), default="json")
    opt.add_argument("--trace", help="write improvement trace CSV (elapsed_seconds,psl)")
    opt.add_argument("--sequence-out", help="write the best sequence in text format")

    gen = sub.add_parser("generate", help="emit a baseline sequence")
    gen.add_argument("--family", choices=baselines.FAMILIES, required=True)
    gen.add_argument("--length", type=int)
    gen.add_argument("--degree", type=int, help="m-sequence degree (alternative to --length)")
    gen.add_argument("--seed", type=int)
    gen.add_argument("--rotate", type=int, default=0)
    gen.add_argument("--best-rotation", action="store_true", help="O(n^3); moderate n only")
    gen.add_argument("--output")

    ana = sub.add_parser("analyze", help="PSL, fitness and sidelobes of a sequence file")
    ana.add_argument("path")
    ana.add_argument("--sidelobes", action="store_true", help="list C_u for 0 < u < n")
    ana.add_argument("--format", choices=("json", "text"), default="text")
    ana.add_argument("--output")

    bench = sub.add_parser("bench", help="optimizer vs baselines over a list of lengths")
    bench.add_argument("--lengths", type=_length_list, default=[])
    bench.add_argument("--squares", type=_square_range, help="lengths x^2 for x in A:B")
    _campaign_flags(bench)
    bench.add_argument(
        "--stop-below-sqrt", action="store_true", help="stop a length once PSL < sqrt(n)"
    )
    bench.add_argument("--mseq-rotations", action="store_true", help="O(n^3) rotation scoring")
    bench.add_argument("--output")
    bench.add_argument("--format", choices=("csv", "json"), default="csv")

    exh = sub.add_parser("exhaustive")
    exh.add_argument("--length", type=int, required=True)
    exh.add_argument("--format", choices=("json", "text"), default="text")
    return parser


def _campaign_flags(p):
    p.add_argument("--seed", type=int)
    p.add_argument("--budget", type=_positive_float, default=60.0, help="seconds (default 60)")
    p.add_argument("--instances", type=_positive_int, default=None)
    p.add_argument("--quiet", action="store_true", help="no progress on stderr")


def resolve_seed(flag, environ=os.environ):
    if flag is not None:
        return flag
    if environ.get(SEED_ENV):
        try:
            return int(environ[SEED_ENV])
        except ValueError:
            raise UsageError(f"{SEED_ENV} must be an integer") from None
    return int(np.random.SeedSequence().entropy) & ((1 << 63) - 1)


def _check_init(init, n):
    if init.startswith("file:"):
        if not init[5:]:
            raise UsageError("--init file: needs a path")
        return
    if init not in baselines.FAMILIES:
        raise UsageError(f"unknown --init {init!r}")
    if init == "mseq" and baselines.mseq_degree(n) not in baselines.PRIMITIVE_POLYNOMIALS:
        raise UsageError(f"--init mseq needs length 2^d - 1 with 2 <= d <= 17, got {n}")
    if init == "legendre" and (n % 2 == 0 or not baselines.is_prime(n)):
        raise UsageError(f"--init legendre needs an odd prime length, got {n}")
    if init == "rudin-shapiro" and n & (n - 1):
        raise UsageError(f"--init rudin-shapiro needs a power-of-two length, got {n}")


def _emit(text, path):
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
        sys.stdout.flush()


def cmd_optimize(args):
    if args.length < 2:
        raise UsageError(f"--length must be > 1, got {args.length}")
    if args.target_psl is not None and args.target_psl < 0:
        raise UsageError("--target-psl must be >= 0")
    if args.max_iterations is not None and args.max_iterations < 0:
        raise UsageError("--max-iterations must be >= 0")
    _check_init(args.init, args.length)
    config = RunConfig(
        length=args.length,
        seed=resolve_seed(args.seed),
        budget_seconds=args.budget,
        target_psl=args.target_psl,
        kick_max=args.kick_max,
        init=args.init,
        max_iterations=args.max_iterations,
        reset_cost_after_kick=not args.keep_cost_after_kick,
    )
    instances = args.instances or default_instances()
    report = run_parallel(config, instances, on_improvement=Progress(enabled=not args.quiet))
    if args.trace:
        write_trace_csv(report, args.trace)
    if args.sequence_out:
        report.sequence().write(args.sequence_out)
    if args.format == "json":
        text = report.to_json(indent=2) + "\n"
    elif args.format == "csv":
        text = _csv([{k: getattr(report, k) for k in SUMMARY_COLUMNS}], SUMMARY_COLUMNS)
    else:
        text = (
            f"n={report.n} best_psl={report.best_psl} best_fitness={report.best_fitness} "
            f"iterations={report.iterations} kicks={report.kicks} "
            f"elapsed={report.elapsed_seconds:.2f}s stop={report.stop_reason}\n"
            f"{report.best_sequence}\n"
        )
    _emit(text, args.output)
    return EXIT_OK


def cmd_generate(args):
    if args.family == "mseq" and args.degree is not None:
        if args.degree not in baselines.PRIMITIVE_POLYNOMIALS:
            raise UsageError(f"no built-in polynomial of degree {args.degree}")
        n = (1 << args.degree) - 1
    elif args.length is None:
        raise UsageError("--length is required (or --degree for mseq)")
    else:
        n = args.length
        if n < 2:
            raise UsageError(f"--length must be > 1, got {n}")
        _check_init(args.family, n)
    rng = np.random.default_rng(resolve_seed(args.seed))
    seq = baselines.generate(args.family, n, rng)
    if args.best_rotation:
        shift, _ = baselines.best_rotation_psl(seq)
        seq = baselines.rotate(seq, shift)
    elif args.rotate:
        seq = baselines.rotate(seq, args.rotate)
    _emit(seq.to_text() + "\n", args.output)
    return EXIT_OK


def analyze_sequence(seq, sidelobes=False):
    report = evaluate(compute_sidelobes(seq))
    out = {"n": len(seq), "psl": report.psl, "fitness": report.fitness}
    if sidelobes:
        out["sidelobes"] = [int(c) for c in aacf(seq)[1:]]
    return out


def cmd_analyze(args):
    seq = BinarySequence.read(args.path)
    info = analyze_sequence(seq, args.sidelobes)
    if args.format == "json":
        text = json.dumps(info) + "\n"
    else:
        lines = [f"n {info['n']}", f"psl {info['psl']}", f"fitness {info['fitness']}"]
        for u, c in enumerate(info.get("sidelobes", ()), start=1):
            lines.append(f"C[{u}] {c}")
        text = "\n".join(lines) + "\n"
    _emit(text, args.output)
    return EXIT_OK


def bench_row(n, budget, instances, seed, stop_below_sqrt=False, mseq_rotations=False, progress=None):
    root = math.sqrt(n)
    target = math.ceil(root) - 1 if stop_below_sqrt else None
    config = RunConfig(length=n, seed=seed, budget_seconds=budget, target_psl=target)
    report = run_parallel(config, instances, on_improvement=progress)
    row = {
        "schema_version": BENCH_SCHEMA,
        "length": n,
        "budget_seconds": budget,
        "instances": instances,
        "seed": seed,
        "optimizer_psl": report.best_psl,
        "sqrt_n": round(root, 6),
        "below_sqrt_n": report.best_psl < root,
        "mseq_degree": "",
        "mseq_psl": "",
        "mseq_rotation_psl": "",
        "reference_mseq_psl": "",
        "reference_optimizer_psl": "",
        "elapsed_seconds": round(report.elapsed_seconds, 3),
    }
    d = baselines.mseq_degree(n)
    if d in baselines.PRIMITIVE_POLYNOMIALS:
        seq = baselines.mseq(baselines.primitive_polynomial(d))
        row["mseq_degree"] = d
        row["mseq_psl"] = evaluate(compute_sidelobes(seq)).psl
        if mseq_rotations:
            row["mseq_rotation_psl"] = baselines.best_rotation_psl(seq)[1]
    if d in baselines.TABLE_I:
        _, row["reference_mseq_psl"], row["reference_optimizer_psl"] = baselines.TABLE_I[d]
    return row


def cmd_bench(args):
    lengths = list(args.lengths) + list(args.squares or [])
    if not lengths:
        raise UsageError("bench needs --lengths and/or --squares")
    bad = [n for n in lengths if n < 2]
    if bad:
        raise UsageError(f"lengths must be > 1, got {bad}")
    seed = resolve_seed(args.seed)
    instances = args.instances or default_instances()
    progress = Progress(enabled=not args.quiet)
    rows = [
        bench_row(n, args.budget, instances, seed, args.stop_below_sqrt, args.mseq_rotations, progress)
        for n in lengths
    ]
    if args.format == "json":
        text = json.dumps({"schema_version": BENCH_SCHEMA, "rows": rows}, indent=2) + "\n"
    else:
        text = _csv(rows, BENCH_COLUMNS)
    _emit(text, args.output)
    return EXIT_OK


def cmd_exhaustive(args):
    if not 2 <= args.length <= MAX_EXHAUSTIVE_LENGTH:
        raise UsageError(f"--length must be in [2, {MAX_EXHAUSTIVE_LENGTH}]")
    psl, witness = exhaustive_min_psl(args.length)
    if args.format == "json":
        text = json.dumps({"n": args.length, "psl": psl, "witness": witness.to_text()}) + "\n"
    else:
        text = f"{args.length} {psl} {witness.to_text()}\n"
    _emit(text, None)
    return EXIT_OK


def _csv(rows, columns):
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()


COMMANDS = {
    "optimize": cmd_optimize,
    "generate": cmd_generate,
    "analyze": cmd_analyze,
    "bench": cmd_bench,
    "exhaustive": cmd_exhaustive,
}


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"pslopt {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ParseError as exc:
        print(f"pslopt {args.command}: parse error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except (OSError, ContractError) as exc:
        print(f"pslopt {args.command}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
