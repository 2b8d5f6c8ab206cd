"""Command-line front end.

Exit codes:
  0  success
  2  invalid flags / usage
  3  checkpoint error
  4  run truncated by --limit
  5  unreadable or malformed input
  6  verification failed
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
import time
from contextlib import contextmanager
from pathlib import Path

from .classify import ClassificationError, classify, render_table, surface_report, table_report
from .enumerator import (
    CheckpointError,
    SearchConfig,
    enumerate_reps,
    read_checkpoint,
    resume,
    verify,
)
from .presentation import bellingeri_relations
from .records import OutputRecord, RecordError, RecordWriter, iter_records

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_CHECKPOINT = 3
EXIT_LIMIT = 4
EXIT_INPUT = 5
EXIT_VERIFY = 6

OUTPUT_DIR_ENV = "BRAIDCOVER_OUTPUT_DIR"

log = logging.getLogger("braidcover")


class UsageError(Exception):
    pass


def _resolve_out(path: str | None) -> Path | None:
    if path is None or path == "-":
        return None
    p = Path(path)
    base = os.environ.get(OUTPUT_DIR_ENV)
    if base and not p.is_absolute():
        p = Path(base) / p
    return p


def _threads(k: int) -> int:
    if k < 0:
        raise UsageError("--threads must be >= 0")
    return k or (os.cpu_count() or 1)


@contextmanager
def _open_out(path: Path | None, mode: str = "w"):
    if path is None:
        yield sys.stdout
    else:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, mode) as fh:
            yield fh


def _progress_printer(enabled: bool):
    if not enabled:
        return None
    last = [0.0]

    def report(done, total):
        now = time.monotonic()
        if now - last[0] >= 1.0 or done == total:
            last[0] = now
            print(f"partitions {done}/{total}", file=sys.stderr, flush=True)

    return report


def cmd_enumerate(args) -> int:
    if args.degree < 1:
        raise UsageError("--degree must be at least 1")
    if args.limit is not None and args.limit < 0:
        raise UsageError("--limit must be non-negative")
    if args.stop_after is not None and args.stop_after < 0:
        raise UsageError("--stop-after must be non-negative")
    if args.sorted and args.checkpoint:
        raise UsageError("--sorted cannot be combined with --checkpoint")
    workers = _threads(args.threads)
    out_path = _resolve_out(args.out)
    ckpt = Path(args.checkpoint) if args.checkpoint else None
    state = None
    if ckpt is not None and ckpt.exists() and not args.fresh:
        state = read_checkpoint(ckpt)
        if state.degree != args.degree:
            raise CheckpointError(f"checkpoint {ckpt} is for degree {state.degree}, not {args.degree}")
        if state.fix_sigma != args.fix_sigma:
            raise CheckpointError(f"checkpoint {ckpt} has fix_sigma={state.fix_sigma}")
        log.info("resuming from %s: %d partitions already done", ckpt, len(state.done))

    mode = "w"
    if state is not None and out_path is not None:
        # drop anything written after the last acknowledged batch
        offset = state.sink_offset or 0
        if out_path.exists():
            with open(out_path, "r+") as fh:
                fh.truncate(offset)
        mode = "a"

    with _open_out(out_path, mode) as stream:
        writer = RecordWriter(stream, args.format, header=(mode == "w"))
        stream.flush()

        def sink(reps):
            for rep in reps:
                writer.write(OutputRecord.from_rep(rep))
            stream.flush()
            return stream.tell() if out_path is not None else None

        config = SearchConfig(
            degree=args.degree,
            fix_sigma=args.fix_sigma,
            worker_count=workers,
            checkpoint_interval=args.checkpoint_interval,
            limit=args.limit,
            stop_after_partitions=args.stop_after,
            collect=args.sorted,
        )
        progress = _progress_printer(args.progress)
        if state is not None:
            res = resume(
                ckpt,
                worker_count=workers,
                sink=sink,
                checkpoint_interval=args.checkpoint_interval,
                limit=args.limit,
                stop_after_partitions=args.stop_after,
                collect=args.sorted,
                progress=progress,
            )
        else:
            res = enumerate_reps(
                config, checkpoint=ckpt, sink=None if args.sorted else sink, progress=progress
            )
        if args.sorted:
            for rep in sorted(res.solutions, key=lambda r: r.key()):
                writer.write(OutputRecord.from_rep(rep))
        summary = dict(
            degree=res.degree,
            total_count=res.total_count,
            fixed_sigma_count=res.fixed_sigma_count,
            complete=res.complete,
        )
        if not args.sorted:
            summary["elapsed"] = round(res.elapsed, 3)
        writer.summary(**summary)
    print(
        f"degree {res.degree}: total {res.total_count}, fixed-sigma {res.fixed_sigma_count},"
        f" {res.elapsed:.2f}s{'' if res.complete else ' (incomplete)'}",
        file=sys.stderr,
    )
    return EXIT_OK if res.complete else EXIT_LIMIT


def _read_input(path: str):
    p = Path(path)
    try:
        with open(p) as fh:
            return list(iter_records(fh))
    except OSError as exc:
        raise RecordError(f"cannot read {p}: {exc}") from exc


def cmd_classify(args) -> int:
    if (args.input is None) == (args.degree is None):
        raise UsageError("give exactly one of --in or --degree")
    if args.input is not None:
        reps = [rec.to_rep() for _, rec in _read_input(args.input)]
    else:
        if args.degree < 1:
            raise UsageError("--degree must be at least 1")
        reps = enumerate_reps(SearchConfig(args.degree, worker_count=_threads(args.threads))).solutions
    classes = classify(reps, method=args.method)
    with _open_out(_resolve_out(args.out)) as stream:
        writer = RecordWriter(stream, args.format)
        for c in classes:
            sr = surface_report(c)
            writer.write(
                OutputRecord.from_rep(
                    c.representative,
                    transitive=sr.image_transitive,
                    galois=sr.galois,
                    image_order=sr.image_order,
                    orbit_size=c.orbit_size,
                    stabilizer_order=c.stabilizer_order,
                    chi=sr.chi,
                    k_squared=sr.k_squared,
                )
            )
        writer.summary(classes=len(classes), representations=sum(c.orbit_size for c in classes))
    print(f"{len(classes)} classes", file=sys.stderr)
    return EXIT_OK


def cmd_verify(args) -> int:
    records = _read_input(args.input)
    if not records:
        print(f"warning: {args.input} contains no records", file=sys.stderr)
        return EXIT_OK
    bad = 0
    for lineno, rec in records:
        report = verify(rec.to_rep())
        if not report.passed:
            bad += 1
            print(f"line {lineno}: FAIL {','.join(report.failures)}", file=sys.stderr)
    print(f"{len(records) - bad}/{len(records)} records pass", file=sys.stderr)
    return EXIT_OK if bad == 0 else EXIT_VERIFY


def cmd_table(args) -> int:
    if not 2 <= args.max_degree <= 9:
        raise UsageError("--max-degree must be between 2 and 9")
    progress = None
    if args.progress:
        inner = _progress_printer(True)
        progress = lambda n, done, total: inner(done, total)  # noqa: E731

    rows = table_report(args.max_degree, worker_count=_threads(args.threads), progress=progress)
    print(render_table(rows))
    return EXIT_OK


def cmd_relations(args) -> int:
    for rel in bellingeri_relations():
        print(rel)
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="braidcover", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("enumerate", help="enumerate generic monodromy representations")
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--fix-sigma", dest="fix_sigma", action=argparse.BooleanOptionalAction, default=True,
                   help="search only sigma = (1 2) and scale (default: on)")
    p.add_argument("--threads", type=int, default=1, help="worker processes; 0 = all cores")
    p.add_argument("--out", help="output file (default: stdout)")
    p.add_argument("--format", choices=("jsonl", "csv"), default="jsonl")
    p.add_argument("--limit", type=int)
    p.add_argument("--checkpoint", help="checkpoint file; resumed automatically if it exists")
    p.add_argument("--checkpoint-interval", type=int, default=256, help="partitions per checkpoint write")
    p.add_argument("--fresh", action="store_true", help="ignore an existing checkpoint and start over")
    p.add_argument("--stop-after", type=int, metavar="P", help="stop after P partitions (staged runs)")
    p.add_argument("--progress", action="store_true")
    p.add_argument("--sorted", action="store_true", help="emit records in canonical order")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("classify", help="group representations into conjugacy classes")
    p.add_argument("--in", dest="input")
    p.add_argument("--degree", type=int)
    p.add_argument("--out")
    p.add_argument("--format", choices=("jsonl", "csv"), default="jsonl")
    p.add_argument("--method", choices=("auto", "closure", "centralizer"), default="auto")
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("verify", help="re-check records against every relation")
    p.add_argument("--in", dest="input", required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("table", help="reproduce the count table")
    p.add_argument("--max-degree", type=int, required=True)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--progress", action="store_true")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("relations", help="print the eleven defining relations")
    p.set_defaults(func=cmd_relations)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, stream=sys.stderr,
                        format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"braidcover: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CheckpointError as exc:
        print(f"braidcover: checkpoint error: {exc}", file=sys.stderr)
        return EXIT_CHECKPOINT
    except (RecordError, ClassificationError) as exc:
        print(f"braidcover: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
