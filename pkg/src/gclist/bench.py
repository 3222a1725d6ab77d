"""Throughput and memory benchmark for the set implementations.

Every worker draws its operations from its own seeded generator, so the
operation stream of thread ``t`` depends only on ``(seed, t)``.  Allocation
counters are thread-local and summed after the workers join.

Usage::

    bench run --impl gclb-lb,gclf-lf --threads 2,4,8 --seconds 10 --mix 90:9:1 --csv per_10.csv
    bench compare-memory --impl gclb-lb --baseline hoh --threads 2 --ops 100000 --mix 90:9:1
"""

from __future__ import annotations

import argparse
import csv
import logging
import random
import sys
import threading
import time
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterator, Mapping, Optional, Sequence

from gclist import IMPLEMENTATIONS

log = logging.getLogger(__name__)


class BenchError(Exception):
    pass


@dataclass(frozen=True)
class WorkloadMix:
    contains_pct: float
    add_pct: float
    remove_pct: float

    def __post_init__(self) -> None:
        parts = (self.contains_pct, self.add_pct, self.remove_pct)
        if any(p < 0 for p in parts):
            raise ValueError(f"negative percentage in mix {parts}")
        if abs(sum(parts) - 100) > 1e-9:
            raise ValueError(f"mix {parts} does not sum to 100")

    @classmethod
    def parse(cls, text: str) -> "WorkloadMix":
        """Parse ``C:A:R``, e.g. ``90:9:1``."""
        try:
            c, a, r = (float(p) for p in text.split(":"))
        except ValueError:
            raise ValueError(f"mix must look like C:A:R, got {text!r}") from None
        return cls(c, a, r)

    def __str__(self) -> str:
        return f"{self.contains_pct:g}:{self.add_pct:g}:{self.remove_pct:g}"


@dataclass
class RunConfig:
    implementation: str
    threads: int = 2
    duration_seconds: Optional[float] = 1.0
    total_ops: Optional[int] = None
    mix: WorkloadMix = field(default_factory=lambda: WorkloadMix(90, 9, 1))
    key_range: tuple[int, int] = (0, 1024)
    seed: int = 0
    prefill: int = 0
    watchdog: bool = False

    def validate(self) -> None:
        if self.implementation not in IMPLEMENTATIONS:
            raise BenchError(
                f"unknown implementation {self.implementation!r}; "
                f"choose from {', '.join(IMPLEMENTATIONS)}"
            )
        if self.threads < 1:
            raise BenchError("threads must be >= 1")
        if self.total_ops is None:
            if self.duration_seconds is None or self.duration_seconds <= 0:
                raise BenchError("duration must be > 0")
        elif self.total_ops < 0:
            raise BenchError("ops budget must be >= 0")
        lo, hi = self.key_range
        if hi <= lo:
            raise BenchError(f"empty key range {self.key_range}")


@dataclass
class RunReport:
    implementation: str
    name: str
    threads: int
    total_ops: int
    elapsed_seconds: float
    ops_per_sec: float
    alloc_net: int
    allocations: int
    releases: int
    successful_adds: int
    successful_removes: int
    max_stall_seconds: float = 0.0
    node_count_ratio_vs_hoh: Optional[float] = None


def workload_stream(config: RunConfig, thread_id: int) -> Iterator[tuple[str, int]]:
    """Endless ``(op, key)`` stream for one worker."""
    rng = random.Random(f"{config.seed}:{thread_id}")
    c_cut = config.mix.contains_pct
    a_cut = c_cut + config.mix.add_pct
    lo, hi = config.key_range
    draw, pick = rng.random, rng.randrange
    while True:
        x = draw() * 100
        op = "contains" if x < c_cut else "add" if x < a_cut else "remove"
        yield op, pick(lo, hi)


def _split(total: int, parts: int) -> list[int]:
    q, r = divmod(total, parts)
    return [q + (1 if i < r else 0) for i in range(parts)]


def run_benchmark(config: RunConfig, target=None) -> RunReport:
    """Run one benchmark; ``target`` may supply a pre-built set."""
    config.validate()
    s = target if target is not None else IMPLEMENTATIONS[config.implementation]()
    if config.prefill:
        rng = random.Random(f"{config.seed}:prefill")
        lo, hi = config.key_range
        while len(s.keys()) < min(config.prefill, hi - lo):
            s.add(rng.randrange(lo, hi))

    n = config.threads
    budgets = _split(config.total_ops, n) if config.total_ops is not None else [None] * n
    progress = [[0, 0, 0] for _ in range(n)]  # ops, adds, removes
    running = [True]
    barrier = threading.Barrier(n + 1)
    errors: list[BaseException] = []

    def worker(tid: int) -> None:
        cell = progress[tid]
        methods = {"add": s.add, "remove": s.remove, "contains": s.contains}
        stream = workload_stream(config, tid)
        budget = budgets[tid]
        try:
            barrier.wait()
            for op, key in stream:
                if budget is not None:
                    if cell[0] >= budget:
                        break
                elif not running[0]:
                    break
                ok = methods[op](key)
                if ok and op != "contains":
                    cell[1 if op == "add" else 2] += 1
                cell[0] += 1
        except BaseException as exc:
            errors.append(exc)
            running[0] = False

    workers = [threading.Thread(target=worker, args=(t,), daemon=True) for t in range(n)]
    for w in workers:
        w.start()

    stall = [0.0]
    monitor = None
    if config.watchdog:
        monitor = threading.Thread(target=_watch, args=(progress, workers, stall), daemon=True)

    barrier.wait()
    start = time.perf_counter()
    if monitor is not None:
        monitor.start()
    if config.total_ops is None:
        time.sleep(config.duration_seconds)
        running[0] = False
    for w in workers:
        w.join()
    elapsed = time.perf_counter() - start
    if monitor is not None:
        monitor.join()
    if errors:
        raise BenchError(f"worker failed: {errors[0]!r}") from errors[0]

    total = sum(c[0] for c in progress)
    return RunReport(
        implementation=config.implementation,
        name=s.name,
        threads=n,
        total_ops=total,
        elapsed_seconds=elapsed,
        ops_per_sec=total / elapsed if elapsed > 0 else 0.0,
        alloc_net=s.alloc_net(),
        allocations=s.allocations.allocations,
        releases=s.allocations.releases,
        successful_adds=sum(c[1] for c in progress),
        successful_removes=sum(c[2] for c in progress),
        max_stall_seconds=stall[0],
    )


def _watch(progress, workers, stall, interval: float = 0.02) -> None:
    last_total = -1
    last_change = time.perf_counter()
    while any(w.is_alive() for w in workers):
        time.sleep(interval)
        now = time.perf_counter()
        total = sum(c[0] for c in progress)
        if total != last_total:
            last_total, last_change = total, now
        stall[0] = max(stall[0], now - last_change)


def compare_memory(config: RunConfig, baseline: str = "hoh") -> tuple[float, RunReport, RunReport]:
    """Node-count ratio of ``config.implementation`` against ``baseline``
    under an otherwise identical workload."""
    base_cfg = replace(config, implementation=baseline)
    report = run_benchmark(config)
    base = run_benchmark(base_cfg)
    if base.alloc_net == 0:
        raise BenchError(f"baseline {baseline} finished with zero net allocations; ratio undefined")
    ratio = report.alloc_net / base.alloc_net
    report.node_count_ratio_vs_hoh = ratio
    return ratio, report, base


def emit_csv(
    table: Mapping[int, Mapping[str, float]], columns: Sequence[str], path: Path | str
) -> None:
    """Write one row per thread count and one column per implementation."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["Threads", *columns])
        for threads in sorted(table):
            row = table[threads]
            writer.writerow([threads, *(_fmt(row[c]) for c in columns)])


def read_csv(path: Path | str) -> tuple[list[str], dict[int, dict[str, float]]]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        columns = header[1:]
        table = {}
        for row in reader:
            table[int(row[0])] = {c: _parse(v) for c, v in zip(columns, row[1:])}
    return columns, table


def _fmt(value: float) -> str:
    return str(value) if isinstance(value, int) else repr(float(value))


def _parse(text: str) -> float:
    try:
        return int(text)
    except ValueError:
        return float(text)


# -- CLI ---------------------------------------------------------------------


def _int_list(text: str) -> list[int]:
    return [int(t) for t in text.split(",") if t]


def _impl_list(text: str) -> list[str]:
    names = [t for t in text.split(",") if t]
    for name in names:
        if name not in IMPLEMENTATIONS:
            raise argparse.ArgumentTypeError(
                f"unknown implementation {name!r} (choose from {', '.join(IMPLEMENTATIONS)})"
            )
    return names


def _mix(text: str) -> WorkloadMix:
    try:
        return WorkloadMix.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _key_range(text: str) -> tuple[int, int]:
    if ":" in text:
        lo, hi = text.split(":")
        return int(lo), int(hi)
    return 0, int(text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bench", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--impl", type=_impl_list, required=True, help="comma-separated implementations")
        p.add_argument("--threads", type=_int_list, default=[2], help="comma-separated thread counts")
        budget = p.add_mutually_exclusive_group()
        budget.add_argument("--seconds", type=float, default=None)
        budget.add_argument("--ops", type=int, default=None, help="total operations across threads")
        p.add_argument("--mix", type=_mix, default=WorkloadMix(90, 9, 1), help="contains:add:remove")
        p.add_argument("--key-range", type=_key_range, default=(0, 1024), help="K or LO:HI")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--prefill", type=int, default=0)
        p.add_argument("--csv", type=Path, default=None)

    run = sub.add_parser("run", help="timed or fixed-op throughput runs")
    common(run)
    run.add_argument(
        "--metric",
        choices=("total_ops", "ops_per_sec", "alloc_net"),
        default="total_ops",
        help="value written to the CSV cells",
    )

    mem = sub.add_parser("compare-memory", help="node-count ratio against a baseline")
    common(mem)
    mem.add_argument("--baseline", default="hoh", type=lambda t: _impl_list(t)[0])
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO, format="%(message)s")
    if args.seconds is None and args.ops is None:
        args.seconds = 10.0 if args.command == "run" else None
        if args.command == "compare-memory":
            args.ops = 100_000
    if any(t < 1 for t in args.threads):
        parser.error("thread counts must be >= 1")
    if args.seconds is not None and args.seconds <= 0:
        parser.error("--seconds must be > 0")

    table: dict[int, dict[str, float]] = {}
    columns: list[str] = []
    for threads in args.threads:
        for impl in args.impl:
            cfg = RunConfig(
                implementation=impl,
                threads=threads,
                duration_seconds=args.seconds,
                total_ops=args.ops,
                mix=args.mix,
                key_range=args.key_range,
                seed=args.seed,
                prefill=args.prefill,
            )
            try:
                if args.command == "run":
                    report = run_benchmark(cfg)
                    value = getattr(report, args.metric)
                    log.info(
                        "%s threads=%d ops=%d ops/s=%.0f allocNet=%d",
                        report.name, threads, report.total_ops, report.ops_per_sec, report.alloc_net,
                    )
                else:
                    value, report, base = compare_memory(cfg, args.baseline)
                    log.info(
                        "%s threads=%d allocNet=%d %s allocNet=%d ratio=%.4f",
                        report.name, threads, report.alloc_net, base.name, base.alloc_net, value,
                    )
            except BenchError as exc:
                print(f"bench: error: {exc}", file=sys.stderr)
                return 2
            if report.name not in columns:
                columns.append(report.name)
            table.setdefault(threads, {})[report.name] = value
    if args.csv is not None:
        emit_csv(table, columns, args.csv)
    return 0


if __name__ == "__main__":
    sys.exit(main())
