"""History recording and brute-force linearizability checking for sets.

A history is a list of :class:`HistoryEvent` ordered by ``seq``, a global
counter stamped at invocation and at response.  The checker is a Wing-Gong
style backtracking search over real-time-respecting orders with memoisation
on ``(linearized ops, set contents)``; at desk scale (a few threads, a few
dozen ops, a handful of keys) it is exhaustive.
"""

from __future__ import annotations

import enum
import itertools
import random
import sys
import threading
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, TextIO

from gclist.base import ConcurrentSet

OPS = ("add", "remove", "contains")
INVOCATION = "invocation"
RESPONSE = "response"

MAX_THREADS = 4
MAX_OPS = 40
MAX_KEY_RANGE = 8
DEFAULT_BUDGET = 2_000_000


class MalformedHistoryError(ValueError):
    pass


class IncompleteHistoryError(RuntimeError):
    """A recording thread died before responding."""


@dataclass(frozen=True)
class HistoryEvent:
    seq: int
    thread_id: int
    kind: str
    op: str
    key: int
    result: Optional[bool] = None

    def to_line(self) -> str:
        result = "-" if self.result is None else str(self.result).lower()
        return f"{self.seq} {self.thread_id} {self.kind} {self.op} {self.key} {result}"

    @classmethod
    def from_line(cls, line: str) -> "HistoryEvent":
        try:
            seq, tid, kind, op, key, result = line.split()
        except ValueError:
            raise MalformedHistoryError(f"bad event line: {line!r}") from None
        if kind not in (INVOCATION, RESPONSE) or op not in OPS:
            raise MalformedHistoryError(f"bad event line: {line!r}")
        parsed = {"-": None, "true": True, "false": False}
        if result not in parsed:
            raise MalformedHistoryError(f"bad result in {line!r}")
        return cls(int(seq), int(tid), kind, op, int(key), parsed[result])


def dump_history(history: Iterable[HistoryEvent], out: TextIO) -> None:
    for event in history:
        out.write(event.to_line() + "\n")


def load_history(src: TextIO) -> list[HistoryEvent]:
    return [HistoryEvent.from_line(line) for line in src if line.strip()]


class SequentialSetOracle:
    """Reference sequential set."""

    def __init__(self, contents: Iterable[int] = ()) -> None:
        self._contents = set(contents)

    def add(self, key: int) -> bool:
        if key in self._contents:
            return False
        self._contents.add(key)
        return True

    def remove(self, key: int) -> bool:
        if key not in self._contents:
            return False
        self._contents.remove(key)
        return True

    def contains(self, key: int) -> bool:
        return key in self._contents

    def apply(self, op: str, key: int) -> bool:
        return getattr(self, op)(key)

    @property
    def contents(self) -> list[int]:
        return sorted(self._contents)


def _step(contents: frozenset, op: str, key: int) -> tuple[bool, frozenset]:
    present = key in contents
    if op == "contains":
        return present, contents
    if op == "add":
        return (False, contents) if present else (True, contents | {key})
    return (True, contents - {key}) if present else (False, contents)


class HistoryRecorder:
    """Stamps invocation and response events from concurrent threads."""

    def __init__(self) -> None:
        self._counter = itertools.count()
        self._lock = threading.Lock()
        self.events: list[HistoryEvent] = []

    def _log(self, tid: int, kind: str, op: str, key: int, result: Optional[bool]) -> None:
        with self._lock:
            self.events.append(HistoryEvent(next(self._counter), tid, kind, op, key, result))

    def call(self, target: ConcurrentSet, tid: int, op: str, key: int) -> bool:
        self._log(tid, INVOCATION, op, key, None)
        result = getattr(target, op)(key)
        self._log(tid, RESPONSE, op, key, result)
        return result


@dataclass
class Operation:
    index: int
    thread_id: int
    op: str
    key: int
    result: Optional[bool]
    invoked: int
    responded: Optional[int]

    @property
    def pending(self) -> bool:
        return self.responded is None


def operations(history: Iterable[HistoryEvent], allow_pending: bool = False) -> list[Operation]:
    """Pair invocations with responses, checking well-formedness."""
    ops: list[Operation] = []
    open_ops: dict[int, Operation] = {}
    last_seq = -1
    for event in history:
        if event.seq <= last_seq:
            raise MalformedHistoryError(f"events out of order at seq {event.seq}")
        last_seq = event.seq
        tid = event.thread_id
        if event.kind == INVOCATION:
            if tid in open_ops:
                raise MalformedHistoryError(f"thread {tid} invoked twice at seq {event.seq}")
            op = Operation(len(ops), tid, event.op, event.key, None, event.seq, None)
            ops.append(op)
            open_ops[tid] = op
        else:
            op = open_ops.pop(tid, None)
            if op is None or op.op != event.op or op.key != event.key:
                raise MalformedHistoryError(f"unmatched response at seq {event.seq}")
            if event.result is None:
                raise MalformedHistoryError(f"response without result at seq {event.seq}")
            op.result = event.result
            op.responded = event.seq
    if open_ops and not allow_pending:
        raise MalformedHistoryError(f"pending invocations on threads {sorted(open_ops)}")
    return ops


class Verdict(enum.Enum):
    LINEARIZABLE = "linearizable"
    NOT_LINEARIZABLE = "not linearizable"
    INCONCLUSIVE = "inconclusive"


@dataclass
class CheckResult:
    verdict: Verdict
    witness: Optional[list[Operation]] = None
    counterexample: Optional[list[HistoryEvent]] = None
    explored: int = 0

    def __bool__(self) -> bool:
        return self.verdict is Verdict.LINEARIZABLE


class _Cutoff(Exception):
    pass


def _search(ops: list[Operation], initial: frozenset, budget: int) -> tuple[Optional[list[int]], int]:
    n = len(ops)
    never = float("inf")
    deadline = [never if op.pending else op.responded for op in ops]
    required = 0
    for op in ops:
        if not op.pending:
            required |= 1 << op.index
    seen: set[tuple[int, frozenset]] = set()
    path: list[int] = []
    explored = 0

    def dfs(mask: int, contents: frozenset) -> bool:
        nonlocal explored
        if mask & required == required:
            return True
        state = (mask, contents)
        if state in seen:
            return False
        explored += 1
        if explored > budget:
            raise _Cutoff
        seen.add(state)
        horizon = min(deadline[i] for i in range(n) if not mask >> i & 1)
        for i in range(n):
            if mask >> i & 1:
                continue
            op = ops[i]
            if op.invoked > horizon:
                continue
            result, after = _step(contents, op.op, op.key)
            if not op.pending and result != op.result:
                continue
            path.append(i)
            if dfs(mask | 1 << i, after):
                return True
            path.pop()
        return False

    limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(limit, 4 * n + 100))
    try:
        found = dfs(0, initial)
    finally:
        sys.setrecursionlimit(limit)
    return (list(path) if found else None), explored


def _check(history: list[HistoryEvent], initial: frozenset, budget: int, allow_pending: bool):
    ops = operations(history, allow_pending=allow_pending)
    try:
        order, explored = _search(ops, initial, budget)
    except _Cutoff:
        return None, ops, budget, True
    return order, ops, explored, False


def is_linearizable(
    history: list[HistoryEvent],
    initial: Iterable[int] = (),
    budget: int = DEFAULT_BUDGET,
) -> CheckResult:
    """Decide whether a complete history is linearizable w.r.t. a set.

    On success the witness is the linearization order, which replays on a
    :class:`SequentialSetOracle`.  On failure the counterexample is the
    shortest failing prefix of the history.  Exceeding ``budget`` search
    states gives an inconclusive verdict.
    """
    start = frozenset(initial)
    order, ops, explored, cut = _check(history, start, budget, allow_pending=False)
    if cut:
        return CheckResult(Verdict.INCONCLUSIVE, explored=explored)
    if order is not None:
        return CheckResult(Verdict.LINEARIZABLE, witness=[ops[i] for i in order], explored=explored)

    # prefixes of a linearizable history are linearizable, so bisect
    lo, hi = 1, len(history)
    while lo < hi:
        mid = (lo + hi) // 2
        prefix_order, _, _, prefix_cut = _check(history[:mid], start, budget, allow_pending=True)
        if prefix_order is None and not prefix_cut:
            hi = mid
        else:
            lo = mid + 1
    return CheckResult(Verdict.NOT_LINEARIZABLE, counterexample=history[:lo], explored=explored)


def replays(witness: list[Operation], initial: Iterable[int] = ()) -> bool:
    oracle = SequentialSetOracle(initial)
    return all(oracle.apply(op.op, op.key) == op.result for op in witness if not op.pending)


@dataclass
class RecordConfig:
    threads: int = 3
    ops_per_thread: int = 10
    key_range: int = 8
    seed: int = 0
    weights: tuple[float, float, float] = (1.0, 1.0, 1.0)
    switch_interval: float = 1e-6
    prefill: list[int] = field(default_factory=list)

    def validate(self) -> None:
        if not 1 <= self.threads <= MAX_THREADS:
            raise ValueError(f"threads must be in 1..{MAX_THREADS}")
        if self.threads * self.ops_per_thread > MAX_OPS:
            raise ValueError(f"at most {MAX_OPS} operations per history")
        if not 1 <= self.key_range <= MAX_KEY_RANGE:
            raise ValueError(f"key range must be in 1..{MAX_KEY_RANGE}")


def record(make_set: Callable[[], ConcurrentSet], config: RecordConfig) -> list[HistoryEvent]:
    """Run random operations from several threads and return the history."""
    config.validate()
    target = make_set()
    for key in config.prefill:
        target.add(key)
    recorder = HistoryRecorder()
    plans = []
    for tid in range(config.threads):
        rng = random.Random(f"{config.seed}:{tid}")
        ops = rng.choices(OPS, weights=config.weights, k=config.ops_per_thread)
        plans.append([(op, rng.randrange(config.key_range)) for op in ops])
    barrier = threading.Barrier(config.threads)
    errors: list[BaseException] = []

    def worker(tid: int) -> None:
        try:
            barrier.wait()
            for op, key in plans[tid]:
                recorder.call(target, tid, op, key)
        except BaseException as exc:  # surfaced below with context
            errors.append(exc)

    old_interval = sys.getswitchinterval()
    sys.setswitchinterval(config.switch_interval)
    try:
        workers = [threading.Thread(target=worker, args=(tid,)) for tid in range(config.threads)]
        for w in workers:
            w.start()
        for w in workers:
            w.join()
    finally:
        sys.setswitchinterval(old_interval)
    if errors:
        raise IncompleteHistoryError(f"recording thread failed: {errors[0]!r}") from errors[0]
    return recorder.events
