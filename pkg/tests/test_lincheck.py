import io
import time

import pytest

from gclist import IMPLEMENTATIONS
from gclist.lincheck import (
    INVOCATION,
    RESPONSE,
    HistoryEvent,
    IncompleteHistoryError,
    MalformedHistoryError,
    RecordConfig,
    SequentialSetOracle,
    Verdict,
    dump_history,
    is_linearizable,
    load_history,
    operations,
    record,
    replays,
)


def H(*rows):
    """Build a history from ``(tid, kind, op, key, result)`` rows."""
    out = []
    for seq, (tid, kind, op, key, result) in enumerate(rows):
        out.append(HistoryEvent(seq, tid, INVOCATION if kind == "i" else RESPONSE, op, key, result))
    return out


def test_oracle_examples():
    o = SequentialSetOracle()
    assert o.add(1) and not o.add(1)
    assert o.contains(1)
    assert o.remove(1) and not o.remove(1)
    assert o.contents == []


def test_sequential_history_is_linearizable():
    h = H((0, "i", "add", 1, None), (0, "r", "add", 1, True),
          (0, "i", "contains", 1, None), (0, "r", "contains", 1, True))
    r = is_linearizable(h)
    assert r.verdict is Verdict.LINEARIZABLE and r
    assert [op.op for op in r.witness] == ["add", "contains"]


def test_overlap_allows_reordering():
    # contains overlaps the add, so either order is fine
    h = H((0, "i", "add", 1, None), (1, "i", "contains", 1, None),
          (1, "r", "contains", 1, False), (0, "r", "add", 1, True))
    assert is_linearizable(h)


def test_real_time_order_enforced():
    h = H((0, "i", "add", 1, None), (0, "r", "add", 1, True),
          (1, "i", "contains", 1, None), (1, "r", "contains", 1, False))
    r = is_linearizable(h)
    assert r.verdict is Verdict.NOT_LINEARIZABLE and not r
    assert r.counterexample == h


def test_counterexample_is_shortest_failing_prefix():
    h = H((0, "i", "add", 1, None), (0, "r", "add", 1, True),
          (0, "i", "add", 1, None), (0, "r", "add", 1, True),
          (1, "i", "contains", 2, None), (1, "r", "contains", 2, False))
    r = is_linearizable(h)
    assert r.counterexample == h[:4]


def test_initial_contents():
    h = H((0, "i", "remove", 3, None), (0, "r", "remove", 3, True))
    assert not is_linearizable(h)
    assert is_linearizable(h, initial=[3])


def test_witness_replays():
    h = H((0, "i", "add", 1, None), (1, "i", "remove", 1, None),
          (0, "r", "add", 1, True), (1, "r", "remove", 1, True))
    r = is_linearizable(h)
    assert [op.op for op in r.witness] == ["add", "remove"]
    assert replays(r.witness)


def test_budget_exhaustion_is_inconclusive():
    h = H((0, "i", "add", 1, None), (1, "i", "add", 2, None),
          (0, "r", "add", 1, True), (1, "r", "add", 2, True))
    r = is_linearizable(h, budget=1)
    assert r.verdict is Verdict.INCONCLUSIVE and not r


@pytest.mark.parametrize("rows", [
    [(0, "r", "add", 1, True)],
    [(0, "i", "add", 1, None), (0, "i", "add", 2, None)],
    [(0, "i", "add", 1, None), (0, "r", "add", 2, True)],
    [(0, "i", "add", 1, None)],
])
def test_malformed_histories(rows):
    with pytest.raises(MalformedHistoryError):
        is_linearizable(H(*rows))


def test_out_of_order_seq():
    h = H((0, "i", "add", 1, None), (0, "r", "add", 1, True))
    with pytest.raises(MalformedHistoryError):
        operations(list(reversed(h)))


def test_pending_allowed_when_asked():
    ops = operations(H((0, "i", "add", 1, None)), allow_pending=True)
    assert ops[0].pending


def test_text_round_trip():
    h = H((0, "i", "add", 1, None), (0, "r", "add", 1, True))
    buf = io.StringIO()
    dump_history(h, buf)
    assert buf.getvalue().splitlines()[1] == "1 0 response add 1 true"
    assert load_history(io.StringIO(buf.getvalue())) == h


@pytest.mark.parametrize("line", ["", "1 0 invocation add", "1 0 call add 1 -", "1 0 response add 1 yes"])
def test_bad_lines(line):
    with pytest.raises(MalformedHistoryError):
        HistoryEvent.from_line(line)


@pytest.mark.parametrize("kwargs", [dict(threads=5), dict(threads=4, ops_per_thread=11), dict(key_range=9)])
def test_record_config_bounds(kwargs):
    with pytest.raises(ValueError):
        RecordConfig(**kwargs).validate()


def test_record_is_well_formed(impl):
    h = record(IMPLEMENTATIONS[impl], RecordConfig(threads=3, ops_per_thread=10, seed=4))
    assert len(h) == 60
    assert all(op.result is not None for op in operations(h))
    assert is_linearizable(h)


def test_record_plan_is_seeded():
    cfg = RecordConfig(threads=2, ops_per_thread=8, seed=9)
    a, b = (record(IMPLEMENTATIONS["hoh"], cfg) for _ in range(2))

    def plan(h):
        per_thread = {}
        for e in h:
            if e.kind == INVOCATION:
                per_thread.setdefault(e.thread_id, []).append((e.op, e.key))
        return per_thread

    assert plan(a) == plan(b)


class BrokenSet:
    """Check-then-act add with a yield in the middle."""

    name = "broken"

    def __init__(self):
        self.items = set()

    def add(self, key):
        if key in self.items:
            return False
        time.sleep(0)
        self.items.add(key)
        return True

    def remove(self, key):
        if key not in self.items:
            return False
        time.sleep(0)
        self.items.discard(key)
        return True

    def contains(self, key):
        return key in self.items


def test_detects_racy_set():
    cfg = dict(threads=4, ops_per_thread=10, key_range=2, weights=(1.0, 1.0, 0.2))
    bad = [s for s in range(200) if not is_linearizable(record(BrokenSet, RecordConfig(seed=s, **cfg)))]
    assert bad


def test_failing_thread_reports_incomplete():
    class Exploding(BrokenSet):
        def contains(self, key):
            raise RuntimeError("boom")

    with pytest.raises(IncompleteHistoryError):
        record(Exploding, RecordConfig(threads=2, ops_per_thread=10, weights=(0, 0, 1.0)))


def test_record_restores_switch_interval():
    import sys

    before = sys.getswitchinterval()
    record(IMPLEMENTATIONS["hoh"], RecordConfig(threads=2, ops_per_thread=2))
    assert sys.getswitchinterval() == before
