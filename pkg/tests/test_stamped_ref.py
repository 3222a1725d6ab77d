import threading

from hypothesis import given, strategies as st

from gclist.stamped_ref import AtomicStampedReference, StampedSnapshot


class Ref:
    def __init__(self, name):
        self.name = name

    def __repr__(self):
        return self.name


A, B, C = Ref("A"), Ref("B"), Ref("C")


def test_get_returns_pair():
    assert AtomicStampedReference(A, 0).get() == (A, 0)
    assert AtomicStampedReference(None, 5).get() == StampedSnapshot(None, 5)


def test_projections():
    cell = AtomicStampedReference(A, 3)
    assert cell.get_stamp() == 3
    assert cell.get_reference() is A
    cell.set(B, 4)
    assert cell.get_stamp() == 4


def test_set():
    cell = AtomicStampedReference(A, 0)
    cell.set(B, 1)
    assert cell.get() == (B, 1)
    cell = AtomicStampedReference(A, 0)
    cell.set(A, 0)
    assert cell.get() == (A, 0)
    cell = AtomicStampedReference(A, 2)
    cell.set(None, 3)
    assert cell.get() == (None, 3)


def test_compare_and_set():
    cell = AtomicStampedReference(A, 0)
    assert cell.compare_and_set(A, B, 0, 1)
    assert cell.get() == (B, 1)

    cell = AtomicStampedReference(A, 0)
    assert not cell.compare_and_set(A, B, 7, 8)
    assert cell.get() == (A, 0)

    cell = AtomicStampedReference(A, 0)
    assert not cell.compare_and_set(C, B, 0, 1)
    assert cell.get() == (A, 0)


def test_stamp_is_not_width_limited():
    cell = AtomicStampedReference(A, 2**32 - 1)
    assert cell.compare_and_set(A, A, 2**32 - 1, 2**32)
    assert cell.get_stamp() == 2**32


@given(st.lists(st.tuples(st.sampled_from(["set", "cas"]), st.integers(0, 2),
                          st.integers(0, 2), st.integers(0, 4), st.integers(0, 4))))
def test_matches_sequential_model(script):
    refs = [A, B, C]
    cell = AtomicStampedReference(A, 0)
    model = (A, 0)
    for kind, r1, r2, s1, s2 in script:
        if kind == "set":
            cell.set(refs[r1], s1)
            model = (refs[r1], s1)
        else:
            expected = model == (refs[r1], s1)
            assert cell.compare_and_set(refs[r1], refs[r2], s1, s2) is expected
            if expected:
                model = (refs[r2], s2)
        assert cell.get() == model


def test_no_torn_pairs_under_concurrent_writes():
    # each legal pair is unique: ref i always travels with stamp i
    refs = [Ref(str(i)) for i in range(8)]
    legal = {(r, i) for i, r in enumerate(refs)}
    cell = AtomicStampedReference(refs[0], 0)
    stop = threading.Event()
    bad = []

    def writer(offset):
        i = offset
        while not stop.is_set():
            i = (i + 1) % len(refs)
            cell.set(refs[i], i)

    def cas_writer():
        while not stop.is_set():
            r, s = cell.get()
            nxt = (s + 3) % len(refs)
            cell.compare_and_set(r, refs[nxt], s, nxt)

    def reader():
        for _ in range(20000):
            pair = cell.get()
            if (pair.node, pair.stamp) not in legal:
                bad.append(pair)
            if (cell.get_reference(), cell.get_stamp()) is None:
                bad.append("impossible")

    threads = [threading.Thread(target=writer, args=(k,)) for k in range(3)]
    threads.append(threading.Thread(target=cas_writer))
    readers = [threading.Thread(target=reader) for _ in range(3)]
    for t in threads + readers:
        t.start()
    for t in readers:
        t.join()
    stop.set()
    for t in threads:
        t.join()
    assert bad == []


def test_exactly_one_cas_wins():
    for _ in range(50):
        cell = AtomicStampedReference(A, 0)
        k = 8
        barrier = threading.Barrier(k)
        wins = []

        def racer(i):
            barrier.wait()
            if cell.compare_and_set(A, Ref(f"w{i}"), 0, 1):
                wins.append(i)

        threads = [threading.Thread(target=racer, args=(i,)) for i in range(k)]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        assert len(wins) == 1
        assert cell.get_stamp() == 1
