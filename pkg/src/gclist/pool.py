"""Pools of removed list nodes awaiting reuse.

Both pools are unbounded FIFO queues that treat the list node as an opaque
payload: they never read or write its key or stamp.  Each ``set`` wraps the
node in a fresh :class:`QNode`; wrapper allocations are tallied on
``pool.wrappers`` and kept apart from list-node accounting.
"""

from __future__ import annotations

import threading
from typing import Any, Iterator, Optional, Protocol

from gclist.accounting import AllocationCounter
from gclist.stamped_ref import AtomicStampedReference


class Pool(Protocol):
    def set(self, node: Any) -> None: ...

    def get(self) -> Optional[Any]: ...


class QNode:
    __slots__ = ("node", "next")

    def __init__(self, node: Optional[Any] = None) -> None:
        self.node = node
        self.next = AtomicStampedReference(None, 0)


def _payloads(first: QNode) -> Iterator[Any]:
    q = first.next.get_reference()
    while q is not None:
        yield q.node
        q = q.next.get_reference()


class TwoLockQueuePool:
    """Blocking queue with one lock for enqueuers and one for dequeuers.

    ``head`` always points at a sentinel whose payload is meaningless; the
    oldest element lives in ``head.next``.
    """

    name = "LBQueue"

    def __init__(self) -> None:
        self._enq_lock = threading.Lock()
        self._deq_lock = threading.Lock()
        self._head = self._tail = QNode()
        self.wrappers = AllocationCounter()

    def set(self, node: Any) -> None:
        if node is None:
            return
        q = QNode(node)
        self.wrappers.allocated()
        with self._enq_lock:
            tail = self._tail
            tail.next.set(q, tail.next.get_stamp())
            self._tail = q

    def get(self) -> Optional[Any]:
        with self._deq_lock:
            first = self._head
            nxt = first.next.get_reference()
            if nxt is None:
                return None
            node = nxt.node
            nxt.node = None
            self._head = nxt
        self.wrappers.released()
        return node

    def snapshot(self) -> list[Any]:
        """Queued payloads in FIFO order. Only meaningful at quiescence."""
        return list(_payloads(self._head))

    def __len__(self) -> int:
        return sum(1 for _ in _payloads(self._head))


class LockFreeQueuePool:
    """Michael-Scott queue; head and tail are stamped to rule out ABA."""

    name = "LFQueue"

    def __init__(self) -> None:
        sentinel = QNode()
        self.head = AtomicStampedReference(sentinel, 0)
        self.tail = AtomicStampedReference(sentinel, 0)
        self.wrappers = AllocationCounter()

    def set(self, node: Any) -> None:
        if node is None:
            return
        x = QNode(node)
        self.wrappers.allocated()
        tail = self.tail
        while True:
            last, last_st = tail.get()
            nxt, nxt_st = last.next.get()
            if tail.get() != (last, last_st):
                continue
            if nxt is None:
                if last.next.compare_and_set(None, x, nxt_st, nxt_st + 1):
                    tail.compare_and_set(last, x, last_st, last_st + 1)
                    return
            else:
                # help a lagging enqueuer swing tail
                tail.compare_and_set(last, nxt, last_st, last_st + 1)

    def get(self) -> Optional[Any]:
        head, tail = self.head, self.tail
        while True:
            first, first_st = head.get()
            last, last_st = tail.get()
            nxt = first.next.get_reference()
            if head.get() != (first, first_st):
                continue
            if first is last:
                if nxt is None:
                    return None
                tail.compare_and_set(last, nxt, last_st, last_st + 1)
            else:
                # read the payload before the swing; once head moves, another
                # dequeuer may already own nxt
                node = nxt.node
                if head.compare_and_set(first, nxt, first_st, first_st + 1):
                    self.wrappers.released()
                    return node

    def snapshot(self) -> list[Any]:
        """Queued payloads in FIFO order. Only meaningful at quiescence."""
        return list(_payloads(self.head.get_reference()))

    def __len__(self) -> int:
        return sum(1 for _ in _payloads(self.head.get_reference()))


POOLS = {"lb": TwoLockQueuePool, "lf": LockFreeQueuePool}
