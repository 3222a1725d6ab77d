"""Lock-based GCList.

Traversals are optimistic and lock-free.  A traverser re-reads the stamp of
``pred`` after it has read ``curr``.  Every write to a node's successor
bumps that node's stamp, so an unchanged stamp means ``pred`` still leads to
``curr``, and ``curr`` cannot have been handed to the pool in between; a
traverser about to step onto a possibly recycled node restarts from ``head``.
Updates lock ``pred`` then ``curr`` and validate the window by stamps.
"""

from __future__ import annotations

import threading
import time
from typing import Iterator, Optional

from gclist.accounting import AllocationCounter
from gclist.base import MAX_KEY, MIN_KEY, Window, check_key
from gclist.pool import LockFreeQueuePool, Pool, TwoLockQueuePool
from gclist.stamped_ref import AtomicStampedReference


class LBNode:
    __slots__ = ("key", "info_next", "lock")

    def __init__(self, key: int, next_node: Optional["LBNode"] = None) -> None:
        self.key = key
        self.info_next = AtomicStampedReference(next_node, 0)
        self.lock = threading.Lock()

    def __repr__(self) -> str:
        return f"LBNode({self.key}, stamp={self.info_next.get_stamp()})"


class GCLBList:
    # Stamp added to pred when a node is linked in.  With 0 an unchanged
    # pred stamp no longer proves that pred still leads to curr: a node
    # inserted after pred can be the one that later unlinks curr for reuse.
    insert_bump = 1

    def __init__(self, pool: Optional[Pool] = None) -> None:
        self.pool = pool if pool is not None else TwoLockQueuePool()
        self.allocations = AllocationCounter()
        self.tail = LBNode(MAX_KEY)
        self.head = LBNode(MIN_KEY, self.tail)
        self.allocations.allocated()
        self.allocations.allocated()

    @property
    def name(self) -> str:
        return f"GCLBList{self.pool.name}"

    def find(self, key: int) -> Window:
        head, tail = self.head, self.tail
        if head.info_next.get_reference() is tail:
            return Window(head, tail, head.info_next.get_stamp(), tail.info_next.get_stamp())
        while True:
            pred = head
            curr, pred_st = pred.info_next.get()
            while True:
                reached = key <= curr.key
                succ, curr_st = curr.info_next.get()
                if pred.info_next.get_stamp() != pred_st:
                    break
                if reached:
                    return Window(pred, curr, pred_st, curr_st)
                pred, curr, pred_st = curr, succ, curr_st

    @staticmethod
    def validate(pred: LBNode, pred_st: int, curr: LBNode, curr_st: int) -> bool:
        n_curr, n_pred_st = pred.info_next.get()
        n_curr_st = curr.info_next.get_stamp()
        return n_pred_st == pred_st and n_curr_st == curr_st and n_curr is curr

    @staticmethod
    def _lock_window(pred: LBNode, curr: LBNode) -> None:
        # tryLock on curr prevents deadlock: locks are not taken in key order
        while True:
            pred.lock.acquire()
            if curr.lock.acquire(blocking=False):
                return
            pred.lock.release()
            time.sleep(0)

    def add(self, key: int) -> bool:
        check_key(key)
        while True:
            pred, curr, pred_st, curr_st = self.find(key)
            self._lock_window(pred, curr)
            try:
                if not self.validate(pred, pred_st, curr, curr_st):
                    continue
                if curr.key == key:
                    return False
                node = self.pool.get()
                if node is not None:
                    node.key = key
                else:
                    node = LBNode(key)
                    self.allocations.allocated()
                # a recycled node keeps its stamp
                node.info_next.set(curr, node.info_next.get_stamp())
                pred.info_next.set(node, pred.info_next.get_stamp() + self.insert_bump)
                return True
            finally:
                curr.lock.release()
                pred.lock.release()

    def remove(self, key: int) -> bool:
        check_key(key)
        while True:
            pred, curr, pred_st, curr_st = self.find(key)
            self._lock_window(pred, curr)
            try:
                if not self.validate(pred, pred_st, curr, curr_st):
                    continue
                if curr.key != key:
                    return False
                succ, stamp = curr.info_next.get()
                pred.info_next.set(succ, pred.info_next.get_stamp() + 1)
                curr.info_next.set(succ, stamp + 1)
                self.pool.set(curr)
                return True
            finally:
                curr.lock.release()
                pred.lock.release()

    def contains(self, key: int) -> bool:
        check_key(key)
        head = self.head
        while True:
            pred = head
            curr, pred_st = pred.info_next.get()
            curr_key = curr.key
            while True:
                reached = key <= curr_key
                succ, curr_st = curr.info_next.get()
                if pred.info_next.get_stamp() != pred_st:
                    break
                if reached:
                    return curr_key == key
                pred, curr, pred_st = curr, succ, curr_st
                curr_key = curr.key

    # Quiescent inspection helpers.

    def nodes(self) -> Iterator[LBNode]:
        """Yield the non-sentinel nodes reachable from ``head``."""
        node = self.head.info_next.get_reference()
        while node is not self.tail:
            yield node
            node = node.info_next.get_reference()

    def keys(self) -> list[int]:
        return [n.key for n in self.nodes()]

    def alloc_net(self) -> int:
        return self.allocations.net()


def gclb_lb() -> GCLBList:
    return GCLBList(TwoLockQueuePool())


def gclb_lf() -> GCLBList:
    return GCLBList(LockFreeQueuePool())
