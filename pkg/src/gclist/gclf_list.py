"""Lock-free GCList.

Stamp parity is the deletion mark: a node with an even stamp belongs to the
set, an odd stamp means logically deleted (or sitting in the pool).  Removal
marks ``curr`` by bumping its stamp by one, then unlinks it by CAS on ``pred``
with ``pred``'s stamp advanced by two, which keeps ``pred``'s parity and
invalidates every traverser that read ``pred`` before the unlink.
Traversals in :meth:`GCLFList.find` help by unlinking marked nodes they meet.
"""

from __future__ import annotations

from typing import Iterator, Optional

from gclist.accounting import AllocationCounter
from gclist.base import MAX_KEY, MIN_KEY, Window, check_key
from gclist.pool import LockFreeQueuePool, Pool, TwoLockQueuePool
from gclist.stamped_ref import AtomicStampedReference


class LFNode:
    __slots__ = ("key", "info_next")

    def __init__(self, key: int, next_node: Optional["LFNode"] = None) -> None:
        self.key = key
        self.info_next = AtomicStampedReference(next_node, 0)

    def __repr__(self) -> str:
        return f"LFNode({self.key}, stamp={self.info_next.get_stamp()})"


class GCLFList:
    # Stamp added to pred when a node is linked in.  Keeping pred's stamp
    # unchanged (0) lets a stale adder CAS succeed after curr was removed,
    # recycled and re-linked behind the same pred; 2 makes every change of
    # pred's successor visible while preserving parity.
    insert_bump = 2

    def __init__(self, pool: Optional[Pool] = None) -> None:
        self.pool = pool if pool is not None else LockFreeQueuePool()
        self.allocations = AllocationCounter()
        self.tail = LFNode(MAX_KEY)
        self.head = LFNode(MIN_KEY, self.tail)
        self.allocations.allocated()
        self.allocations.allocated()

    @property
    def name(self) -> str:
        return f"GCLFList{self.pool.name}"

    def find(self, key: int) -> Window:
        head, pool = self.head, self.pool
        while True:
            pred = head
            curr, pred_st = pred.info_next.get()
            while True:
                curr_key = curr.key
                succ, curr_st = curr.info_next.get()
                if curr_st & 1:
                    if not pred.info_next.compare_and_set(curr, succ, pred_st, pred_st + 2):
                        break
                    pool.set(curr)
                    pred_st += 2
                    # pred is unchanged; examine the successor before any
                    # break test so an unlinked node is never returned
                    curr = succ
                    continue
                reached = key <= curr_key
                if pred.info_next.get_stamp() != pred_st:
                    break
                if reached:
                    return Window(pred, curr, pred_st, curr_st)
                pred, curr, pred_st = curr, succ, curr_st

    def remove(self, key: int) -> bool:
        check_key(key)
        while True:
            pred, curr, pred_st, curr_st = self.find(key)
            if curr.key != key:
                return False
            succ = curr.info_next.get_reference()
            if not curr.info_next.compare_and_set(succ, succ, curr_st, curr_st + 1):
                continue
            if pred.info_next.compare_and_set(curr, succ, pred_st, pred_st + 2):
                self.pool.set(curr)
            else:
                self.find(key)
            return True

    def add(self, key: int) -> bool:
        check_key(key)
        node = self.pool.get()
        from_pool = node is not None
        if from_pool:
            node.key = key
            node.info_next.set(None, node.info_next.get_stamp() + 1)
        else:
            node = LFNode(key)
            self.allocations.allocated()
        while True:
            pred, curr, pred_st, _ = self.find(key)
            if curr.key == key:
                if from_pool:
                    node.info_next.set(None, node.info_next.get_stamp() - 1)
                    self.pool.set(node)
                else:
                    self.allocations.released()
                return False
            node.info_next.set(curr, node.info_next.get_stamp())
            if pred.info_next.compare_and_set(curr, node, pred_st, pred_st + self.insert_bump):
                return True

    def contains(self, key: int) -> bool:
        check_key(key)
        head = self.head
        while True:
            pred = head
            curr, pred_st = pred.info_next.get()
            while True:
                curr_key = curr.key
                succ, curr_st = curr.info_next.get()
                reached = key <= curr_key
                # pred_st is the stamp seen when pred was reached; a recycled
                # pred fails this check even if it is now unmarked again
                if pred.info_next.get_stamp() != pred_st:
                    break
                if reached:
                    return curr_key == key and not curr_st & 1
                # marked nodes are walked past, never unlinked here
                pred, curr, pred_st = curr, succ, curr_st

    # Quiescent inspection helpers.

    def nodes(self) -> Iterator[LFNode]:
        node = self.head.info_next.get_reference()
        while node is not self.tail:
            yield node
            node = node.info_next.get_reference()

    def keys(self) -> list[int]:
        """Keys of unmarked reachable nodes."""
        return [n.key for n in self.nodes() if not n.info_next.get_stamp() & 1]

    def alloc_net(self) -> int:
        return self.allocations.net()


def gclf_lb() -> GCLFList:
    return GCLFList(TwoLockQueuePool())


def gclf_lf() -> GCLFList:
    return GCLFList(LockFreeQueuePool())
