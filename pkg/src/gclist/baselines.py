"""Comparison sets for the benchmark.

``HoHList`` uses lock coupling and drops removed nodes at once (counted as a
release).  ``LeakyLazyList`` is a lazy list that never frees or reuses a
removed node, standing in for every list without memory reclamation.
"""

from __future__ import annotations

import threading
from typing import Iterator, Optional

from gclist.accounting import AllocationCounter
from gclist.base import MAX_KEY, MIN_KEY, check_key
from gclist.stamped_ref import AtomicStampedReference


class HoHNode:
    __slots__ = ("key", "next", "lock")

    def __init__(self, key: int, next_node: Optional["HoHNode"] = None) -> None:
        self.key = key
        self.next = next_node
        self.lock = threading.Lock()


class HoHList:
    name = "Hand_Over_Hand"

    def __init__(self) -> None:
        self.allocations = AllocationCounter()
        self.tail = HoHNode(MAX_KEY)
        self.head = HoHNode(MIN_KEY, self.tail)
        self.allocations.allocated()
        self.allocations.allocated()

    def _locate(self, key: int) -> tuple[HoHNode, HoHNode]:
        """Return ``(pred, curr)`` with both locked and
        ``pred.key < key <= curr.key``."""
        pred = self.head
        pred.lock.acquire()
        curr = pred.next
        curr.lock.acquire()
        while curr.key < key:
            pred.lock.release()
            pred = curr
            curr = curr.next
            curr.lock.acquire()
        return pred, curr

    def add(self, key: int) -> bool:
        check_key(key)
        pred, curr = self._locate(key)
        try:
            if curr.key == key:
                return False
            pred.next = HoHNode(key, curr)
            self.allocations.allocated()
            return True
        finally:
            curr.lock.release()
            pred.lock.release()

    def remove(self, key: int) -> bool:
        check_key(key)
        pred, curr = self._locate(key)
        try:
            if curr.key != key:
                return False
            pred.next = curr.next
            # lock coupling guarantees nobody else holds curr
            curr.next = None
            self.allocations.released()
            return True
        finally:
            curr.lock.release()
            pred.lock.release()

    def contains(self, key: int) -> bool:
        check_key(key)
        pred, curr = self._locate(key)
        try:
            return curr.key == key
        finally:
            curr.lock.release()
            pred.lock.release()

    def nodes(self) -> Iterator[HoHNode]:
        node = self.head.next
        while node is not self.tail:
            yield node
            node = node.next

    def keys(self) -> list[int]:
        return [n.key for n in self.nodes()]

    def alloc_net(self) -> int:
        return self.allocations.net()


class LazyNode:
    __slots__ = ("key", "next", "lock")

    def __init__(self, key: int, next_node: Optional["LazyNode"] = None) -> None:
        self.key = key
        # stamp bit 0 is the deletion mark
        self.next = AtomicStampedReference(next_node, 0)
        self.lock = threading.Lock()

    @property
    def marked(self) -> bool:
        return bool(self.next.get_stamp() & 1)


class LeakyLazyList:
    name = "LazyList"

    def __init__(self) -> None:
        self.allocations = AllocationCounter()
        self.tail = LazyNode(MAX_KEY)
        self.head = LazyNode(MIN_KEY, self.tail)
        self.allocations.allocated()
        self.allocations.allocated()

    def _search(self, key: int) -> tuple[LazyNode, LazyNode]:
        pred = self.head
        curr = pred.next.get_reference()
        while curr.key < key:
            pred = curr
            curr = curr.next.get_reference()
        return pred, curr

    @staticmethod
    def _validate(pred: LazyNode, curr: LazyNode) -> bool:
        ref, stamp = pred.next.get()
        return not stamp & 1 and not curr.marked and ref is curr

    def add(self, key: int) -> bool:
        check_key(key)
        while True:
            pred, curr = self._search(key)
            with pred.lock, curr.lock:
                if not self._validate(pred, curr):
                    continue
                if curr.key == key:
                    return False
                node = LazyNode(key, curr)
                self.allocations.allocated()
                pred.next.set(node, pred.next.get_stamp())
                return True

    def remove(self, key: int) -> bool:
        check_key(key)
        while True:
            pred, curr = self._search(key)
            with pred.lock, curr.lock:
                if not self._validate(pred, curr):
                    continue
                if curr.key != key:
                    return False
                succ, stamp = curr.next.get()
                curr.next.set(succ, stamp | 1)
                pred.next.set(succ, pred.next.get_stamp())
                # the node is abandoned: neither freed nor reused
                return True

    def contains(self, key: int) -> bool:
        check_key(key)
        curr = self.head
        while curr.key < key:
            curr = curr.next.get_reference()
        return curr.key == key and not curr.marked

    def nodes(self) -> Iterator[LazyNode]:
        node = self.head.next.get_reference()
        while node is not self.tail:
            yield node
            node = node.next.get_reference()

    def keys(self) -> list[int]:
        return [n.key for n in self.nodes()]

    def alloc_net(self) -> int:
        return self.allocations.net()
