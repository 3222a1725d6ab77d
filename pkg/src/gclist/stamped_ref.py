"""Atomic (reference, stamp) cells.

A cell holds one immutable :class:`StampedSnapshot`.  Readers fetch the whole
pair with a single attribute load, so a read can never mix the reference of
one write with the stamp of another.  Writers and compare-and-set serialise
on a per-cell lock, which plays the role of the hardware double-word CAS.

Stamps are Python ints and therefore unbounded; wraparound cannot occur.
"""

from __future__ import annotations

import threading
from typing import Any, NamedTuple, Optional


class StampedSnapshot(NamedTuple):
    node: Optional[Any]
    stamp: int


class AtomicStampedReference:
    __slots__ = ("_pair", "_lock")

    def __init__(self, node: Optional[Any] = None, stamp: int = 0) -> None:
        self._pair = StampedSnapshot(node, stamp)
        self._lock = threading.Lock()

    def get(self) -> StampedSnapshot:
        return self._pair

    def get_reference(self) -> Optional[Any]:
        return self._pair[0]

    def get_stamp(self) -> int:
        return self._pair[1]

    def set(self, node: Optional[Any], stamp: int) -> None:
        with self._lock:
            self._pair = StampedSnapshot(node, stamp)

    def compare_and_set(
        self,
        expect_node: Optional[Any],
        new_node: Optional[Any],
        expect_stamp: int,
        new_stamp: int,
    ) -> bool:
        """Install ``(new_node, new_stamp)`` iff the cell holds exactly
        ``(expect_node, expect_stamp)``.

        References compare by identity, stamps by value.
        """
        with self._lock:
            node, stamp = self._pair
            if node is expect_node and stamp == expect_stamp:
                self._pair = StampedSnapshot(new_node, new_stamp)
                return True
            return False

    def __repr__(self) -> str:
        node, stamp = self._pair
        return f"AtomicStampedReference({node!r}, {stamp})"
