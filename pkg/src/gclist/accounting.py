"""Thread-local allocation counters consolidated after the workers join."""

from __future__ import annotations

import threading


class AllocationCounter:
    """Counts node allocations and releases per thread.

    Each thread bumps its own cell without synchronisation; :meth:`net`
    sums every cell ever created, so totals survive thread exit.
    """

    def __init__(self) -> None:
        self._local = threading.local()
        self._cells: list[list[int]] = []
        self._register = threading.Lock()

    def _cell(self) -> list[int]:
        try:
            return self._local.cell
        except AttributeError:
            cell = [0, 0]
            with self._register:
                self._cells.append(cell)
            self._local.cell = cell
            return cell

    def allocated(self) -> None:
        self._cell()[0] += 1

    def released(self) -> None:
        self._cell()[1] += 1

    @property
    def allocations(self) -> int:
        with self._register:
            return sum(c[0] for c in self._cells)

    @property
    def releases(self) -> int:
        with self._register:
            return sum(c[1] for c in self._cells)

    def net(self) -> int:
        with self._register:
            return sum(c[0] - c[1] for c in self._cells)
