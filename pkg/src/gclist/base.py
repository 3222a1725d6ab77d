"""Pieces shared by every set implementation."""

from __future__ import annotations

from typing import Any, NamedTuple, Protocol

# Sentinel keys. Public operations reject both bounds.
MIN_KEY = -(2**63)
MAX_KEY = 2**63 - 1


class KeyDomainError(ValueError):
    pass


def check_key(key: int) -> None:
    if not MIN_KEY < key < MAX_KEY:
        raise KeyDomainError(f"key {key} outside the open interval ({MIN_KEY}, {MAX_KEY})")


class Window(NamedTuple):
    pred: Any
    curr: Any
    pred_stamp: int
    curr_stamp: int


class ConcurrentSet(Protocol):
    name: str

    def add(self, key: int) -> bool: ...

    def remove(self, key: int) -> bool: ...

    def contains(self, key: int) -> bool: ...

    def keys(self) -> list[int]: ...

    def alloc_net(self) -> int: ...
