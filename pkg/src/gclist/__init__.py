"""Concurrent ordered sets that recycle removed nodes through a pool."""

from gclist.base import MAX_KEY, MIN_KEY, KeyDomainError, Window
from gclist.baselines import HoHList, LeakyLazyList
from gclist.gclb_list import GCLBList, gclb_lb, gclb_lf
from gclist.gclf_list import GCLFList, gclf_lb, gclf_lf
from gclist.pool import LockFreeQueuePool, TwoLockQueuePool
from gclist.stamped_ref import AtomicStampedReference, StampedSnapshot

IMPLEMENTATIONS = {
    "gclb-lb": gclb_lb,
    "gclb-lf": gclb_lf,
    "gclf-lb": gclf_lb,
    "gclf-lf": gclf_lf,
    "hoh": HoHList,
    "lazy-leaky": LeakyLazyList,
}

__all__ = [
    "AtomicStampedReference",
    "GCLBList",
    "GCLFList",
    "HoHList",
    "IMPLEMENTATIONS",
    "KeyDomainError",
    "LeakyLazyList",
    "LockFreeQueuePool",
    "MAX_KEY",
    "MIN_KEY",
    "StampedSnapshot",
    "TwoLockQueuePool",
    "Window",
]
