import sys

import pytest

from gclist import IMPLEMENTATIONS

GC_IMPLS = ["gclb-lb", "gclb-lf", "gclf-lb", "gclf-lf"]


@pytest.fixture(params=list(IMPLEMENTATIONS))
def impl(request):
    return request.param


@pytest.fixture(params=GC_IMPLS)
def gc_impl(request):
    return request.param


@pytest.fixture
def fine_switching():
    """Preempt threads every microsecond so races actually interleave."""
    old = sys.getswitchinterval()
    sys.setswitchinterval(1e-6)
    yield
    sys.setswitchinterval(old)


def pytest_terminal_summary(terminalreporter):
    from report import LINES

    if LINES:
        terminalreporter.section("acceptance")
        for line in LINES:
            terminalreporter.write_line(line)
