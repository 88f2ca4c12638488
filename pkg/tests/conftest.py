import time

import pytest
from hypothesis import strategies as st

from partsemi.core import from_blocks


def _report_lines(config):
    if not hasattr(config, "_acceptance_lines"):
        config._acceptance_lines = []
    return config._acceptance_lines


@pytest.fixture
def criterion(request):
    """Record one acceptance line: ``criterion(k, title)`` returns a reporter taking (ok, detail)."""
    lines = _report_lines(request.config)
    start = time.perf_counter()

    def begin(k, title):
        def report(ok, detail=""):
            elapsed = time.perf_counter() - start
            line = f"{'PASS' if ok else 'FAIL'} criterion {k:2d}: {title} ({elapsed:.1f}s) {detail}".rstrip()
            lines.append((k, line))
            print(line)

        return report

    return begin


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = _report_lines(config)
    if lines:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(lines):
            terminalreporter.write_line(line)


# -- hypothesis strategies ------------------------------------------------


@st.composite
def bipartitions(draw, min_n=1, max_n=6):
    """Any element of C_n: block labels drawn per signed point."""
    n = draw(st.integers(min_n, max_n))
    pts = list(range(1, n + 1)) + [-t for t in range(1, n + 1)]
    labels = draw(st.lists(st.integers(0, 2 * n - 1), min_size=2 * n, max_size=2 * n))
    blocks = {}
    for v, lab in zip(pts, labels):
        blocks.setdefault(lab, []).append(v)
    return from_blocks(list(blocks.values()), n)


@st.composite
def pistar_elements(draw, min_n=1, max_n=6, n=None):
    """Elements of PI*_n: a random bipartition with every non-line block broken into points."""
    if n is None:
        n = draw(st.integers(min_n, max_n))
    a = draw(bipartitions(min_n=n, max_n=n))
    blocks = []
    for blk in a.blocks:
        if blk[0] > 0 and blk[-1] < 0:
            blocks.append(list(blk))
        else:
            blocks += [[v] for v in blk]
    return from_blocks(blocks, n)
