import sys

import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def brute_partial_trace(m, n, keep):
    """Reference reduction by explicit index summation over the traced qubits."""
    keep = sorted(keep)
    gone = [q for q in range(1, n + 1) if q not in keep]
    k = len(keep)
    out = np.zeros((1 << k, 1 << k), dtype=complex)
    for r in range(1 << k):
        for c in range(1 << k):
            for g in range(1 << len(gone)):
                def full(sub):
                    bits = [0] * n
                    for pos, q in enumerate(keep):
                        bits[q - 1] = (sub >> (k - 1 - pos)) & 1
                    for pos, q in enumerate(gone):
                        bits[q - 1] = (g >> (len(gone) - 1 - pos)) & 1
                    return int("".join(map(str, bits)), 2)
                out[r, c] += m[full(r), full(c)]
    return out


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    if mod is None or not getattr(mod, "RESULTS", None):
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
