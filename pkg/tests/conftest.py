import functools
import math

import numpy as np
import pytest

from gue_linstat import montecarlo
from gue_linstat.testfns import builtin


@functools.lru_cache(maxsize=None)
def _spectra(n, m, seed):
    return np.array([montecarlo.sample_spectrum(montecarlo.GueSampler(n, seed, stream=i))
                     for i in range(m)])


@pytest.fixture(scope="session")
def spectra():
    """Cached ``(m, n)`` array of sampled spectra, shared across test modules."""
    return _spectra


@pytest.fixture(scope="session")
def statistic(spectra):
    """``statistic(fid, n, m, seed)`` -> per-sample ``sum f(lambda)`` from cached spectra."""

    def run(fid, n, m, seed=0):
        f = builtin(fid)
        return np.array([math.fsum(f(row)) for row in spectra(n, m, seed)])

    return run


def pytest_terminal_summary(terminalreporter):
    lines = []
    for key in ("passed", "failed"):
        for rep in terminalreporter.stats.get(key, []):
            if getattr(rep, "when", None) == "call":
                lines.extend(v for k, v in rep.user_properties if k == "acceptance")
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
