import numpy as np
import pytest

from spinotto.spectra import SpinMagnitude

REF = dict(B1=5.0, B2=3.0, T1=6.0, T2=3.0)
LOCAL = dict(B1=5.0, B2=3.0, T1=4.0, T2=2.0)
SPIN_HALF = SpinMagnitude(1)
SPIN_ONE = SpinMagnitude(2)
ALL_SPINS = [SpinMagnitude(t) for t in range(1, 6)]


def draw_cycle(rng, twice_s, coupled=True, engine=False):
    """Random (B1, B2, T1, T2, J) with B1 > B2 > 0, T1 > T2 > 0 and J below the crossing bound.

    engine=True also enforces B2/T2 >= B1/T1.
    """
    while True:
        B1 = rng.uniform(0.5, 10.0)
        B2 = B1 * rng.uniform(0.05, 0.95)
        T1 = rng.uniform(0.3, 20.0)
        T2 = T1 * rng.uniform(0.05, 0.95)
        if engine and B2 / T2 < B1 / T1:
            continue
        J = rng.uniform(0.0, 0.99) * B2 / (2 * (twice_s + 1)) if coupled else 0.0
        return B1, B2, T1, T2, J


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


# Acceptance criteria record one verdict each; the summary prints at the end of the run.
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE, key=lambda k: int(k.split()[0])):
        ok, detail = ACCEPTANCE[key]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {key}: {detail}")
