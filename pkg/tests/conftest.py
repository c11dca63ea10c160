import pytest

from dynsamp import FrequencyGrid, Kernel, Signal

PHI = (1 + 5**0.5) / 2


@pytest.fixture
def half():
    """Two-tap average a(0) = a(1) = 1/2."""
    return Kernel.from_taps({0: 0.5, 1: 0.5})


@pytest.fixture
def smooth3():
    """Symmetric smoother with symbol 0.75 + 0.25 cos(2 pi w)."""
    return Kernel.from_taps({-1: 0.125, 0: 0.75, 1: 0.125})


@pytest.fixture
def interleaved():
    """Support in 2Z, so the symbol has period 1/2."""
    return Kernel.from_taps({-2: 0.25, 0: 0.5, 2: 0.25})


@pytest.fixture
def ident():
    return Kernel.from_taps({0: 1.0})


@pytest.fixture
def grid1024():
    return FrequencyGrid(1024)


def random_signal(rng, width, start=0, complex_=True):
    v = rng.standard_normal(width)
    if complex_:
        v = v + 1j * rng.standard_normal(width)
    return Signal(start, v)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, _ in mod.CRITERIA:
        if name in mod.RESULTS:
            terminalreporter.write_line(mod._line(name, *mod.RESULTS[name]))
