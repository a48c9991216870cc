import numpy as np
import pytest

from superopt.symbols import RationalEntry, SymbolSpec


def random_entry(rng, max_pole=0.8):
    """Random proper-plus-polynomial rational entry with 1-2 poles inside ``|z| <= max_pole``."""
    npoles = int(rng.integers(1, 3))
    radius = max_pole * np.sqrt(rng.uniform(0, 1, npoles))
    poles = radius * np.exp(2j * np.pi * rng.uniform(size=npoles))
    den = np.poly(poles)[::-1]
    num = rng.normal(size=npoles + 2) + 1j * rng.normal(size=npoles + 2)
    return RationalEntry.ratio(dict(enumerate(num)), dict(enumerate(den)))


def random_symbol(rng, m, n, max_pole=0.8):
    return SymbolSpec(m, n, tuple(tuple(random_entry(rng, max_pole) for _ in range(n))
                                  for _ in range(m)))


def random_outer_poly(rng, min_root=1.2):
    """Coefficients (ascending) of a polynomial with all roots outside ``|z| = min_root``."""
    deg = int(rng.integers(1, 5))
    radius = min_root + rng.exponential(1.0, deg)
    roots = radius * np.exp(2j * np.pi * rng.uniform(size=deg))
    scale = rng.uniform(0.5, 2.0) * np.exp(2j * np.pi * rng.uniform())
    return scale * np.poly(roots)[::-1]


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
