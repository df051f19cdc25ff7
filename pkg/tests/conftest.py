import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from possfuse import Frame, MassFunction

settings.register_profile(
    "default",
    deadline=None,
    max_examples=200,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

FRAME3 = Frame.of_size(3)


def random_mass(rng, n, sparsity=0.0, empty=True, dogmatic=None, normalized=False):
    """Dirichlet mass vector with optional zeroed entries and structural constraints."""
    size = 1 << n
    m = rng.dirichlet(np.ones(size))
    if sparsity:
        m[rng.random(size) < sparsity] = 0.0
    if not empty or normalized:
        m[0] = 0.0
    if dogmatic is True:
        m[-1] = 0.0
    elif dogmatic is False:
        m[-1] += 0.05
    if m.sum() == 0.0:
        m[-1] = 1.0
    return m / m.sum()


@st.composite
def mass_functions(draw, n=None, sparsity=None, empty=True, dogmatic=None, normalized=False):
    n = draw(st.integers(2, 4)) if n is None else n
    seed = draw(st.integers(0, 2**32 - 1))
    sp = draw(st.sampled_from([0.0, 0.3, 0.6])) if sparsity is None else sparsity
    rng = np.random.default_rng(seed)
    return MassFunction(Frame.of_size(n), random_mass(rng, n, sp, empty, dogmatic, normalized))


@st.composite
def mass_pairs(draw, count=2, **kwargs):
    n = draw(st.integers(2, 4))
    return [draw(mass_functions(n=n, **kwargs)) for _ in range(count)]


@pytest.fixture
def frame3():
    return FRAME3


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def m3(values):
    return MassFunction(FRAME3, values)


# one summary line per acceptance criterion, filled in by test_acceptance.py
ACCEPTANCE: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[key])
