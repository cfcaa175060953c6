import numpy as np
import pytest
from hypothesis import HealthCheck, settings, strategies as st

from cstarframes import golden
from cstarframes.algebra import AlgebraDescriptor
from cstarframes.measure import FrameMap, Interval, build_rule

settings.register_profile(
    "repo", max_examples=100, derandomize=True, deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("repo")

BLOCK_PATTERNS = [(1,), (2,), (3,), (1, 1), (2, 1), (1, 2, 1)]

descriptors = st.sampled_from(BLOCK_PATTERNS).map(AlgebraDescriptor)
seeds = st.integers(min_value=0, max_value=2**32 - 1)
ranks = st.integers(min_value=1, max_value=2)


def random_frame(desc, rank, rng, degree=None, space=None):
    """Random polynomial map with ``degree + 1 > rank`` coefficients; a frame almost surely."""
    degree = rank if degree is None else degree
    F = FrameMap.random_polynomial(desc, rank, degree, rng)
    rule = build_rule(space or Interval(0.0, 1.0), 2 * degree + 2)
    return F, rule


@pytest.fixture
def example():
    return golden.example_frame(), golden.example_dual(), golden.example_rule()


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def verdict():
    """Record one PASS/FAIL line per acceptance criterion."""
    def record(label: str, ok: bool, detail: str = ""):
        line = f"{'PASS' if ok else 'FAIL'}  {label}" + (f"  ({detail})" if detail else "")
        print(line)
        ACCEPTANCE_LINES.append(line)
        assert ok, line
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
