import numpy as np
from hypothesis import strategies as st


def ball_point(rng, n, rmax=0.9):
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return v / np.linalg.norm(v) * rmax * rng.uniform() ** (1.0 / (2 * n))


@st.composite
def ball_points(draw, n=None, rmax=0.9):
    """Hypothesis strategy for a point of the open ball of radius rmax in C^n."""
    if n is None:
        n = draw(st.integers(2, 4))
    seed = draw(st.integers(0, 2**32 - 1))
    return ball_point(np.random.default_rng(seed), n, rmax)


@st.composite
def point_pairs(draw, rmax=0.9):
    n = draw(st.integers(2, 4))
    return draw(ball_points(n, rmax)), draw(ball_points(n, rmax))


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
