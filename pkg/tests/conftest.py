import sys
from itertools import combinations

import hypothesis.strategies as st
import pytest

from hypext import HyperGraph


@st.composite
def hypergraphs(draw, r=None, min_n=0, max_n=7):
    r = draw(st.integers(2, 3)) if r is None else r
    n = draw(st.integers(max(min_n, 0), max_n))
    pool = list(combinations(range(n), r))
    mask = draw(st.lists(st.booleans(), min_size=len(pool), max_size=len(pool)))
    return HyperGraph(r, n, tuple(e for e, keep in zip(pool, mask) if keep))


@st.composite
def graph_and_weights(draw, r=None, min_n=1, max_n=7):
    g = draw(hypergraphs(r=r, min_n=min_n, max_n=max_n))
    raw = draw(st.lists(st.floats(0.0, 1.0), min_size=g.n, max_size=g.n))
    total = sum(raw)
    if total == 0:
        raw = [1.0] * g.n
        total = float(g.n)
    return g, [x / total for x in raw]


@st.composite
def permutations_of(draw, n):
    return draw(st.permutations(list(range(n))))


@pytest.fixture
def T():
    """{abx, bcx} with a, b, c, x = 0, 1, 2, 3."""
    return HyperGraph(3, 4, ((0, 1, 3), (1, 2, 3)))


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
