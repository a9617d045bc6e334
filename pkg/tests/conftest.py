from functools import lru_cache
from types import SimpleNamespace

import pytest
from hypothesis import strategies as st

from sidonpolar.fields import extension_for_q
from sidonpolar.graphs import Graph, cayley_sum_graph, er_graph
from sidonpolar.sidon import bose_chowla

DESK_Q = [2, 3, 4, 5, 7, 8, 9, 11, 13, 16]

ACCEPTANCE_LINES: list[str] = []


@lru_cache(maxsize=None)
def bundle(q: int):
    """Field, Sidon set and Cayley graph for the default theta at q (shared across tests)."""
    ctx = extension_for_q(q)
    S = bose_chowla(ctx)
    G, meta = cayley_sum_graph(S)
    return SimpleNamespace(q=q, ctx=ctx, S=S, G=G, meta=meta)


@lru_cache(maxsize=None)
def er(q: int, form: str = "dot") -> Graph:
    return er_graph(bundle(q).ctx.base, form)


@st.composite
def graphs(draw, max_n: int = 10, min_n: int = 0):
    n = draw(st.integers(min_value=min_n, max_value=max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return Graph.from_edges(n, chosen)


def cycle(n: int) -> Graph:
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


@pytest.fixture(params=DESK_Q, ids=lambda q: f"q{q}")
def desk(request):
    return bundle(request.param)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
