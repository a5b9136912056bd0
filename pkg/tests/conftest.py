import itertools

import pytest
from hypothesis import strategies as st

from plantedsub.graphcore import Graph


@st.composite
def graphs(draw, min_n=0, max_n=8):
    n = draw(st.integers(min_n, max_n))
    pairs = list(itertools.combinations(range(n), 2))
    bits = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph(n, [p for p, b in zip(pairs, bits) if b])


def to_nx(g):
    import networkx as nx

    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.sorted_edges())
    return h


# Labelled graphs from the two-panel planting figure, shifted to 0-indexing.
@pytest.fixture
def figure_base():
    return Graph(6, [(3, 4), (4, 0), (0, 1), (1, 4), (1, 2), (1, 3)])


@pytest.fixture
def figure_union():
    return Graph(6, [(3, 4), (4, 0), (0, 1), (1, 4), (1, 2), (1, 3), (5, 0)])


@pytest.fixture
def figure_subgraph():
    return Graph(6, [(3, 4), (4, 0), (0, 1), (1, 2), (1, 3), (5, 0)])


# star centred at 0 placed on (0, 1, 4, 5)
FIGURE_EMBEDDING = (0, 1, 4, 5)
