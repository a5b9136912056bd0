import math
from collections import Counter

import numpy as np
import pytest

from plantedsub.ensembles import (
    PlantParams,
    plant,
    random_injection,
    sample,
    sample_null,
    sample_subgraph_ensemble,
    sample_union_ensemble,
    trial_rng,
)
from plantedsub.errors import InvalidArgument
from plantedsub.exact import all_graphs, planted_probability
from plantedsub.graphcore import (
    Graph,
    are_isomorphic,
    complement,
    complete_graph,
    cycle_graph,
    induced_subgraph,
    path_graph,
    star_graph,
    structure_complement,
)

from conftest import FIGURE_EMBEDDING


def test_null_sampler_is_deterministic_per_seed():
    assert sample_null(5, 0.37, 11).graph == sample_null(5, 0.37, 11).graph
    assert sample_null(40, 0.5, 1).graph != sample_null(40, 0.5, 2).graph


@pytest.mark.parametrize("q", [0.0, 1.0, -0.1, 1.5])
def test_q_outside_open_interval_is_rejected(q):
    with pytest.raises(InvalidArgument):
        sample_null(5, q, 0)
    with pytest.raises(InvalidArgument):
        PlantParams(5, q, complete_graph(3))


def test_k_larger_than_n_is_rejected():
    with pytest.raises(InvalidArgument):
        PlantParams(3, 0.5, complete_graph(4))
    with pytest.raises(InvalidArgument):
        random_injection(3, 4, 0)


def test_null_density_concentrates():
    n, q = 1000, 0.5
    g = sample_null(n, q, 7).graph
    pairs = math.comb(n, 2)
    sigma = math.sqrt(q * (1 - q) / pairs)
    assert abs(g.edge_count / pairs - q) < 3 * sigma


def test_trial_streams_are_independent_of_order():
    a = [trial_rng(5, 0, t, 1).random() for t in range(4)]
    b = [trial_rng(5, 0, t, 1).random() for t in reversed(range(4))][::-1]
    assert a == b
    assert trial_rng(5, 0, 0, 0).random() != trial_rng(5, 0, 0, 1).random()


def test_injection_is_uniform_over_small_range():
    counts = Counter(tuple(random_injection(4, 2, trial_rng(3, i))) for i in range(24000))
    assert len(counts) == 12
    # each of the 12 injections has probability 1/12
    sigma = math.sqrt(24000 * (1 / 12) * (11 / 12))
    assert all(abs(c - 2000) < 4.5 * sigma for c in counts.values())


# --- subgraph ensemble ---------------------------------------------------------------


@pytest.mark.parametrize("pattern", [complete_graph(5), star_graph(6), path_graph(7), cycle_graph(5)])
def test_planted_copy_is_exact(pattern):
    params = PlantParams(30, 0.4, pattern, "subgraph")
    for t in range(200):
        s = sample_subgraph_ensemble(params, trial_rng(1, t))
        assert induced_subgraph(s.graph, s.embedding) == pattern


def test_n_equal_k_gives_a_relabelling():
    pattern = path_graph(5)
    s = sample_subgraph_ensemble(PlantParams(5, 0.5, pattern), trial_rng(2))
    assert are_isomorphic(s.graph, pattern)


def test_complement_of_planted_star_carries_triangle():
    star = star_graph(4)
    s = sample_subgraph_ensemble(PlantParams(12, 0.999, star), trial_rng(4))
    c = complement(s.graph)
    assert induced_subgraph(c, s.embedding) == structure_complement(star)
    assert are_isomorphic(structure_complement(star), Graph(4, [(1, 2), (1, 3), (2, 3)]))


def test_complement_density_outside_plant():
    n, q = 40, 0.3
    pattern = complete_graph(6)
    outside_edges, outside_pairs = 0, 0
    for t in range(200):
        s = sample_subgraph_ensemble(PlantParams(n, q, pattern), trial_rng(8, t))
        c = complement(s.graph).adjacency
        inside = np.zeros((n, n), dtype=bool)
        inside[np.ix_(s.embedding, s.embedding)] = True
        mask = np.triu(~inside, 1)
        outside_edges += int(c[mask].sum())
        outside_pairs += int(mask.sum())
    p = 1 - q
    sigma = math.sqrt(p * (1 - p) / outside_pairs)
    assert abs(outside_edges / outside_pairs - p) < 3 * sigma


def test_subgraph_planting_reproduces_the_figure(figure_base, figure_subgraph, figure_union):
    assert plant(figure_base, star_graph(4), FIGURE_EMBEDDING, "subgraph") == figure_subgraph
    assert plant(figure_base, star_graph(4), FIGURE_EMBEDDING, "union") == figure_union
    # the union keeps the base edge between two leaves, so the star is not induced
    assert figure_union.has_edge(1, 4)
    assert induced_subgraph(figure_union, FIGURE_EMBEDDING) != star_graph(4)


# --- union ensemble -------------------------------------------------------------------------


def test_union_contains_subgraph_edges_under_shared_randomness():
    params = PlantParams(25, 0.3, path_graph(6), "union")
    for t in range(100):
        u = sample_union_ensemble(params, trial_rng(9, t))
        s = sample_subgraph_ensemble(params, trial_rng(9, t))
        assert u.embedding == s.embedding
        emb = s.embedding
        planted = {(min(emb[i], emb[j]), max(emb[i], emb[j])) for i, j in path_graph(6).edges}
        assert planted <= u.graph.edges
        # off the planted block the two samples share the same base graph
        assert (s.graph.edges - u.graph.edges) == set()


def test_union_with_tiny_q_is_mostly_the_pattern():
    s = sample_union_ensemble(PlantParams(30, 1e-4, star_graph(5), "union"), trial_rng(0))
    assert induced_subgraph(s.graph, s.embedding) == star_graph(5)
    assert s.graph.edge_count <= 4 + 2


def test_union_violates_induced_copy_at_expected_rate():
    q, trials = 0.5, 4000
    params = PlantParams(10, q, star_graph(4), "union")
    bad = sum(
        induced_subgraph(s.graph, s.embedding) != star_graph(4)
        for s in (sample(params, trial_rng(12, t)) for t in range(trials))
    )
    p = 1 - (1 - q) ** 3
    sigma = math.sqrt(p * (1 - p) / trials)
    assert abs(bad / trials - p) < 3 * sigma


def test_small_n_distribution_matches_enumeration():
    n, q = 3, 0.3
    edge = Graph(2, [(0, 1)])
    params = PlantParams(n, q, edge)
    trials = 200_000
    counts = Counter(sample(params, trial_rng(21, t)).graph.edges for t in range(trials))
    tv = 0.5 * sum(
        abs(counts.get(g.edges, 0) / trials - planted_probability(g, edge, q))
        for g in all_graphs(n)
    )
    assert tv < 0.01


def test_exact_distribution_sums_to_one():
    for pattern in (path_graph(3), complete_graph(3)):
        for ens in ("subgraph", "union"):
            total = sum(planted_probability(g, pattern, 0.35, ens) for g in all_graphs(4))
            assert total == pytest.approx(1.0, abs=1e-12)


def test_sample_dispatches_on_ensemble_name():
    p = PlantParams(8, 0.5, path_graph(3), "null", seed=3)
    s = sample(p)
    assert s.embedding is None
    assert s.graph == sample_null(8, 0.5, 3).graph
    assert len(sample(PlantParams(8, 0.5, path_graph(3), seed=3)).embedding) == 3
