import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from plantedsub.detectors import (
    SpectralConfig,
    centered_adjacency,
    degree_condition,
    degree_condition_sqrt_form,
    planted_support_forms,
    scan_test,
    spectral_guarantee_value,
    spectral_norm,
    spectral_norm_info,
    spectral_statistic,
    spectral_test,
    spectral_threshold,
    total_degree_risk_bound,
    total_degree_test,
)
from plantedsub.ensembles import PlantParams, sample, sample_null, trial_rng
from plantedsub.errors import InvalidArgument
from plantedsub.graphcore import (
    Graph,
    complement,
    complete_graph,
    empty_graph,
    path_graph,
    relabel,
    star_graph,
    structure_complement,
)
from plantedsub.structstats import dh_statistic


# --- scan test -----------------------------------------------------------------------


def test_scan_finds_planted_k20():
    s = sample(PlantParams(60, 0.5, complete_graph(20)), trial_rng(0))
    v = scan_test(s.graph, complete_graph(20), 60, 0.5)
    assert v.decision == "H1" and v.statistic >= 20 and v.threshold == 20


def test_scan_on_empty_graph_with_single_edge_pattern():
    v = scan_test(empty_graph(30), Graph(2, [(0, 1)]), 30, 0.01)
    assert v.decision == "H0"


def test_scan_never_misses_under_h1():
    for pattern in (complete_graph(6), path_graph(5), star_graph(5)):
        for t in range(30):
            s = sample(PlantParams(25, 0.3, pattern), trial_rng(3, t))
            assert scan_test(s.graph, pattern, 25, 0.3).rejects


def test_scan_type1_below_markov_bound():
    n, q, k, trials = 30, 0.3, 6, 400
    bound = math.exp(dh_statistic(complete_graph(k), n, q))
    hits = sum(
        scan_test(sample_null(n, q, trial_rng(4, t)).graph, complete_graph(k), n, q).rejects
        for t in range(trials)
    )
    rate = hits / trials
    assert rate <= bound + 3 * math.sqrt(max(bound * (1 - bound), 1e-4) / trials)
    v = scan_test(sample_null(n, q, 0).graph, complete_graph(k), n, q)
    assert v.detail["type1_markov_bound"] == pytest.approx(bound)


def test_scan_handles_edgeless_pattern_through_complement():
    s = sample(PlantParams(30, 0.5, empty_graph(12)), trial_rng(5))
    v = scan_test(s.graph, empty_graph(12), 30, 0.5)
    assert v.rejects and v.detail["complemented"]


# --- total degree test ---------------------------------------------------------------------


def test_degree_threshold_value():
    v = total_degree_test(empty_graph(100), complete_graph(10), 100, 0.5)
    assert v.threshold == pytest.approx(2486.25)
    assert v.decision == "H0"


def test_degree_orientation_flips_for_sparse_pattern():
    g = empty_graph(50)
    v = total_degree_test(g, empty_graph(10), 50, 0.25)
    assert v.detail["gap"] < 0 and v.detail["orientation"] == "W < W*"
    assert v.decision == "H1"  # no edges at all is below the threshold


def test_degree_zero_gap_is_degenerate():
    # 2 edges on 4 vertices against q = 1/3: e - q C(4,2) = 0
    pattern = Graph(4, [(0, 1), (2, 3)])
    v = total_degree_test(sample_null(20, 1 / 3, 1).graph, pattern, 20, 1 / 3)
    assert v.degenerate and v.decision == "H0" and "reason" in v.detail


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([0.2, 0.5, 0.7]))
def test_degree_verdict_is_relabelling_invariant(seed, q):
    g = sample_null(20, q, seed).graph
    perm = np.random.default_rng(seed).permutation(20).tolist()
    a = total_degree_test(g, complete_graph(6), 20, q)
    b = total_degree_test(relabel(g, perm), complete_graph(6), 20, q)
    assert (a.decision, a.statistic, a.threshold) == (b.decision, b.statistic, b.threshold)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([0.2, 0.4, 0.6, 0.8]))
def test_degree_verdict_mirrors_under_complement(seed, q):
    pattern = star_graph(6)
    g = sample(PlantParams(25, q, pattern), trial_rng(seed)).graph
    a = total_degree_test(g, pattern, 25, q)
    b = total_degree_test(complement(g), structure_complement(pattern), 25, 1 - q)
    assert a.decision == b.decision


def test_risk_bound_examples():
    # e = q C(k,2): gap zero, bound vacuous
    assert total_degree_risk_bound(Graph(4, [(0, 1), (2, 3)]), 20, 1 / 3) == pytest.approx(2.0)
    expected = 2 * math.exp(-(22.5**2) / 8 / (2475 + 22.5))
    assert total_degree_risk_bound(complete_graph(10), 100, 0.5) == pytest.approx(expected)
    assert expected == pytest.approx(1.95, abs=0.01)


def test_degree_condition_is_risk_bound_below_delta():
    n, q, delta = 400, 0.5, 0.05
    for k in range(10, 200, 7):
        holds = degree_condition(complete_graph(k), n, q, delta) >= 1
        assert holds == (total_degree_risk_bound(complete_graph(k), n, q) <= delta + 1e-15)


def test_sqrt_form_holds_far_earlier_than_the_bound():
    n, q, delta = 400, 0.5, 0.05
    k = 40
    assert degree_condition_sqrt_form(complete_graph(k), n, q, delta) >= 1
    assert total_degree_risk_bound(complete_graph(k), n, q) > 0.5


# --- spectral pieces ------------------------------------------------------------------------


def test_spectral_norm_small_examples():
    assert spectral_norm(np.array([[0.0, 1.0], [1.0, 0.0]])) == pytest.approx(1.0, abs=1e-10)
    assert spectral_norm(centered_adjacency(complete_graph(12), 0.0)) == pytest.approx(11.0, abs=1e-9)
    assert spectral_norm(np.zeros((3, 3))) == 0.0
    # dominant eigenvalue negative: diag(1, -3)
    assert spectral_norm(np.diag([1.0, -3.0])) == pytest.approx(3.0, abs=1e-10)
    # +-2 tie in magnitude
    assert spectral_norm(np.diag([2.0, -2.0, 0.5])) == pytest.approx(2.0, abs=1e-10)


def test_spectral_norm_rejects_non_symmetric():
    with pytest.raises(InvalidArgument):
        spectral_norm(np.array([[0.0, 1.0], [0.0, 0.0]]))


@pytest.mark.parametrize("seed", range(20))
def test_spectral_norm_matches_dense_eigensolver(seed):
    rng = np.random.default_rng(seed)
    m = rng.standard_normal((30, 30))
    m = m + m.T
    info = spectral_norm_info(m, tol=1e-14, max_iter=200_000)
    assert info.converged
    assert info.value == pytest.approx(np.abs(np.linalg.eigvalsh(m)).max(), abs=1e-8)
    for _ in range(100):
        u = rng.standard_normal(30)
        u /= np.linalg.norm(u)
        assert info.value >= abs(u @ m @ u) - 1e-12


def test_statistic_equals_twice_centred_norm():
    g = sample_null(40, 0.3, 2).graph
    a = centered_adjacency(g, 0.3)
    ac = centered_adjacency(complement(g), 0.7)
    np.testing.assert_allclose(ac, -a)
    direct = np.abs(np.linalg.eigvalsh(a)).max() + np.abs(np.linalg.eigvalsh(ac)).max()
    stat, _ = spectral_statistic(g, 0.3, SpectralConfig(method="dense"))
    assert stat == pytest.approx(direct, rel=1e-12)


def test_threshold_undefined_at_moderate_n():
    assert spectral_threshold(10**4, 0.5, 0.1) is None
    g = sample_null(50, 0.5, 0).graph
    v = spectral_test(g, complete_graph(5), 50, 0.5)
    assert v.degenerate and v.decision == "H0" and "threshold undefined" in v.detail["reason"]


def test_threshold_formula_where_defined():
    n, q, delta = 10**8, 0.5, 0.05
    s = math.sqrt(q * (1 - q) * n)
    lg = math.log(4 * n / delta**2)
    expected = 4 * s + 2 * s * lg / ((q * (1 - q) * n) ** (1 / 6) - lg / 2)
    assert spectral_threshold(n, q, delta) == pytest.approx(expected)


def test_guarantee_value_is_structure_free_at_half():
    for pattern in (complete_graph(9), path_graph(9), empty_graph(9)):
        assert spectral_guarantee_value(pattern, 0.5) == pytest.approx(4.0)


def test_spectral_test_with_override_threshold():
    cfg = SpectralConfig(threshold=30.0, method="dense")
    s = sample(PlantParams(80, 0.5, complete_graph(40)), trial_rng(1))
    assert spectral_test(s.graph, complete_graph(40), 80, 0.5, cfg).rejects
    assert not spectral_test(sample_null(80, 0.5, 1).graph, complete_graph(40), 80, 0.5, cfg).rejects


def test_spectral_config_validation():
    with pytest.raises(InvalidArgument):
        SpectralConfig(delta=1.0)
    with pytest.raises(InvalidArgument):
        SpectralConfig(tol=0.0)


@pytest.mark.parametrize("pattern", [complete_graph(8), star_graph(8), path_graph(8), empty_graph(8)])
@pytest.mark.parametrize("q", [0.3, 0.5, 0.7])
def test_planted_support_forms(pattern, q):
    k = pattern.n
    for t in range(10):
        s = sample(PlantParams(40, q, pattern), trial_rng(7, t))
        forms = planted_support_forms(s.graph, s.embedding, q)
        assert forms["uncentered_times_k"] == k * (k - 1)
        # centred forms at the planted vector: 2|e - q C(k,2)| * 2/k
        expected = 4 * abs(pattern.edge_count - q * math.comb(k, 2)) / k
        assert forms["centered"] == pytest.approx(expected, abs=1e-9)
        x = np.zeros(40)
        x[list(s.embedding)] = 1 / math.sqrt(k)
        a = centered_adjacency(s.graph, q)
        ac = centered_adjacency(complement(s.graph), 1 - q)
        assert forms["centered"] == pytest.approx(abs(x @ a @ x) + abs(x @ ac @ x), abs=1e-9)


def test_guarantee_value_is_not_the_planted_quadratic_form():
    # for a star at q = 0.3 the two quantities differ
    pattern, q = star_graph(10), 0.3
    k = pattern.n
    form = 4 * abs(pattern.edge_count - q * math.comb(k, 2)) / k
    assert form != pytest.approx(spectral_guarantee_value(pattern, q))
