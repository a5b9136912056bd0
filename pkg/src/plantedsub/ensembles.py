"""Seeded samplers for G(n, q) and the two planting ensembles.

Every sampler accepts either an integer seed or a ready ``numpy`` Generator.
Per-trial streams come from :func:`trial_rng`, which feeds the master seed
and the trial coordinates into a ``SeedSequence`` driving a Philox
(counter-based) bit generator, so a trial's graph never depends on which
worker produced it or in what order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import InvalidArgument
from .graphcore import Graph, VertexEmbedding

ENSEMBLES = ("null", "subgraph", "union")


def trial_rng(master_seed: int, *coords: int) -> np.random.Generator:
    """Independent generator for the stream addressed by ``(master_seed, *coords)``."""
    entropy = [int(master_seed) & 0xFFFFFFFFFFFFFFFF] + [int(c) for c in coords]
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(entropy)))


def _as_rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return trial_rng(seed)


def _check_q(q):
    if not (0.0 < q < 1.0):
        raise InvalidArgument(f"edge density q must lie in (0, 1), got {q}")


@dataclass(frozen=True)
class PlantParams:
    n: int
    q: float
    pattern: Optional[Graph] = None
    ensemble: str = "subgraph"
    seed: int = 0

    def __post_init__(self):
        _check_q(self.q)
        if self.ensemble not in ENSEMBLES:
            raise InvalidArgument(f"unknown ensemble {self.ensemble!r}")
        if self.n < 0:
            raise InvalidArgument(f"n must be non-negative, got {self.n}")
        if self.ensemble != "null":
            if self.pattern is None:
                raise InvalidArgument(f"{self.ensemble} ensemble needs a pattern")
            if self.pattern.n > self.n:
                raise InvalidArgument(f"pattern has {self.pattern.n} vertices > n={self.n}")

    @property
    def k(self) -> int:
        return 0 if self.pattern is None else self.pattern.n


@dataclass(frozen=True)
class PlantedSample:
    graph: Graph
    embedding: Optional[VertexEmbedding] = None


def _er_adjacency(n, q, rng) -> np.ndarray:
    iu = np.triu_indices(n, 1)
    adj = np.zeros((n, n), dtype=bool)
    adj[iu] = rng.random(iu[0].size) < q
    return adj | adj.T


def random_injection(n: int, k: int, rng) -> VertexEmbedding:
    """Uniform injective map [k] -> [n] by a partial Fisher-Yates shuffle."""
    if k > n:
        raise InvalidArgument(f"cannot inject {k} vertices into {n}")
    rng = _as_rng(rng)
    pool = np.arange(n)
    for i in range(k):
        j = int(rng.integers(i, n))
        pool[i], pool[j] = pool[j], pool[i]
    return VertexEmbedding(pool[:k].tolist())


def plant(base: Graph, pattern: Graph, embedding, ensemble: str = "subgraph") -> Graph:
    """Plant ``pattern`` on the vertices ``embedding`` of ``base``.

    ``subgraph`` overwrites every pair among the planted vertices with the
    pattern (so it appears induced); ``union`` only adds the pattern's edges.
    """
    emb = np.asarray(embedding, dtype=np.intp)
    if len(emb) != pattern.n:
        raise InvalidArgument("embedding length differs from the pattern's vertex count")
    adj = base.adjacency.copy()
    block = np.ix_(emb, emb)
    if ensemble == "subgraph":
        adj[block] = pattern.adjacency
    elif ensemble == "union":
        adj[block] |= pattern.adjacency
    else:
        raise InvalidArgument(f"cannot plant with ensemble {ensemble!r}")
    return Graph.from_adjacency(adj, check=False)


def sample_null(n: int, q: float, seed) -> PlantedSample:
    _check_q(q)
    rng = _as_rng(seed)
    return PlantedSample(Graph.from_adjacency(_er_adjacency(n, q, rng), check=False))


def _sample_planted(params: PlantParams, rng, ensemble) -> PlantedSample:
    if params.pattern is None:
        raise InvalidArgument("planting needs a pattern")
    if params.pattern.n > params.n:
        raise InvalidArgument(f"k={params.pattern.n} exceeds n={params.n}")
    rng = _as_rng(rng)
    # embedding first, then the base: union and subgraph samplers fed the same
    # stream share both, which is what the coupling checks rely on
    emb = random_injection(params.n, params.pattern.n, rng)
    base = Graph.from_adjacency(_er_adjacency(params.n, params.q, rng), check=False)
    return PlantedSample(plant(base, params.pattern, emb, ensemble), emb)


def sample_subgraph_ensemble(params: PlantParams, rng=None) -> PlantedSample:
    return _sample_planted(params, params.seed if rng is None else rng, "subgraph")


def sample_union_ensemble(params: PlantParams, rng=None) -> PlantedSample:
    return _sample_planted(params, params.seed if rng is None else rng, "union")


def sample(params: PlantParams, rng=None) -> PlantedSample:
    """Draw one graph from the ensemble named in ``params``."""
    src = params.seed if rng is None else rng
    if params.ensemble == "null":
        return sample_null(params.n, params.q, src)
    if params.ensemble == "subgraph":
        return sample_subgraph_ensemble(params, src)
    return sample_union_ensemble(params, src)
