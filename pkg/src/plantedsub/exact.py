"""Brute-force distributions over all labelled graphs on a handful of vertices.

These are the reference values the faster code is checked against: exact
P_H0 and P_H1 by enumerating every graph and every placement, the
likelihood ratio, and E_H0[L^2] both by full enumeration and by the
pair-of-placements expansion.  Everything here is exponential in C(n,2).
"""

from __future__ import annotations

import itertools
import math

import numpy as np

from .errors import InvalidArgument, ResourceLimitError
from .graphcore import Graph

MAX_ENUM_VERTICES = 6


def all_graphs(n: int):
    """Every labelled graph on ``n`` vertices, in bitmask order over sorted pairs."""
    if n > MAX_ENUM_VERTICES:
        raise ResourceLimitError(
            f"2^{math.comb(n, 2)} graphs on n={n} is beyond enumeration", bound=MAX_ENUM_VERTICES
        )
    pairs = list(itertools.combinations(range(n), 2))
    for bits in range(1 << len(pairs)):
        yield Graph(n, [p for b, p in enumerate(pairs) if (bits >> b) & 1])


def null_probability(g: Graph, q: float) -> float:
    e = g.edge_count
    return q**e * (1 - q) ** (math.comb(g.n, 2) - e)


def placements(n: int, k: int):
    """All injective maps [k] -> [n] (the uniform placement distribution)."""
    return itertools.permutations(range(n), k)


def _placement_probability(g: Graph, pattern: Graph, pi, q: float, ensemble: str) -> float:
    adj, padj = g.adjacency, pattern.adjacency
    k = pattern.n
    inside = set()
    p = 1.0
    for a in range(k):
        for b in range(a + 1, k):
            i, j = pi[a], pi[b]
            inside.add((min(i, j), max(i, j)))
            if padj[a, b]:
                if not adj[i, j]:
                    return 0.0
            elif ensemble == "subgraph":
                if adj[i, j]:
                    return 0.0
            else:  # union: non-pattern pairs stay random
                p *= q if adj[i, j] else 1 - q
    for i, j in itertools.combinations(range(g.n), 2):
        if (i, j) not in inside:
            p *= q if adj[i, j] else 1 - q
    return p


def planted_probability(g: Graph, pattern: Graph, q: float, ensemble: str = "subgraph") -> float:
    """P_H1(g): the average over placements of P(g | placement)."""
    if ensemble not in ("subgraph", "union"):
        raise InvalidArgument(f"unknown ensemble {ensemble!r}")
    maps = list(placements(g.n, pattern.n))
    return sum(_placement_probability(g, pattern, pi, q, ensemble) for pi in maps) / len(maps)


def likelihood_ratio(g: Graph, pattern: Graph, q: float) -> float:
    return planted_probability(g, pattern, q) / null_probability(g, q)


def second_moment_enumeration(n: int, pattern: Graph, q: float) -> float:
    """E_H0[L^2] = sum over all graphs of P_H1(g)^2 / P_H0(g)."""
    total = 0.0
    for g in all_graphs(n):
        p1 = planted_probability(g, pattern, q)
        if p1:
            total += p1 * p1 / null_probability(g, q)
    return total


def _placement_constraints(pattern: Graph, pi):
    out = {}
    padj = pattern.adjacency
    for a in range(pattern.n):
        for b in range(a + 1, pattern.n):
            i, j = pi[a], pi[b]
            out[(min(i, j), max(i, j))] = bool(padj[a, b])
    return out


def second_moment_pairs(n: int, pattern: Graph, q: float) -> float:
    """E_H0[L^2] as an average over pairs of placements.

    With L = mean over placements of 1{copy present}/P_H0(copy), each pair
    contributes P_H0(both copies)/(P_H0(copy)^2): zero if they disagree on a
    shared pair, else q^(-shared edges) (1-q)^(-shared non-edges).
    """
    maps = [_placement_constraints(pattern, pi) for pi in placements(n, pattern.n)]
    total = 0.0
    for c1 in maps:
        for c2 in maps:
            ratio = 1.0
            for key, val in c1.items():
                other = c2.get(key)
                if other is None:
                    continue
                if other != val:
                    ratio = 0.0
                    break
                ratio /= q if val else 1 - q
            total += ratio
    return total / len(maps) ** 2


def character_mean_enumeration(alpha, n: int, pattern: Graph, q: float) -> float:
    """E_H1[chi_alpha] by summing chi_alpha(g) P_H1(g) over every graph."""
    from .lowdegree import fourier_character

    total = 0.0
    for g in all_graphs(n):
        p1 = planted_probability(g, pattern, q)
        if p1:
            total += p1 * fourier_character(g, alpha, q)
    return total


def graph_table(n: int):
    """Adjacency bits of every graph on ``n`` vertices as a (2^m, m) array over sorted pairs."""
    m = math.comb(n, 2)
    if n > MAX_ENUM_VERTICES:
        raise ResourceLimitError(f"2^{m} graphs on n={n} is beyond enumeration", bound=MAX_ENUM_VERTICES)
    idx = np.arange(1 << m)
    return ((idx[:, None] >> np.arange(m)) & 1).astype(bool)


def null_gram(n: int, alphas, q: float) -> np.ndarray:
    """Matrix of E_H0[chi_a chi_b] over the given edge subsets, by full enumeration."""
    bits = graph_table(n).astype(float)
    pair_index = {p: c for c, p in enumerate(itertools.combinations(range(n), 2))}
    weights = np.prod(np.where(bits > 0, q, 1 - q), axis=1)
    scale = math.sqrt(q * (1 - q))
    chars = np.ones((bits.shape[0], len(alphas)))
    for col, alpha in enumerate(alphas):
        for pair in alpha:
            chars[:, col] *= (bits[:, pair_index[tuple(sorted(pair))]] - q) / scale
    return chars.T @ (weights[:, None] * chars)
