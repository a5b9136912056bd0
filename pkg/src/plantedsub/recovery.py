"""Estimators of the planted vertex set.

``exhaustive_recover`` returns a copy of the pattern whenever one exists;
``max_degree_recover`` is the cheap heuristic that keeps the k vertices of
largest degree in G or in its complement.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import InvalidArgument
from .graphcore import (
    DEFAULT_NODE_BUDGET,
    Graph,
    are_isomorphic,
    first_induced_copy,
    induced_subgraph,
)


@dataclass(frozen=True)
class RecoveryResult:
    found: bool
    vertices: Optional[tuple] = None
    exact_match: Optional[bool] = None  # None when no truth was supplied

    def to_json(self) -> dict:
        return {
            "found": self.found,
            "vertices": None if self.vertices is None else list(self.vertices),
            "exact_match": self.exact_match,
        }


def _match(vertices, truth):
    if truth is None or vertices is None:
        return None if truth is None else False
    # vertex sets, not maps: automorphisms make the map unidentifiable
    return set(vertices) == set(int(v) for v in truth)


def exhaustive_recover(
    g: Graph, pattern: Graph, truth=None, budget: int = DEFAULT_NODE_BUDGET
) -> RecoveryResult:
    """Lexicographically smallest vertex set of ``g`` inducing ``pattern``.

    Raises ``ResourceLimitError`` when the search exceeds ``budget`` nodes.
    """
    copy = first_induced_copy(g, pattern, budget=budget)
    if copy is None:
        return RecoveryResult(False, None, _match(None, truth))
    verts = tuple(int(v) for v in copy)
    return RecoveryResult(True, verts, _match(verts, truth))


def degree_orientation(k: int, q: float, edge_count: int) -> str:
    """"G" if the planted block raises degrees above the null, else "G^c"."""
    return "G" if 2 * edge_count >= q * k * (k - 1) else "G^c"


def max_degree_recover(
    g: Graph, k: int, q: float, pattern: Optional[Graph] = None, truth=None
) -> RecoveryResult:
    """Top-k degree vertices, in G or in G^c.

    The side is picked by comparing the planted average degree 2e/k with the
    null expectation q(k-1); without a pattern G is used.  Ties go to the
    smaller vertex index.  ``found`` reports whether the chosen set induces
    ``pattern`` (always true when no pattern is given).
    """
    if not (1 <= k <= g.n):
        raise InvalidArgument(f"k must lie in [1, {g.n}], got {k}")
    if pattern is not None and pattern.n != k:
        raise InvalidArgument("pattern order differs from k")
    side = "G" if pattern is None else degree_orientation(k, q, pattern.edge_count)
    deg = g.degrees()
    if side == "G^c":
        deg = (g.n - 1) - deg
    # stable sort on -deg keeps index order among ties
    top = np.argsort(-deg, kind="stable")[:k]
    verts = tuple(sorted(int(v) for v in top))
    found = pattern is None or are_isomorphic(induced_subgraph(g, verts), pattern)
    return RecoveryResult(found, verts, _match(verts, truth))
