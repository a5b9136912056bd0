"""Statistics of a planted structure: densities, D_H, and detection barriers.

All D-like quantities are natural logarithms; they overflow doubles long
before the parameters get interesting.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .errors import DomainError, InvalidArgument, ResourceLimitError
from .graphcore import (
    Graph,
    automorphism_count,
    complete_graph,
    density,
    induced_subgraph,
    is_complete,
)

MAX_SWEEP_VERTICES = 20
REGIMES = ("impossible-leaning", "possible-leaning", "boundary")


def log_comb(n, k):
    if k < 0 or k > n:
        return -math.inf
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)


def _log_copies(v, e, aut, n, q):
    """log of C(n,v) v!/aut (q/(1-q))^e (1-q)^C(v,2)."""
    return (
        log_comb(n, v)
        + math.lgamma(v + 1)
        - math.log(aut)
        + e * (math.log(q) - math.log1p(-q))
        + math.comb(v, 2) * math.log1p(-q)
    )


def _check(q, v, n):
    if not (0.0 < q < 1.0):
        raise InvalidArgument(f"q must lie in (0, 1), got {q}")
    if v > n:
        raise InvalidArgument(f"pattern has {v} vertices but n={n}")


def expected_copy_count(pattern: Graph, n: int, q: float) -> float:
    """log E_{H0}[number of induced copies of ``pattern`` in G(n, q)]."""
    _check(q, pattern.n, n)
    return _log_copies(pattern.n, pattern.edge_count, automorphism_count(pattern), n, q)


def dh_statistic(h: Graph, n: int, q: float) -> float:
    """log D_H; only defined for graphs with at least one edge."""
    if h.edge_count == 0:
        raise DomainError("D_H is only defined for subgraphs with e(H) > 0")
    return expected_copy_count(h, n, q)


# --- subset sweeps ---------------------------------------------------------------


def _subset_tables(pattern: Graph):
    """Vertex counts, edge counts and in-subset degrees for every nonempty subset.

    Subsets are bitmasks over the pattern's vertices; row ``s`` of ``deg``
    holds each vertex's degree inside subset ``s`` (-1 for absent vertices).
    """
    k = pattern.n
    masks = np.arange(1, 1 << k, dtype=np.int64)
    nv = np.bitwise_count(masks).astype(np.int64)
    deg = np.full((masks.size, k), -1, dtype=np.int16)
    ne2 = np.zeros(masks.size, dtype=np.int64)
    for i, m in enumerate(pattern.masks):
        inside = ((masks >> i) & 1).astype(bool)
        d = np.bitwise_count(masks & m).astype(np.int16)
        deg[inside, i] = d[inside]
        ne2 += np.where(inside, d, 0)
    return masks, nv, ne2 // 2, deg


def _mask_vertices(mask, k):
    return [i for i in range(k) if (int(mask) >> i) & 1]


def dh_min(pattern: Graph, n: int, q: float, max_vertices: int = MAX_SWEEP_VERTICES):
    """Minimum of log D_H over induced subgraphs H of ``pattern`` with e(H) > 0.

    Returns ``(log_value, minimizer)``.  Ties go to the subgraph with more
    vertices.  Complete patterns are handled in closed form; anything else is
    an exhaustive sweep over vertex subsets, pruned with the bound
    |Aut(H)| <= prod over degree classes of (class size)!.
    """
    k = pattern.n
    _check(q, k, n)
    if pattern.edge_count == 0:
        raise DomainError(
            "pattern has no edges; analyse its complement with 1-q instead"
        )
    if is_complete(pattern):
        best = None
        for v in range(2, k + 1):
            val = _log_copies(v, math.comb(v, 2), math.factorial(v), n, q)
            if best is None or val <= best[0]:
                best = (val, v)
        return best[0], complete_graph(best[1])
    if k > max_vertices:
        raise ResourceLimitError(
            f"D_H sweep over 2^{k} subsets exceeds the {max_vertices}-vertex cap",
            bound=max_vertices,
        )

    masks, nv, ne, deg = _subset_tables(pattern)
    keep = (ne > 0) & (nv <= n)
    masks, nv, ne, deg = masks[keep], nv[keep], ne[keep], deg[keep]

    lq = math.log(q) - math.log1p(-q)
    l1q = math.log1p(-q)
    lc = np.array([log_comb(n, v) for v in range(k + 1)])
    lfact = np.array([math.lgamma(v + 1) for v in range(k + 1)])
    base = lc[nv] + lfact[nv] + ne * lq + (nv * (nv - 1) // 2) * l1q

    # largest possible log|Aut| from degree-class sizes
    sdeg = np.sort(deg, axis=1)
    run_start = np.ones_like(sdeg, dtype=bool)
    run_start[:, 1:] = sdeg[:, 1:] != sdeg[:, :-1]
    run_id = np.cumsum(run_start, axis=1)
    aut_cap = np.zeros(masks.size)
    present = sdeg >= 0
    for r in range(1, k + 1):
        cnt = ((run_id == r) & present).sum(axis=1)
        aut_cap += lfact[cnt]
    lower = base - aut_cap

    best_val, best_mask = math.inf, None
    for idx in np.lexsort((-nv, lower)):
        if lower[idx] > best_val + 1e-12:
            break
        vs = _mask_vertices(masks[idx], k)
        h = induced_subgraph(pattern, vs)
        val = float(base[idx]) - math.log(automorphism_count(h))
        if val < best_val - 1e-12 or (
            abs(val - best_val) <= 1e-12 and nv[idx] > len(_mask_vertices(best_mask, k))
        ):
            best_val, best_mask = val, masks[idx]
    return best_val, induced_subgraph(pattern, _mask_vertices(best_mask, k))


def max_subgraph_density(pattern: Graph) -> Fraction:
    """m(Gamma): the largest e(H)/v(H) over subgraphs H of ``pattern``."""
    return densest_subgraph(pattern)[0]


def densest_subgraph(pattern: Graph):
    """``(m, vertices)`` with the largest maximizer among ties."""
    k = pattern.n
    if k == 0:
        raise InvalidArgument("pattern has no vertices")
    if is_complete(pattern):
        return Fraction(k - 1, 2), list(range(k))
    if k > MAX_SWEEP_VERTICES:
        raise ResourceLimitError(
            f"density sweep over 2^{k} subsets exceeds the cap", bound=MAX_SWEEP_VERTICES
        )
    masks, nv, ne, _ = _subset_tables(pattern)
    # exact comparison of e/v via cross multiplication against the running best
    best_e, best_v, best_mask = 0, 1, None
    ratio = ne / nv
    top = ratio.max()
    for idx in np.flatnonzero(ratio >= top - 1e-9):
        e, v = int(ne[idx]), int(nv[idx])
        if best_mask is None or e * best_v > best_e * v or (e * best_v == best_e * v and v > best_v):
            best_e, best_v, best_mask = e, v, masks[idx]
    return Fraction(best_e, best_v), _mask_vertices(best_mask, k)


def is_strictly_balanced(pattern: Graph) -> bool:
    """True iff every proper subgraph is strictly sparser than ``pattern``."""
    k = pattern.n
    if k <= 1 or is_complete(pattern):
        return True
    if pattern.edge_count == 0:
        return False
    if k > MAX_SWEEP_VERTICES:
        raise ResourceLimitError("strict-balance sweep exceeds the cap", bound=MAX_SWEEP_VERTICES)
    masks, nv, ne, _ = _subset_tables(pattern)
    proper = nv < k
    e, v = pattern.edge_count, k
    # d(H) < d(Gamma)  <=>  e_H * v < e * v_H
    return bool(np.all(ne[proper] * v < e * nv[proper]))


def named_barriers(kind: str, n: int, q: float) -> float:
    """Closed-form statistical barrier on k for a few structure families."""
    if not (0.0 < q < 1.0):
        raise InvalidArgument(f"q must lie in (0, 1), got {q}")
    if kind == "clique":
        return 2 * math.log(n) / math.log(1 / q)
    if kind in ("independent_set", "independent"):
        return 2 * math.log(n) / math.log(1 / (1 - q))
    if kind in ("line", "path"):
        return 2 * math.log(n * q / (1 - q)) / math.log(1 / (1 - q))
    raise InvalidArgument(f"unknown pattern kind {kind!r}")


def classify_log_value(log_dh: float, tau: float = 3.0) -> str:
    if log_dh > tau:
        return "impossible-leaning"
    if log_dh < -tau:
        return "possible-leaning"
    return "boundary"


def regime_classify(pattern: Graph, n: int, q: float, tau: float = 3.0) -> str:
    """Finite-n reading of the detection boundary from the sign of log min D_H."""
    return classify_log_value(dh_min(pattern, n, q)[0], tau)


@dataclass(frozen=True)
class StructureReport:
    pattern: Graph
    density: Fraction
    max_subgraph_density: Fraction
    strictly_balanced: bool
    aut_count: int
    dh_min_value: Optional[float]
    dh_minimizer: Optional[Graph]
    regime: str

    def to_json(self) -> dict:
        return {
            "density": str(self.density),
            "m": str(self.max_subgraph_density),
            "strictly_balanced": self.strictly_balanced,
            "aut": self.aut_count,
            "log_dh_min": self.dh_min_value,
            "minimizer_edges": None
            if self.dh_minimizer is None
            else [list(e) for e in self.dh_minimizer.sorted_edges()],
            "regime": self.regime,
        }


def structure_report(pattern: Graph, n: int, q: float, tau: float = 3.0) -> StructureReport:
    if pattern.edge_count == 0:
        val, h, regime = None, None, "undefined"
    else:
        val, h = dh_min(pattern, n, q)
        regime = classify_log_value(val, tau)
    return StructureReport(
        pattern=pattern,
        density=density(pattern),
        max_subgraph_density=max_subgraph_density(pattern),
        strictly_balanced=is_strictly_balanced(pattern),
        aut_count=automorphism_count(pattern),
        dh_min_value=val,
        dh_minimizer=h,
        regime=regime,
    )
