"""Low-degree likelihood ratio: Fourier characters, exact norms, analytic bounds.

Characters are indexed by sets of vertex pairs ("edge subsets").  Under the
planted model, conditioning on the placement makes pairs independent, so
E_H1[chi_alpha] is an average over placements of a product of per-pair
conditional means: 0 off the placement, sqrt(eta) on a planted edge and
-1/sqrt(eta) on a planted non-edge, with eta = (1-q)/q.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .ensembles import PlantParams
from .errors import InvalidArgument, ResourceLimitError
from .graphcore import Graph, is_complete, is_edgeless

DEFAULT_MAX_PARTIAL_MAPS = 2_000_000
DEFAULT_MAX_SUBSETS = 5_000


def edge_subset(pairs, n: Optional[int] = None) -> frozenset:
    """Normalise an iterable of vertex pairs to a frozenset of (i, j), i < j."""
    out = set()
    for p in pairs:
        i, j = (int(x) for x in p)
        if i == j:
            raise InvalidArgument(f"pair ({i}, {j}) is a self-loop")
        if n is not None and not (0 <= i < n and 0 <= j < n):
            raise InvalidArgument(f"pair ({i}, {j}) out of range for n={n}")
        out.add((min(i, j), max(i, j)))
    return frozenset(out)


def support(alpha) -> list:
    """Sorted vertices touched by the pairs in ``alpha``."""
    return sorted({v for p in alpha for v in p})


def _eta(q):
    if not (0.0 < q < 1.0):
        raise InvalidArgument(f"q must lie in (0, 1), got {q}")
    return (1.0 - q) / q


def fourier_character(g: Graph, alpha, q: float) -> float:
    """chi_alpha(G) = prod over alpha of (G_ij - q)/sqrt(q(1-q))."""
    _eta(q)
    scale = math.sqrt(q * (1 - q))
    out = 1.0
    adj = g.adjacency
    for i, j in alpha:
        if not (0 <= i < g.n and 0 <= j < g.n) or i == j:
            raise InvalidArgument(f"pair ({i}, {j}) invalid for a graph on {g.n} vertices")
        out *= ((1.0 if adj[i, j] else 0.0) - q) / scale
    return out


def character_mean_h1(alpha, params: PlantParams, max_maps: int = DEFAULT_MAX_PARTIAL_MAPS) -> float:
    """Exact E_H1[chi_alpha] for the subgraph ensemble with a uniform placement.

    Only the part of the placement that lands on the support of ``alpha``
    matters: each injective assignment of the t support vertices to pattern
    vertices is hit by a fraction (n-t)!/n! of all placements.
    """
    pattern = params.pattern
    if pattern is None:
        raise InvalidArgument("character_mean_h1 needs a pattern")
    n, k, q = params.n, pattern.n, params.q
    eta = _eta(q)
    alpha = edge_subset(alpha, n)
    if not alpha:
        return 1.0
    sup = support(alpha)
    t = len(sup)
    if t > k:
        return 0.0
    n_maps = math.perm(k, t)
    if n_maps > max_maps:
        raise ResourceLimitError(
            f"{n_maps} partial placements exceed the cap of {max_maps}", bound=max_maps
        )
    pos = {v: i for i, v in enumerate(sup)}
    pairs = [(pos[i], pos[j]) for i, j in alpha]
    on, off = math.sqrt(eta), -1.0 / math.sqrt(eta)
    adj = pattern.adjacency
    total = 0.0
    for sigma in itertools.permutations(range(k), t):
        prod = 1.0
        for a, b in pairs:
            prod *= on if adj[sigma[a], sigma[b]] else off
        total += prod
    # (n-t)!/n! = 1 / perm(n, t)
    return total / math.perm(n, t)


def sandwich_values(alpha, n: int, k: int, q: float):
    """(clique value, independent-set value) of |E_H1 chi_alpha|.

    Both equal eta^(+-|alpha|/2) * C(k,t)/C(n,t) with t the support size;
    for q < 1/2 the clique value bounds every pattern from above.
    """
    eta = _eta(q)
    t = len(support(alpha))
    m = len(alpha)
    if t > k:
        return 0.0, 0.0
    p = math.comb(k, t) / math.comb(n, t)
    return eta ** (m / 2) * p, eta ** (-m / 2) * p


def iter_edge_subsets(n: int, max_size: int):
    """All edge subsets of K_n with 1 <= |alpha| <= max_size, by size."""
    pairs = list(itertools.combinations(range(n), 2))
    for d in range(1, min(max_size, len(pairs)) + 1):
        for alpha in itertools.combinations(pairs, d):
            yield frozenset(alpha)


def exact_lowdegree_norm(
    params: PlantParams, D: int, max_subsets: int = DEFAULT_MAX_SUBSETS
) -> float:
    """||L_{n,<=D}||^2 = 1 + sum over 0 < |alpha| <= D of (E_H1 chi_alpha)^2.

    The leading 1 is the constant character, so at full degree the value
    equals E_H0[L^2].
    """
    if D < 0:
        raise InvalidArgument("D must be non-negative")
    n = params.n
    n_pairs = math.comb(n, 2)
    count = sum(math.comb(n_pairs, d) for d in range(1, min(D, n_pairs) + 1))
    if count > max_subsets:
        raise ResourceLimitError(
            f"{count} characters of degree <= {D} on n={n} exceed the cap of {max_subsets}",
            bound=max_subsets,
        )
    k = params.k
    total = 1.0
    cache = {}
    for alpha in iter_edge_subsets(n, D):
        if len(support(alpha)) > k:
            continue
        key = _shape_key(alpha)
        if key not in cache:
            cache[key] = character_mean_h1(alpha, params)
        total += cache[key] ** 2
    return total


def _shape_key(alpha):
    """Relabel the support to 0..t-1 in sorted order.

    The mean only depends on the isomorphism class, so this is a safe
    (if incomplete) cache key.
    """
    pos = {v: i for i, v in enumerate(support(alpha))}
    return frozenset((pos[i], pos[j]) for i, j in alpha)


# --- analytic bound conditions -------------------------------------------------

# exponent of eta in each of the four conditions, as a function of r = sqrt(2D)
_ETA_EXPONENTS = {
    "clique_low_q": lambda r: 0.5 + r,
    "indep_low_q": lambda r: -0.5,
    "clique_high_q": lambda r: 0.5,
    "indep_high_q": lambda r: -0.5 - r,
}


def log_condition_value(n: int, k: float, q: float, D: float, which: str) -> float:
    """log of (e^2 k^2/n) e^r (1+r)^(2r+1) eta^x with r = sqrt(2D)."""
    if which not in _ETA_EXPONENTS:
        raise InvalidArgument(f"unknown condition {which!r}")
    eta = _eta(q)
    r = math.sqrt(2 * D)
    return (
        2.0
        + 2 * math.log(k)
        - math.log(n)
        + r
        + (2 * r + 1) * math.log1p(r)
        + _ETA_EXPONENTS[which](r) * math.log(eta)
    )


def _exp(x):
    return math.exp(x) if x < 700 else math.inf


def log_norm_upper(n: int, k: float, q: float, D: int) -> float:
    """log of the two-part sum bounding ||L_{n,<=D}||^2 for the clique.

    sum over 2 <= t <= sqrt(2D) of (e^2k^2/n)^t (t sqrt(eta))^(t^2), plus
    sum over sqrt(2D) < t <= 2D of (e^2k^2/n)^t (t sqrt(eta))^(2D).
    The top term t = 2D is kept, since supports of that size exist.
    """
    eta = _eta(q)
    base = 2.0 + 2 * math.log(k) - math.log(n)
    r = math.sqrt(2 * D)
    terms = []
    for t in range(2, 2 * D + 1):
        lt = math.log(t) + 0.5 * math.log(eta)
        terms.append(t * base + (t * t if t <= r else 2 * D) * lt)
    if not terms:
        return -math.inf
    terms = np.array(terms)
    top = terms.max()
    return float(top + math.log(np.exp(terms - top).sum()))


@dataclass(frozen=True)
class LowDegreeReport:
    n: int
    k: float
    q: float
    D: int
    exact_norm_sq: Optional[float]
    conditions: dict  # raw left-hand sides of all four conditions
    bound_clique: float
    bound_indep: float
    norm_upper: float
    bounded_flag: dict

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "q": self.q,
            "D": self.D,
            "exact_norm_sq": self.exact_norm_sq,
            "conditions": self.conditions,
            "bound_clique": self.bound_clique,
            "bound_indep": self.bound_indep,
            "norm_upper": self.norm_upper,
            "bounded_flag": self.bounded_flag,
        }


def lowdegree_bound_conditions(
    n: int, k: float, q: float, D: int, exact_norm_sq: Optional[float] = None
) -> LowDegreeReport:
    """Evaluate the four bound conditions and the two-part norm bound.

    ``bound_clique``/``bound_indep`` pick the pair matching the side of 1/2
    that q is on (at q = 1/2 all four coincide).  Values are raw left-hand
    sides; ``bounded_flag`` just reports value < 1.
    """
    if D < 1:
        raise InvalidArgument("D must be at least 1")
    _eta(q)
    conds = {name: _exp(log_condition_value(n, k, q, D, name)) for name in _ETA_EXPONENTS}
    if q < 0.5:
        bc, bi = conds["clique_low_q"], conds["indep_low_q"]
    else:
        bc, bi = conds["clique_high_q"], conds["indep_high_q"]
    return LowDegreeReport(
        n=n,
        k=k,
        q=q,
        D=D,
        exact_norm_sq=exact_norm_sq,
        conditions=conds,
        bound_clique=bc,
        bound_indep=bi,
        norm_upper=_exp(log_norm_upper(n, k, q, D)),
        bounded_flag={"clique": bc < 1, "independent_set": bi < 1},
    )


def pattern_bound(report: LowDegreeReport, pattern: Optional[Graph]) -> float:
    """Bound value that applies to ``pattern``: its own extreme, else the larger one."""
    if pattern is not None and pattern.n > 1:
        if is_complete(pattern):
            return report.bound_clique
        if is_edgeless(pattern):
            return report.bound_indep
    return max(report.bound_clique, report.bound_indep)


def default_degree(n: int) -> int:
    return max(1, math.ceil(math.log(n)))
