"""Detection tests: exhaustive scan, total degree, and spectral.

Each test returns a :class:`TestVerdict`.  Degenerate situations (a
vanishing mean gap, an undefined threshold) produce a verdict flagged
``degenerate`` with decision H0 instead of an exception, so Monte Carlo
sweeps never stop halfway through a grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

import numpy as np

from .errors import InvalidArgument
from .graphcore import (
    DEFAULT_NODE_BUDGET,
    Graph,
    clique_number,
    complement,
    find_embedding,
    is_complete,
    structure_complement,
)
from .structstats import dh_min

H0, H1 = "H0", "H1"


@dataclass(frozen=True)
class TestVerdict:
    __test__ = False  # not a pytest class

    test: str
    statistic: float
    threshold: float
    decision: str
    degenerate: bool = False
    detail: dict = field(default_factory=dict)

    @property
    def rejects(self) -> bool:
        return self.decision == H1

    def to_json(self) -> dict:
        return {
            "test": self.test,
            "statistic": self.statistic,
            "threshold": self.threshold,
            "decision": self.decision,
            "degenerate": self.degenerate,
            "detail": self.detail,
        }


@dataclass(frozen=True)
class SpectralConfig:
    delta: float = 0.05
    power_iters: int = 20_000
    tol: float = 1e-12
    method: str = "power"  # "power" or "dense"
    threshold: Optional[float] = None  # calibrated override of the analytic threshold

    def __post_init__(self):
        if not (0.0 < self.delta < 1.0):
            raise InvalidArgument(f"delta must lie in (0, 1), got {self.delta}")
        if self.tol <= 0:
            raise InvalidArgument("tol must be positive")
        if self.method not in ("power", "dense"):
            raise InvalidArgument(f"unknown spectral method {self.method!r}")


def _check_n(g: Graph, n: int):
    if g.n != n:
        raise InvalidArgument(f"graph has {g.n} vertices but n={n}")


# --- scan test ---------------------------------------------------------------


@lru_cache(maxsize=256)
def _scan_target(pattern: Graph, n: int, q: float):
    return dh_min(pattern, n, q)


def scan_test(
    g: Graph,
    pattern: Graph,
    n: int,
    q: float,
    k_star: Optional[int] = None,
    budget: int = DEFAULT_NODE_BUDGET,
) -> TestVerdict:
    """Search ``g`` for the D_H-minimising substructure of ``pattern``.

    Decides H1 iff the largest such structure found has at least ``k_star``
    vertices (default: the minimiser's own order).  Edgeless patterns are
    handled through the equivalent problem (pattern complement, G^c, 1-q).
    """
    _check_n(g, n)
    flipped = pattern.edge_count == 0
    if flipped:
        g, pattern, q = complement(g), structure_complement(pattern), 1.0 - q
    log_d, h = _scan_target(pattern, n, q)
    if k_star is None:
        k_star = h.n
    if is_complete(h):
        family = "clique"
        m = clique_number(g, budget=budget)
    else:
        family = "pattern"
        m = h.n if find_embedding(h, g, budget=budget) is not None else 0
    detail = {
        "family": family,
        "minimizer_edges": [list(e) for e in h.sorted_edges()],
        "minimizer_vertices": h.n,
        "log_dh_min": log_d,
        # Markov: P_H0(reject) <= expected number of minimiser copies
        "type1_markov_bound": math.exp(log_d) if log_d < 700 else math.inf,
        "complemented": flipped,
    }
    return TestVerdict("scan", float(m), float(k_star), H1 if m >= k_star else H0, False, detail)


# --- total degree test ----------------------------------------------------------


def _degree_gap(pattern: Graph, q: float) -> float:
    """e(Gamma) - q C(k,2): how far the planted block shifts the edge count."""
    return pattern.edge_count - q * math.comb(pattern.n, 2)


def total_degree_test(g: Graph, pattern: Graph, n: int, q: float) -> TestVerdict:
    if not (0.0 < q < 1.0):
        raise InvalidArgument(f"q must lie in (0, 1), got {q}")
    _check_n(g, n)
    pairs = math.comb(n, 2)
    if q <= 0.5:
        w = g.edge_count
        s = _degree_gap(pattern, q)
        w_star = q * pairs + s / 2
        graph_used = "G"
    else:
        w = pairs - g.edge_count
        s = structure_complement(pattern).edge_count - (1 - q) * math.comb(pattern.n, 2)
        w_star = (1 - q) * pairs + s / 2
        graph_used = "G^c"
    detail = {"gap": s, "graph": graph_used}
    if abs(s) < 1e-12:
        detail["reason"] = "mean gap e(Gamma) - q C(k,2) vanishes; edge count carries no signal"
        return TestVerdict("degree", float(w), w_star, H0, True, detail)
    if s > 0:
        reject = w >= w_star
        detail["orientation"] = "W >= W*"
    else:
        reject = w < w_star
        detail["orientation"] = "W < W*"
    return TestVerdict("degree", float(w), w_star, H1 if reject else H0, False, detail)


def total_degree_risk_bound(pattern: Graph, n: int, q: float) -> float:
    """Bernstein/Chernoff upper bound on the total degree test's Type I+II risk."""
    s = _degree_gap(pattern, q)
    var = min(q, 1 - q) * math.comb(n, 2) + abs(s)
    return 2.0 * math.exp(-(s * s) / (8.0 * var))


def degree_condition(pattern: Graph, n: int, q: float, delta: float) -> float:
    """Sufficient-condition value for risk <= delta; the guarantee holds iff >= 1.

    Obtained by solving ``total_degree_risk_bound <= delta`` for the gap:
    s^2 / ((min(q,1-q) C(n,2) + |s|) * 8 log(2/delta)).
    """
    s = _degree_gap(pattern, q)
    var = min(q, 1 - q) * math.comb(n, 2) + abs(s)
    return s * s / (var * 8.0 * math.log(2.0 / delta))


def degree_condition_sqrt_form(pattern: Graph, n: int, q: float, delta: float) -> float:
    """The same condition with (2 log(2/delta))^(-1/2) in place of 1/(8 log(2/delta)).

    This scaling is looser than the risk bound supports: it can read >= 1
    where the true risk is far above delta.  Kept for comparison only.
    """
    s = _degree_gap(pattern, q)
    var = min(q, 1 - q) * math.comb(n, 2) + abs(s)
    return s * s * (2.0 * math.log(2.0 / delta)) ** -0.5 / var


# --- spectral test -----------------------------------------------------------------


@dataclass(frozen=True)
class NormResult:
    value: float
    iterations: int
    converged: bool


def spectral_norm_info(m, tol: float = 1e-12, max_iter: int = 20_000, seed: int = 0) -> NormResult:
    """Largest |eigenvalue| of a symmetric matrix by power iteration.

    Iterating x <- Mx/|Mx| makes |Mx| a non-decreasing lower bound that
    converges to max |lambda| whatever its sign, since it is the Rayleigh
    quotient of M^2.
    """
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise InvalidArgument("spectral_norm needs a square matrix")
    if not np.allclose(m, m.T, rtol=0, atol=1e-12):
        raise InvalidArgument("spectral_norm needs a symmetric matrix")
    n = m.shape[0]
    if n == 0 or not m.any():
        return NormResult(0.0, 0, True)
    x = np.random.default_rng(seed).standard_normal(n)
    x /= np.linalg.norm(x)
    est = 0.0
    for it in range(1, max_iter + 1):
        y = m @ x
        new = float(np.linalg.norm(y))
        if new == 0.0:
            # start vector in the kernel; restart from a fresh direction
            x = np.random.default_rng(seed + it).standard_normal(n)
            x /= np.linalg.norm(x)
            continue
        x = y / new
        if abs(new - est) <= tol * new:
            return NormResult(new, it, True)
        est = new
    return NormResult(est, max_iter, False)


def spectral_norm(m, tol: float = 1e-12, max_iter: int = 20_000) -> float:
    return spectral_norm_info(m, tol=tol, max_iter=max_iter).value


def centered_adjacency(g: Graph, q: float) -> np.ndarray:
    """A - E_H0[A]: q subtracted off the diagonal, zero diagonal kept."""
    a = g.adjacency.astype(float) - q
    np.fill_diagonal(a, 0.0)
    return a


def spectral_threshold(n: int, q: float, delta: float) -> Optional[float]:
    """phi(n, q, delta), or None where its denominator is not positive."""
    s = math.sqrt(q * (1 - q) * n)
    lg = math.log(4 * n / delta**2)
    denom = (q * (1 - q) * n) ** (1 / 6) - 0.5 * lg
    if denom <= 0:
        return None
    return 4 * s + 2 * s * lg / denom


def spectral_guarantee_value(pattern: Graph, q: float) -> float:
    """q(k-1) + 2(1-2q) e(Gamma)/k, the planted-side level the threshold is compared with."""
    k = pattern.n
    return q * (k - 1) + 2 * (1 - 2 * q) * pattern.edge_count / k


def spectral_statistic(g: Graph, q: float, cfg: SpectralConfig = SpectralConfig()):
    """S(A) = |A - EA|_op + |A^c - EA^c|_op, and whether the norm converged."""
    b = centered_adjacency(g, q)
    if cfg.method == "dense":
        nb = float(np.abs(np.linalg.eigvalsh(b)).max()) if g.n else 0.0
        converged = True
    else:
        res = spectral_norm_info(b, tol=cfg.tol, max_iter=cfg.power_iters)
        nb, converged = res.value, res.converged
    # A^c - E A^c = (J - I - A) - (1-q)(J - I) = -(A - E A): both terms share one norm
    return 2.0 * nb, converged


def spectral_test(
    g: Graph, pattern: Graph, n: int, q: float, cfg: SpectralConfig = SpectralConfig()
) -> TestVerdict:
    _check_n(g, n)
    stat, converged = spectral_statistic(g, q, cfg)
    guarantee = spectral_guarantee_value(pattern, q)
    detail = {"norm_converged": converged, "guarantee_value": guarantee}
    if cfg.threshold is not None:
        phi = cfg.threshold
        detail["threshold_source"] = "override"
    else:
        phi = spectral_threshold(n, q, cfg.delta)
        detail["threshold_source"] = "analytic"
        if phi is None:
            detail["reason"] = (
                f"threshold undefined: (q(1-q)n)^(1/6) <= log(4n/delta^2)/2 at n={n}, delta={cfg.delta}"
            )
            return TestVerdict("spectral", stat, math.nan, H0, True, detail)
        detail["guarantee_met"] = guarantee >= phi
    degenerate = not converged
    if degenerate:
        detail["reason"] = "power iteration hit its iteration cap"
    return TestVerdict("spectral", stat, phi, H1 if stat > phi else H0, degenerate, detail)


def planted_support_forms(g: Graph, embedding, q: float) -> dict:
    """Quadratic forms of A, A^c and their centred versions at the planted unit vector.

    ``uncentered_times_k`` is k(|x'Ax| + |x'A^c x|) as an exact integer.
    """
    emb = np.asarray(embedding, dtype=np.intp)
    k = len(emb)
    block = g.adjacency[np.ix_(emb, emb)]
    e_in = int(block.sum()) // 2
    ec_in = math.comb(k, 2) - e_in
    b = centered_adjacency(g, q)[np.ix_(emb, emb)]
    centered = float(b.sum()) / k
    return {
        "uncentered_times_k": 2 * e_in + 2 * ec_in,
        "uncentered": (2 * e_in + 2 * ec_in) / k,
        # x'(A^c - EA^c)x = -x'(A - EA)x, so the two absolute values coincide
        "centered": 2.0 * abs(centered),
    }


TESTS = {
    "scan": scan_test,
    "degree": total_degree_test,
    "spectral": spectral_test,
}
