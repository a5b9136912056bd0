"""Monte Carlo risk estimation and parameter-grid sweeps.

Every trial draws from its own stream ``trial_rng(seed, grid_point, trial,
hypothesis)``, so results do not depend on worker count or scheduling, and
an interrupted sweep can resume at the next grid point with identical
output.
"""

from __future__ import annotations

import csv
import io
import itertools
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable, Optional, Sequence, Union

from .detectors import TESTS, TestVerdict
from .ensembles import PlantParams, sample, sample_null, trial_rng
from .errors import DomainError, InvalidArgument, ResourceLimitError
from .graphcore import (
    Graph,
    complete_graph,
    cycle_graph,
    empty_graph,
    path_graph,
    star_graph,
    structure_complement,
)
from .lowdegree import default_degree, lowdegree_bound_conditions, pattern_bound
from .structstats import dh_min

CSV_SCHEMA = 1
PHASE_COLUMNS = (
    "test", "family", "n", "k", "q", "D", "trials",
    "type1_hat", "type2_hat", "risk_hat", "ci", "degenerate",
    "log_dh_min", "lowdegree_bound",
)
FAMILIES = {
    "clique": complete_graph,
    "independent_set": empty_graph,
    "path": path_graph,
    "cycle": cycle_graph,
    "star": star_graph,
}


@dataclass(frozen=True)
class RiskEstimate:
    test: str
    trials: int
    type1_hat: float
    type2_hat: float
    risk_hat: float
    ci_halfwidth: float
    seed: int
    degenerate_h0: int = 0
    degenerate_h1: int = 0

    def to_json(self) -> dict:
        return {
            "test": self.test,
            "trials": self.trials,
            "type1_hat": self.type1_hat,
            "type2_hat": self.type2_hat,
            "risk_hat": self.risk_hat,
            "ci_halfwidth": self.ci_halfwidth,
            "seed": self.seed,
            "degenerate_h0": self.degenerate_h0,
            "degenerate_h1": self.degenerate_h1,
        }


def ci_halfwidth(p: float, trials: int) -> float:
    return 1.96 * math.sqrt(p * (1 - p) / trials)


TestSpec = Union[str, Callable[..., TestVerdict]]


def _resolve(test: TestSpec):
    if callable(test):
        return getattr(test, "__name__", "custom"), test
    if test not in TESTS:
        raise InvalidArgument(f"unknown test {test!r}; choose from {sorted(TESTS)}")
    return test, TESTS[test]


def _run_block(test, params: PlantParams, seed, grid_point, hyp, trials, test_kwargs):
    """Decisions and degeneracy flags for ``trials`` under one hypothesis."""
    _, fn = _resolve(test)
    out = []
    for t in trials:
        rng = trial_rng(seed, grid_point, t, hyp)
        if hyp == 0:
            g = sample_null(params.n, params.q, rng).graph
        else:
            g = sample(params, rng).graph
        v = fn(g, params.pattern, params.n, params.q, **test_kwargs)
        out.append((v.rejects, v.degenerate))
    return out


def _chunks(n, parts):
    size = max(1, math.ceil(n / parts))
    return [range(i, min(n, i + size)) for i in range(0, n, size)]


def estimate_risk(
    test: TestSpec,
    params: PlantParams,
    trials: int,
    seed: int = 0,
    test_kwargs: Optional[dict] = None,
    threads: int = 1,
    grid_point: int = 0,
) -> RiskEstimate:
    """Empirical Type I + Type II risk from ``trials`` samples under each hypothesis.

    H1 samples come from ``params.ensemble`` (the subgraph ensemble unless
    set to ``union``).  Degenerate verdicts count toward their default
    decision and are tallied separately.
    """
    if trials < 1:
        raise InvalidArgument("trials must be at least 1")
    if params.pattern is None:
        raise InvalidArgument("risk estimation needs a pattern")
    if params.ensemble == "null":
        params = replace(params, ensemble="subgraph")
    name, _ = _resolve(test)
    kw = dict(test_kwargs or {})
    jobs = [(h, block) for h in (0, 1) for block in _chunks(trials, max(1, threads))]
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            futures = [
                pool.submit(_run_block, test, params, seed, grid_point, h, block, kw)
                for h, block in jobs
            ]
            results = [f.result() for f in futures]
    else:
        results = [_run_block(test, params, seed, grid_point, h, block, kw) for h, block in jobs]
    per_h = {0: [], 1: []}
    for (h, _), res in zip(jobs, results):
        per_h[h].extend(res)
    type1 = sum(r for r, _ in per_h[0]) / trials
    type2 = sum(not r for r, _ in per_h[1]) / trials
    return RiskEstimate(
        test=name,
        trials=trials,
        type1_hat=type1,
        type2_hat=type2,
        risk_hat=type1 + type2,
        ci_halfwidth=ci_halfwidth(type1, trials) + ci_halfwidth(type2, trials),
        seed=seed,
        degenerate_h0=sum(d for _, d in per_h[0]),
        degenerate_h1=sum(d for _, d in per_h[1]),
    )


# --- phase diagrams --------------------------------------------------------------


@dataclass(frozen=True)
class GridSpec:
    ns: Sequence[int]
    ks: Sequence[int]
    qs: Sequence[float]
    Ds: Sequence[Optional[int]] = (None,)  # None: ceil(log n)
    family: Union[str, Graph] = "clique"
    ensemble: str = "subgraph"

    def __post_init__(self):
        if isinstance(self.family, str) and self.family not in FAMILIES:
            raise InvalidArgument(f"unknown family {self.family!r}; choose from {sorted(FAMILIES)}")
        for q in self.qs:
            if not (0.0 < q < 1.0):
                raise InvalidArgument(f"q must lie in (0, 1), got {q}")

    @property
    def family_name(self) -> str:
        return self.family if isinstance(self.family, str) else "file"

    def pattern(self, k: int) -> Graph:
        if isinstance(self.family, Graph):
            return self.family
        return FAMILIES[self.family](k)

    def points(self):
        """Grid points in a fixed order; points with k > n are skipped."""
        ks = [self.family.n] if isinstance(self.family, Graph) else list(self.ks)
        out = []
        for n, k, q, D in itertools.product(self.ns, ks, self.qs, self.Ds):
            if 1 <= k <= n:
                out.append((n, k, q, default_degree(n) if D is None else D))
        return out


@dataclass
class PhaseResult:
    rows: list
    complete: bool
    resume_token: Optional[str] = None
    start: int = 0
    detail: dict = field(default_factory=dict)

    def to_csv(self, header: bool = True) -> str:
        return rows_to_csv(self.rows, header=header)


def _fmt(x):
    if x is None:
        return ""
    if isinstance(x, bool):
        return str(int(x))
    if isinstance(x, float):
        return format(x, ".10g")
    return str(x)


def rows_to_csv(rows, header: bool = True) -> str:
    buf = io.StringIO()
    if header:
        buf.write(f"# schema={CSV_SCHEMA}\n")
    w = csv.writer(buf, lineterminator="\n")
    if header:
        w.writerow(PHASE_COLUMNS)
    for row in rows:
        w.writerow([_fmt(row[c]) for c in PHASE_COLUMNS])
    return buf.getvalue()


def _log_dh_min(pattern: Graph, n: int, q: float):
    try:
        if pattern.edge_count == 0:
            # edgeless: the equivalent problem is the complement at 1-q
            return dh_min(structure_complement(pattern), n, 1 - q)[0]
        return dh_min(pattern, n, q)[0]
    except (DomainError, ResourceLimitError):
        return None


def make_resume_token(index: int, seed: int, trials: int) -> str:
    return f"point={index};seed={seed};trials={trials}"


def parse_resume_token(token: str):
    try:
        parts = dict(p.split("=", 1) for p in token.split(";"))
        return int(parts["point"]), int(parts["seed"]), int(parts["trials"])
    except (KeyError, ValueError) as exc:
        raise InvalidArgument(f"malformed resume token {token!r}") from exc


def phase_diagram(
    test: TestSpec,
    grid: GridSpec,
    trials: int,
    seed: int = 0,
    test_kwargs: Optional[dict] = None,
    threads: int = 1,
    budget_seconds: Optional[float] = None,
    resume_token: Optional[str] = None,
) -> PhaseResult:
    """One CSV row per grid point, in grid order.

    When ``budget_seconds`` runs out the rows finished so far are returned
    with a resume token naming the next grid point; passing it back (with
    the same grid, seed and trials) produces the remaining rows exactly.
    """
    name, _ = _resolve(test)
    start = 0
    if resume_token:
        start, tok_seed, tok_trials = parse_resume_token(resume_token)
        if (tok_seed, tok_trials) != (seed, trials):
            raise InvalidArgument("resume token was issued for a different seed or trial count")
    points = grid.points()
    t0 = time.monotonic()
    rows = []
    for idx in range(start, len(points)):
        if budget_seconds is not None and idx > start and time.monotonic() - t0 > budget_seconds:
            return PhaseResult(rows, False, make_resume_token(idx, seed, trials), start)
        n, k, q, D = points[idx]
        pattern = grid.pattern(k)
        params = PlantParams(n=n, q=q, pattern=pattern, ensemble=grid.ensemble, seed=seed)
        est = estimate_risk(test, params, trials, seed, test_kwargs, threads, grid_point=idx)
        report = lowdegree_bound_conditions(n, k, q, D)
        rows.append({
            "test": name,
            "family": grid.family_name,
            "n": n,
            "k": k,
            "q": q,
            "D": D,
            "trials": trials,
            "type1_hat": est.type1_hat,
            "type2_hat": est.type2_hat,
            "risk_hat": est.risk_hat,
            "ci": est.ci_halfwidth,
            "degenerate": est.degenerate_h0 + est.degenerate_h1,
            "log_dh_min": _log_dh_min(pattern, n, q),
            "lowdegree_bound": pattern_bound(report, pattern),
        })
    return PhaseResult(rows, True, None, start)
