"""Monte Carlo layer: replica fan-out, crossing probabilities, bisection for
the critical freezing rate and log-log cluster-size histograms.

Replica ``i`` always uses clock stream ``i`` (offset by ``first_stream``), so
every aggregate depends only on the base seed, never on thread count or
scheduling.
"""
from __future__ import annotations

import csv
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator

import numpy as np
from scipy.stats import binomtest

from . import _kernels as K
from .engine import (Configuration, RunResult, _seed_u64, run_pcf, run_warm_pcf,
                     sample_clocks)
from .errors import BracketError, ContractError, DomainError, ParameterError
from .graph import GraphTopology, PriorityOrder, build_grid, grid_sides

log = logging.getLogger(__name__)

VARIANTS = ("pcf", "warm", "percolation")


@dataclass(frozen=True)
class ReplicaPlan:
    graph: GraphTopology
    alpha: float
    replicas: int
    base_seed: int
    variant: str = "pcf"
    t: float = math.inf          # percolation time, or t_max for the PCF variants
    first_stream: int = 0

    def __post_init__(self):
        if self.replicas < 1:
            raise ParameterError("replicas must be >= 1")
        if self.variant not in VARIANTS:
            raise ParameterError(f"variant must be one of {VARIANTS}")
        if self.variant != "percolation" and not self.alpha > 0:
            raise ParameterError("alpha must be positive")
        if self.variant == "percolation" and not self.t >= 0:
            raise ParameterError("percolation time must be non-negative")


def run_one(plan: ReplicaPlan, index: int) -> RunResult:
    """Replica ``index`` of ``plan``; percolation is PCF with vertex clocks at infinity."""
    g = plan.graph
    sid = plan.first_stream + index
    alpha = plan.alpha if plan.variant != "percolation" else 1.0
    clocks = sample_clocks(g, alpha, plan.base_seed, sid)
    prio = PriorityOrder.for_graph(g)
    if plan.variant == "percolation":
        clocks = clocks.with_clocks(vertex_clock=np.full(g.vertex_count, np.inf))
        return run_pcf(g, prio, clocks, plan.t)
    runner = run_warm_pcf if plan.variant == "warm" else run_pcf
    return runner(g, prio, clocks, plan.t)


def run_replicas(plan: ReplicaPlan, threads: int = 1, map_fn=None) -> Iterator:
    """Yield ``map_fn(result)`` (default: the :class:`RunResult`) in replica order.

    Runs release the GIL inside the compiled kernels, so threads give real
    parallelism.  At most ``2 * threads`` results are in flight, which keeps
    memory flat for large grids.
    """
    fn = (lambda i: run_one(plan, i)) if map_fn is None else (lambda i: map_fn(run_one(plan, i)))
    if threads <= 1:
        for i in range(plan.replicas):
            yield fn(i)
        return
    window = 2 * threads
    with ThreadPoolExecutor(max_workers=threads) as pool:
        pending = []
        nxt = 0
        while nxt < plan.replicas or pending:
            while nxt < plan.replicas and len(pending) < window:
                pending.append(pool.submit(fn, nxt))
                nxt += 1
            yield pending.pop(0).result()


@dataclass(frozen=True)
class BernoulliEstimate:
    successes: int
    trials: int
    p_hat: float
    ci_low: float
    ci_high: float

    @classmethod
    def from_counts(cls, successes: int, trials: int, confidence: float = 0.95):
        if trials < 1 or not 0 <= successes <= trials:
            raise ParameterError("need 0 <= successes <= trials and trials >= 1")
        ci = binomtest(int(successes), int(trials)).proportion_ci(confidence, method="wilson")
        p = successes / trials
        return cls(int(successes), int(trials), p, min(ci.low, p), max(ci.high, p))

    def merge(self, other: "BernoulliEstimate") -> "BernoulliEstimate":
        return BernoulliEstimate.from_counts(self.successes + other.successes,
                                             self.trials + other.trials)

    @property
    def stderr(self) -> float:
        return math.sqrt(self.p_hat * (1 - self.p_hat) / self.trials)

    def excludes(self, value: float, confidence: float | None = None) -> bool:
        """True if the Wilson interval (at ``confidence``, default the stored
        95% one) lies strictly on one side of ``value``."""
        if confidence is None:
            lo, hi = self.ci_low, self.ci_high
        else:
            ci = binomtest(self.successes, self.trials).proportion_ci(confidence, method="wilson")
            lo, hi = ci.low, ci.high
        return value < lo or value > hi


def has_lr_crossing(config: Configuration, grid: GraphTopology) -> bool:
    """Open path from the left column to the right column (a single column
    counts as crossed)."""
    left, right = grid_sides(grid)
    edge_open = np.asarray(config.edge_open, dtype=np.bool_)
    if edge_open.shape[0] != grid.edge_count:
        raise ContractError("configuration is not sized to this grid")
    return bool(K.lr_crossing(grid.vertex_count, np.ascontiguousarray(grid.edges[:, 0]),
                              np.ascontiguousarray(grid.edges[:, 1]), edge_open, left, right))


def crossing_grid(n: int) -> GraphTopology:
    """The n-by-(n+1) crossing grid: width n+1, height n."""
    if n < 2:
        raise ParameterError("n must be >= 2")
    return build_grid(n + 1, n)


def _crossing_chunks(g, alpha, seed, first, count, mode, t, threads, chunk=256):
    left, right = grid_sides(g)
    eu = np.ascontiguousarray(g.edges[:, 0])
    ev = np.ascontiguousarray(g.edges[:, 1])
    rank = np.arange(g.vertex_count, dtype=np.int64)
    boundary = np.array(g.boundary_mask)
    perc = mode == "percolation"
    warm = mode == "warm"
    a = 1.0 if perc else float(alpha)
    t_max = float(t) if (perc or t is not None) else np.inf

    def work(start, size):
        return K.batch_crossings(g.vertex_count, eu, ev, rank, a, _seed_u64(seed), start, size,
                                 boundary, warm, t_max, perc, left, right)

    starts = list(range(first, first + count, chunk))
    sizes = [min(chunk, first + count - s) for s in starts]
    if threads <= 1:
        return int(sum(int(work(s, z).sum()) for s, z in zip(starts, sizes)))
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return int(sum(int(r.sum()) for r in pool.map(work, starts, sizes)))


def estimate_crossing_prob(n: int, alpha: float, replicas: int, base_seed: int,
                           mode: str = "pcf", t: float | None = None, threads: int = 1,
                           first_stream: int = 0) -> BernoulliEstimate:
    """Probability that the final configuration on the crossing grid has a
    left-right crossing.

    ``mode="percolation"`` runs plain bond percolation at time ``t`` instead.
    """
    if mode not in VARIANTS:
        raise ParameterError(f"mode must be one of {VARIANTS}")
    if mode == "percolation":
        if t is None or t < 0:
            raise ParameterError("percolation mode needs t >= 0")
    elif not alpha > 0:
        raise ParameterError("alpha must be positive")
    if replicas < 1:
        raise ParameterError("replicas must be >= 1")
    g = crossing_grid(n)
    hits = _crossing_chunks(g, alpha, base_seed, first_stream, replicas, mode, t, threads)
    return BernoulliEstimate.from_counts(hits, replicas)


@dataclass
class AlphaCInterval:
    low: float
    high: float
    points: dict = field(default_factory=dict)   # alpha -> BernoulliEstimate
    path: list = field(default_factory=list)     # alphas in bisection order
    replicas_used: int = 0
    budget_exhausted: bool = False
    undecided: list = field(default_factory=list)
    monotone: bool = True

    @property
    def width(self) -> float:
        return self.high - self.low

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.low + self.high)


def estimate_alpha_c(n: int, bracket=(0.45, 0.65), target_width: float = 0.02,
                     replica_budget: int = 100_000, base_seed: int = 0, batch: int = 500,
                     threads: int = 1, confidence: float = 0.99) -> AlphaCInterval:
    """Bisection on alpha for crossing probability 1/2.

    Each test point draws ``batch`` replicas at a time until its Wilson
    interval at ``confidence`` excludes 1/2.  A point may use at most its fair share of the
    remaining budget; if that runs out first the branch follows the point
    estimate and the point is listed in ``undecided``.  If the total budget
    runs out the current bracket is returned with ``budget_exhausted`` set.

    Each alpha continues its own stream sequence, so every point is
    reproducible on its own.
    """
    lo, hi = float(bracket[0]), float(bracket[1])
    if not 0 < lo < hi:
        raise ParameterError("bracket must satisfy 0 < low < high")
    if target_width <= 0:
        raise ParameterError("target_width must be positive")
    g = crossing_grid(n)
    out = AlphaCInterval(lo, hi)
    steps = max(0, math.ceil(math.log2((hi - lo) / target_width)))

    def sample(alpha, count):
        est = out.points.get(alpha)
        first = 0 if est is None else est.trials
        count = min(count, replica_budget - out.replicas_used)
        if count <= 0:
            return est
        hits = _crossing_chunks(g, alpha, base_seed, first, count, "pcf", None, threads)
        new = BernoulliEstimate.from_counts(hits, count)
        out.replicas_used += count
        out.points[alpha] = new if est is None else est.merge(new)
        return out.points[alpha]

    def settle(alpha, cap):
        est = sample(alpha, batch)
        while not est.excludes(0.5, confidence) and est.trials < cap and out.replicas_used < replica_budget:
            est = sample(alpha, min(batch, cap - est.trials))
        return est

    share = replica_budget // (steps + 2)
    e_lo, e_hi = settle(lo, share), settle(hi, share)
    if not (e_lo.p_hat > 0.5 > e_hi.p_hat):
        raise BracketError(f"crossing probability does not straddle 1/2 on [{lo}, {hi}]: "
                           f"{e_lo.p_hat:.3f} at {lo}, {e_hi.p_hat:.3f} at {hi}")
    out.path += [lo, hi]
    while out.high - out.low > target_width * (1 + 1e-9):
        if out.replicas_used >= replica_budget:
            out.budget_exhausted = True
            break
        remaining = math.ceil(math.log2((out.high - out.low) / target_width))
        cap = max(batch, (replica_budget - out.replicas_used) // max(1, remaining))
        mid = round(0.5 * (out.low + out.high), 12)
        est = settle(mid, cap)
        out.path.append(mid)
        if not est.excludes(0.5, confidence):
            out.undecided.append(mid)
        if est.p_hat > 0.5:
            out.low = mid
        else:
            out.high = mid
        log.info("alpha=%.6f p=%.4f [%.4f, %.4f] n=%d -> [%.6f, %.6f]", mid, est.p_hat,
                 est.ci_low, est.ci_high, est.trials, out.low, out.high)
    xs = sorted(out.points)
    ps = [out.points[a].p_hat for a in xs]
    out.monotone = all(a >= b for a, b in zip(ps, ps[1:]))
    if not out.monotone:
        log.warning("crossing estimates are not monotone in alpha: %s", list(zip(xs, ps)))
    return out


@dataclass
class SizeHistogram:
    """Greedy log-log histogram; ``bins`` rows are ``(k_lo, k_hi, clusters, weight)``."""

    bins: list
    total_clusters: int
    total_weight: int
    min_per_bin: int
    weighting: str

    def centers(self) -> np.ndarray:
        return np.array([math.sqrt(a * b) for a, b, _, _ in self.bins])

    def densities(self) -> np.ndarray:
        return np.array([w / ((b - a + 1) * self.total_weight) for a, b, _, w in self.bins])

    def rows(self):
        for (a, b, c, w), x, dens in zip(self.bins, self.centers(), self.densities()):
            yield x, a, b, c, dens

    def to_csv(self, path: str | Path) -> None:
        with open(path, "w", newline="", encoding="ascii") as fh:
            wr = csv.writer(fh)
            wr.writerow(["k_center", "k_lo", "k_hi", "count", "density"])
            for x, a, b, c, dens in self.rows():
                wr.writerow([repr(float(x)), a, b, c, repr(float(dens))])


def size_counts(results: Iterable) -> np.ndarray:
    """``counts[k]`` = number of clusters of size ``k`` across ``results``
    (RunResults or raw size arrays)."""
    counts = np.zeros(2, dtype=np.int64)
    seen = False
    for r in results:
        sizes = np.asarray(r.cluster_sizes if isinstance(r, RunResult) else r, dtype=np.int64)
        seen = True
        if sizes.size == 0:
            continue
        c = np.bincount(sizes)
        if c.size > counts.size:
            c[:counts.size] += counts
            counts = c
        else:
            counts[:c.size] += c
    if not seen:
        raise DomainError("no results to histogram")
    return counts


def size_histogram(results: Iterable, min_per_bin: int = 100,
                   weighting: str = "cluster") -> SizeHistogram:
    """Bins grow greedily from ``k=1`` until each holds ``min_per_bin``
    clusters; only the last bin may hold fewer.

    ``weighting="cluster"`` gives the cluster-count density; ``"vertex"``
    weights each cluster by its size, i.e. the law of the cluster of a
    uniform vertex.  Density is weight / (bin width * total weight).
    """
    if min_per_bin < 1:
        raise ParameterError("min_per_bin must be >= 1")
    if weighting not in ("cluster", "vertex"):
        raise ParameterError("weighting must be 'cluster' or 'vertex'")
    counts = results if isinstance(results, np.ndarray) else size_counts(results)
    total = int(counts.sum())
    if total == 0:
        raise DomainError("no clusters to histogram")
    ks = np.flatnonzero(counts)
    bins = []
    start = 1
    acc = accw = 0
    for k in ks.tolist():
        c = int(counts[k])
        acc += c
        accw += c * k if weighting == "vertex" else c
        if acc >= min_per_bin:
            bins.append((start, k, acc, accw))
            start, acc, accw = k + 1, 0, 0
    if acc:
        bins.append((start, int(ks[-1]), acc, accw))
    weight_total = int((counts * np.arange(counts.size)).sum()) if weighting == "vertex" else total
    return SizeHistogram(bins, total, weight_total, min_per_bin, weighting)


@dataclass(frozen=True)
class SlopeFit:
    slope: float
    intercept: float
    k_range: tuple
    bins_used: int


def histogram_slope(hist: SizeHistogram, k_lo: float = 10, k_hi: float = 1e4) -> SlopeFit:
    """Least-squares slope of log density against log bin center over bins
    with centers in ``[k_lo, k_hi]``."""
    x = hist.centers()
    y = hist.densities()
    sel = (x >= k_lo) & (x <= k_hi) & (y > 0)
    if sel.sum() < 2:
        raise DomainError("fewer than two histogram bins in the fit range")
    slope, intercept = np.polyfit(np.log(x[sel]), np.log(y[sel]), 1)
    return SlopeFit(float(slope), float(intercept), (k_lo, k_hi), int(sel.sum()))


def write_crossing_csv(rows, path: str | Path) -> None:
    """``rows``: iterable of ``(alpha, n, BernoulliEstimate)``."""
    with open(path, "w", newline="", encoding="ascii") as fh:
        wr = csv.writer(fh)
        wr.writerow(["alpha", "n", "trials", "successes", "p_hat", "ci_low", "ci_high"])
        for alpha, n, e in rows:
            wr.writerow([repr(float(alpha)), n, e.trials, e.successes, repr(e.p_hat),
                         repr(float(e.ci_low)), repr(float(e.ci_high))])
