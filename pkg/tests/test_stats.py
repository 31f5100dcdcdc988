import csv
import math

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, strategies as st

from pcfreeze.engine import Configuration
from pcfreeze.errors import BracketError, ContractError, DomainError, ParameterError
from pcfreeze.graph import build_grid, grid_sides
from pcfreeze.stats import (BernoulliEstimate, ReplicaPlan, crossing_grid, estimate_alpha_c,
                            estimate_crossing_prob, has_lr_crossing, histogram_slope, run_one,
                            run_replicas, size_counts, size_histogram, write_crossing_csv)


def bfs_crossing(g, edge_open):
    h = nx.Graph()
    h.add_nodes_from(range(g.vertex_count))
    h.add_edges_from(map(tuple, g.edges[np.asarray(edge_open, bool)]))
    left, right = grid_sides(g)
    right = set(right.tolist())
    seen = set()
    for s in left.tolist():
        if s in seen:
            continue
        comp = nx.node_connected_component(h, s)
        if comp & right:
            return True
        seen |= comp
    return False


def config(g, edge_open):
    return Configuration(np.asarray(edge_open, bool), np.zeros(g.vertex_count, bool))


# ------------------------------------------------------------- crossings

def test_crossing_matches_bfs_on_random_configs():
    rng = np.random.default_rng(11)
    agree = 0
    for i in range(1000):
        w, h = int(rng.integers(1, 9)), int(rng.integers(1, 9))
        g = build_grid(w, h)
        e = rng.random(g.edge_count) < rng.uniform(0.3, 0.7)
        assert has_lr_crossing(config(g, e), g) == bfs_crossing(g, e), (w, h, i)
        agree += 1
    assert agree == 1000


def test_crossing_degenerate_cases():
    g = build_grid(1, 5)
    assert has_lr_crossing(config(g, np.zeros(g.edge_count)), g)
    g = build_grid(6, 4)
    assert not has_lr_crossing(config(g, np.zeros(g.edge_count)), g)
    assert has_lr_crossing(config(g, np.ones(g.edge_count)), g)
    with pytest.raises(ContractError):
        has_lr_crossing(config(g, np.ones(3)), g)


def test_crossing_straight_row():
    g = build_grid(5, 3)
    idx = g.edge_index()
    e = np.zeros(g.edge_count, bool)
    for x in range(4):
        e[idx[(5 + x, 5 + x + 1)]] = True
    assert has_lr_crossing(config(g, e), g)
    e[idx[(5 + 2, 5 + 3)]] = False
    assert not has_lr_crossing(config(g, e), g)


def test_crossing_grid_shape():
    g = crossing_grid(8)
    assert (g.params["width"], g.params["height"]) == (9, 8)
    with pytest.raises(ParameterError):
        crossing_grid(1)


@pytest.mark.parametrize("mode,t", [("pcf", None), ("warm", None), ("percolation", 0.6)])
def test_batch_crossings_match_single_runs(mode, t):
    n, alpha, seed = 10, 0.6, 77
    est = estimate_crossing_prob(n, alpha, 60, seed, mode=mode, t=t, first_stream=5)
    g = crossing_grid(n)
    plan = ReplicaPlan(g, alpha, 60, seed, variant=mode,
                       t=math.inf if t is None else t, first_stream=5)
    hits = sum(has_lr_crossing(r.final, g) for r in run_replicas(plan))
    assert est.successes == hits


def test_crossing_thread_determinism():
    a = estimate_crossing_prob(12, 0.55, 700, 3, threads=1)
    b = estimate_crossing_prob(12, 0.55, 700, 3, threads=3)
    assert a == b


def test_self_dual_percolation_crossing_is_half():
    # bond percolation at p = 1/2 on the n x (n+1) grid crosses with probability exactly 1/2
    est = estimate_crossing_prob(24, 1.0, 4000, 5, mode="percolation", t=math.log(2))
    assert abs(est.p_hat - 0.5) < 3.5 * math.sqrt(0.25 / est.trials)


def test_crossing_extremes():
    assert estimate_crossing_prob(24, 5.0, 300, 1).successes == 0
    assert estimate_crossing_prob(24, 0.05, 300, 1).p_hat > 0.95


def test_crossing_errors():
    with pytest.raises(ParameterError):
        estimate_crossing_prob(8, 1.0, 10, 0, mode="percolation")
    with pytest.raises(ParameterError):
        estimate_crossing_prob(8, 0.0, 10, 0)
    with pytest.raises(ParameterError):
        estimate_crossing_prob(8, 1.0, 0, 0)
    with pytest.raises(ParameterError):
        estimate_crossing_prob(8, 1.0, 10, 0, mode="cold")


# -------------------------------------------------------------- replicas

def test_run_replicas_order_and_threads():
    g = build_grid(7, 7)
    plan = ReplicaPlan(g, 0.8, 25, 123)
    one = [r.open_time for r in run_replicas(plan, threads=1)]
    many = [r.open_time for r in run_replicas(plan, threads=4)]
    assert all(np.array_equal(a, b) for a, b in zip(one, many))
    assert np.array_equal(one[9], run_one(plan, 9).open_time)
    sizes = list(run_replicas(plan, map_fn=lambda r: int(r.cluster_sizes.sum())))
    assert sizes == [g.vertex_count] * 25


def test_replica_plan_validation():
    g = build_grid(3, 3)
    for kw in ({"replicas": 0}, {"variant": "hot"}, {"alpha": 0.0}):
        args = {"graph": g, "alpha": 1.0, "replicas": 2, "base_seed": 0} | kw
        with pytest.raises(ParameterError):
            ReplicaPlan(**args)
    with pytest.raises(ParameterError):
        ReplicaPlan(g, 1.0, 2, 0, variant="percolation", t=-1.0)


# ------------------------------------------------------------ estimates

@given(st.integers(1, 5000), st.floats(0, 1), st.sampled_from([0.9, 0.95, 0.99]))
def test_wilson_interval_invariants(n, frac, conf):
    k = int(round(frac * n))
    e = BernoulliEstimate.from_counts(k, n, conf)
    assert 0 <= e.ci_low <= e.p_hat <= e.ci_high <= 1
    assert e.p_hat == k / n
    wider = BernoulliEstimate.from_counts(k, n, 0.999)
    assert wider.ci_low <= e.ci_low + 1e-12 and wider.ci_high >= e.ci_high - 1e-12


def test_wilson_interval_shrinks_and_merges():
    a = BernoulliEstimate.from_counts(40, 100)
    b = BernoulliEstimate.from_counts(400, 1000)
    assert b.ci_high - b.ci_low < a.ci_high - a.ci_low
    m = a.merge(BernoulliEstimate.from_counts(360, 900))
    assert m == b
    assert b.excludes(0.5) and not b.excludes(0.4)
    assert not BernoulliEstimate.from_counts(55, 100).excludes(0.5, 0.99)
    with pytest.raises(ParameterError):
        BernoulliEstimate.from_counts(3, 2)


def test_crossing_csv(tmp_path):
    p = tmp_path / "c.csv"
    write_crossing_csv([(0.5, 8, BernoulliEstimate.from_counts(3, 10))], p)
    rows = list(csv.reader(p.open()))
    assert rows[0] == ["alpha", "n", "trials", "successes", "p_hat", "ci_low", "ci_high"]
    assert rows[1][:5] == ["0.5", "8", "10", "3", "0.3"]


# ------------------------------------------------------------ bisection

def test_alpha_c_bracket_error():
    with pytest.raises(BracketError):
        estimate_alpha_c(64, bracket=(2.0, 3.0), replica_budget=2000, base_seed=1)
    with pytest.raises(ParameterError):
        estimate_alpha_c(8, bracket=(0.6, 0.4))


def test_alpha_c_small_grid():
    res = estimate_alpha_c(12, bracket=(0.2, 1.2), target_width=0.1, replica_budget=30_000,
                           base_seed=4, batch=200)
    assert res.path[:2] == [0.2, 1.2]
    assert res.replicas_used <= 30_000
    assert res.low < res.high
    assert res.width <= 0.1 * (1 + 1e-9) or res.budget_exhausted
    assert res.points[res.low].p_hat > 0.5 > res.points[res.high].p_hat
    assert res.monotone
    assert res.midpoint == pytest.approx(0.5 * (res.low + res.high))


def test_alpha_c_budget_exhaustion():
    res = estimate_alpha_c(8, bracket=(0.2, 1.5), target_width=1e-4, replica_budget=1500,
                           base_seed=2, batch=250)
    assert res.budget_exhausted
    assert res.replicas_used == 1500


# ----------------------------------------------------------- histograms

@given(st.lists(st.integers(1, 3000), min_size=1, max_size=400), st.integers(1, 50),
       st.sampled_from(["cluster", "vertex"]))
def test_histogram_invariants(sizes, min_per_bin, weighting):
    h = size_histogram([np.array(sizes)], min_per_bin, weighting)
    assert h.bins[0][0] == 1 and h.bins[-1][1] == max(sizes)
    for (a0, b0, _, _), (a1, _, _, _) in zip(h.bins, h.bins[1:]):
        assert a1 == b0 + 1
    assert all(c >= min_per_bin for _, _, c, _ in h.bins[:-1])
    assert sum(c for _, _, c, _ in h.bins) == len(sizes) == h.total_clusters
    expect = sum(sizes) if weighting == "vertex" else len(sizes)
    assert h.total_weight == expect
    widths = np.array([b - a + 1 for a, b, _, _ in h.bins])
    assert math.isclose(float((h.densities() * widths).sum()), 1.0, rel_tol=1e-12)


def test_histogram_slopes_of_power_law():
    k = np.arange(1, 200_001)
    counts = np.concatenate([[0], np.floor(1e12 * k ** -2.0).astype(np.int64)])
    cl = histogram_slope(size_histogram(counts, 100, "cluster"), 10, 1e4)
    vx = histogram_slope(size_histogram(counts, 100, "vertex"), 10, 1e4)
    assert abs(cl.slope + 2) < 0.02 and abs(vx.slope + 1) < 0.02
    assert cl.bins_used > 10


def test_histogram_errors(tmp_path):
    with pytest.raises(DomainError):
        size_counts([])
    with pytest.raises(DomainError):
        size_histogram([np.array([], dtype=np.int64)])
    with pytest.raises(ParameterError):
        size_histogram([np.array([1])], 0)
    with pytest.raises(ParameterError):
        size_histogram([np.array([1])], weighting="edge")
    h = size_histogram([np.array([1, 1, 2])], 2)
    with pytest.raises(DomainError):
        histogram_slope(h)
    h.to_csv(tmp_path / "h.csv")
    rows = (tmp_path / "h.csv").read_text().splitlines()
    assert rows[0] == "k_center,k_lo,k_hi,count,density" and len(rows) == 1 + len(h.bins)


def test_size_counts_accumulates_runs():
    g = build_grid(10, 10)
    results = list(run_replicas(ReplicaPlan(g, 0.7, 5, 9)))
    c = size_counts(results)
    assert int((c * np.arange(c.size)).sum()) == 5 * g.vertex_count
