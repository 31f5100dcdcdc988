"""Event-driven PCF, warm PCF, plain percolation and shared-clock coupling.

Every clock is pre-sampled and the events are processed once in time order
(ties: edge before vertex, then by index).  A component is represented by a
union-find root carrying its size, its minimum-priority ("label") vertex, a
frozen flag and a touches-boundary flag.  Only the label vertex's clock can
freeze a component.

Trajectories are monotone (an edge opens at most once, a vertex freezes at
most once), so a run is fully described by per-edge opening times and
per-vertex freezing times; :class:`RunResult` keeps both and
:meth:`RunResult.at` rebuilds the configuration at any time.
"""
from __future__ import annotations

import time as _time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from . import _kernels as K
from .errors import ContractError, ParameterError
from .graph import GraphTopology, PriorityOrder, induced_subgraph

_U64 = 2**64


def _seed_u64(seed: int) -> np.uint64:
    return np.uint64(int(seed) % _U64)


@dataclass(frozen=True, eq=False)
class ClockSet:
    """One Exp(alpha) clock per vertex and one Exp(1) clock per edge."""

    vertex_clock: np.ndarray
    edge_clock: np.ndarray
    alpha: float
    seed: int
    stream_id: int

    def subset(self, vmap: np.ndarray, emap: np.ndarray) -> "ClockSet":
        return ClockSet(self.vertex_clock[vmap], self.edge_clock[emap],
                        self.alpha, self.seed, self.stream_id)

    def with_clocks(self, vertex_clock=None, edge_clock=None) -> "ClockSet":
        """Copy with some clocks overridden (handy for forcing event orders)."""
        vc = self.vertex_clock if vertex_clock is None else np.asarray(vertex_clock, dtype=float)
        ec = self.edge_clock if edge_clock is None else np.asarray(edge_clock, dtype=float)
        return ClockSet(vc, ec, self.alpha, self.seed, self.stream_id)


def sample_clocks(g: GraphTopology, alpha: float, seed: int, stream_id: int = 0) -> ClockSet:
    """Counter-based clocks: value ``i`` of a stream depends only on
    ``(seed, stream_id, kind, i)``, so any subset can be regenerated."""
    if not alpha > 0:
        raise ParameterError(f"alpha must be positive, got {alpha}")
    vc = np.empty(g.vertex_count)
    ec = np.empty(g.edge_count)
    s = _seed_u64(seed)
    K.fill_stream(s, stream_id, K.VERTEX_STREAM, float(alpha), vc)
    K.fill_stream(s, stream_id, K.EDGE_STREAM, 1.0, ec)
    return ClockSet(vc, ec, float(alpha), int(seed), int(stream_id))


def clocks_from_arrays(vertex_clock: Sequence[float], edge_clock: Sequence[float],
                       alpha: float = 1.0) -> ClockSet:
    return ClockSet(np.asarray(vertex_clock, dtype=float),
                    np.asarray(edge_clock, dtype=float), float(alpha), 0, -1)


@dataclass(eq=False)
class Configuration:
    """Edge states (open/closed) and vertex states (warm/frozen) at ``time``."""

    edge_open: np.ndarray
    frozen: np.ndarray
    time: float = np.inf

    def __eq__(self, other):
        return (np.array_equal(self.edge_open, other.edge_open)
                and np.array_equal(self.frozen, other.frozen))

    def dominates(self, other: "Configuration") -> bool:
        """``self >= other``: every edge open in ``other`` is open here and
        every vertex warm in ``other`` is warm here."""
        return bool(np.all(self.edge_open >= other.edge_open)
                    and np.all(~self.frozen >= ~other.frozen))


@dataclass(eq=False)
class RunResult:
    final: Configuration
    open_time: np.ndarray
    freeze_time: np.ndarray
    cluster_sizes: np.ndarray
    root_cluster_size: int
    root_touched_boundary: bool
    event_count: int
    wall_time: float
    trajectory: np.ndarray | None = field(default=None, repr=False)

    def at(self, t: float) -> Configuration:
        return Configuration(self.open_time <= t, self.freeze_time <= t, t)

    def event_times(self) -> np.ndarray:
        ts = np.concatenate([self.open_time, self.freeze_time])
        return np.unique(ts[np.isfinite(ts)])


def _as_rank(g: GraphTopology, priorities: PriorityOrder | None) -> np.ndarray:
    if priorities is None:
        return np.arange(g.vertex_count, dtype=np.int64)
    if priorities.rank.shape[0] != g.vertex_count:
        raise ContractError("priority order does not match the vertex count")
    return np.ascontiguousarray(priorities.rank, dtype=np.int64)


def _run(g, priorities, clocks, t_max, warm, record):
    if clocks.vertex_clock.shape[0] != g.vertex_count or clocks.edge_clock.shape[0] != g.edge_count:
        raise ContractError("clock set is not sized to this graph")
    t_max = np.inf if t_max is None else float(t_max)
    rank = _as_rank(g, priorities)
    eu = np.ascontiguousarray(g.edges[:, 0])
    ev = np.ascontiguousarray(g.edges[:, 1])
    boundary = np.array(g.boundary_mask)
    start = _time.perf_counter()
    sort = K.event_order if g.vertex_count + g.edge_count < 2**31 else K.event_order_wide
    order = sort(clocks.edge_clock, clocks.vertex_clock)
    (open_time, freeze_time, sizes, root_touch, root_size, count,
     lt, lk, li, ll) = K.simulate(g.vertex_count, eu, ev, rank, clocks.vertex_clock,
                                  clocks.edge_clock, boundary, warm, t_max, order, record)
    wall = _time.perf_counter() - start
    traj = None
    if record:
        traj = np.zeros(count, dtype=[("t", "f8"), ("kind", "i1"), ("index", "i8"), ("label", "i8")])
        traj["t"], traj["kind"], traj["index"], traj["label"] = lt, lk, li, ll
    end = t_max if np.isfinite(t_max) else np.inf
    final = Configuration(np.isfinite(open_time), np.isfinite(freeze_time), end)
    return RunResult(final, open_time, freeze_time, np.sort(sizes), int(root_size),
                     bool(root_touch), int(count), wall, traj)


def run_pcf(g: GraphTopology, priorities: PriorityOrder | None, clocks: ClockSet,
            t_max: float = np.inf, record: bool = False) -> RunResult:
    """PCF with free boundary: every component freezes when its label fires."""
    return _run(g, priorities, clocks, t_max, False, record)


def run_warm_pcf(g: GraphTopology, priorities: PriorityOrder | None, clocks: ClockSet,
                 t_max: float = np.inf, record: bool = False) -> RunResult:
    """Warm PCF: components containing a boundary vertex never freeze."""
    return _run(g, priorities, clocks, t_max, True, record)


def run_percolation(g: GraphTopology, clocks: ClockSet, t: float) -> Configuration:
    """Plain bond percolation at time ``t`` (edge open iff its clock <= t)."""
    if t < 0:
        raise ParameterError("t must be non-negative")
    if clocks.edge_clock.shape[0] != g.edge_count:
        raise ContractError("clock set is not sized to this graph")
    return Configuration(clocks.edge_clock <= t, np.zeros(g.vertex_count, dtype=bool), t)


def run_coupled(g: GraphTopology, subgraphs, priorities: PriorityOrder | None,
                clocks: ClockSet, variant: str = "warm") -> list[RunResult]:
    """Run ``variant`` on each subgraph with the clocks of the ambient ``g``.

    ``subgraphs`` holds vertex sets or ``(vertices, edges)`` pairs (induced
    when edges are omitted).  Results are lifted back to ``g``: outside a
    subgraph, warm runs see open edges and warm vertices, PCF runs see closed
    edges and frozen vertices, so results on different subgraphs can be
    compared with :meth:`Configuration.dominates`.
    """
    if variant not in ("pcf", "warm"):
        raise ParameterError(f"unknown variant {variant!r}")
    rank = _as_rank(g, priorities)
    out = []
    for spec in subgraphs:
        if isinstance(spec, tuple) and len(spec) == 2 and not np.isscalar(spec[0]):
            verts, edges = spec
        else:
            verts, edges = spec, None
        h, vmap, emap = induced_subgraph(g, verts, edges)
        if variant == "pcf":
            h = GraphTopology(h.vertex_count, h.edges, np.empty(0, dtype=np.int64), "generic", {})
        # relative order of the ambient ranks is preserved
        sub_rank = np.argsort(np.argsort(rank[vmap], kind="stable"), kind="stable")
        res = _run(h, PriorityOrder(sub_rank.astype(np.int64)), clocks.subset(vmap, emap),
                   np.inf, variant == "warm", False)
        out.append(_lift(g, res, vmap, emap, variant))
    return out


def _lift(g, res, vmap, emap, variant):
    if variant == "warm":
        open_time = np.zeros(g.edge_count)
        freeze_time = np.full(g.vertex_count, np.inf)
    else:
        open_time = np.full(g.edge_count, np.inf)
        freeze_time = np.zeros(g.vertex_count)
    open_time[emap] = res.open_time
    freeze_time[vmap] = res.freeze_time
    final = Configuration(np.isfinite(open_time), np.isfinite(freeze_time), np.inf)
    return RunResult(final, open_time, freeze_time, res.cluster_sizes, res.root_cluster_size,
                     res.root_touched_boundary, res.event_count, res.wall_time)


def tree_root_cluster(d: int, depth: int, alpha: float, seed: int, stream_id: int = 0,
                      size_cap: int | None = None) -> tuple[int, bool, bool]:
    """Root cluster of PCF on the truncated d-ary tree.

    Equivalent to ``run_pcf`` on ``build_rooted_tree(d, depth)`` with
    ``sample_clocks(..., seed, stream_id)`` but only touches the clocks of the
    root cluster and its outer boundary, so depth 30 is affordable.  Returns
    ``(size, touched_boundary, censored)``; exploration stops once the size
    exceeds ``size_cap`` and the sample is then marked censored.
    """
    sizes, touched, censored = tree_root_clusters(d, depth, alpha, seed, 1, stream_id, size_cap)
    return int(sizes[0]), bool(touched[0]), bool(censored[0])


def tree_root_clusters(d: int, depth: int, alpha: float, seed: int, replicas: int,
                       first_stream: int = 0, size_cap: int | None = None,
                       stack_cap: int = 1 << 22):
    """Vectorised :func:`tree_root_cluster` over streams ``first_stream + i``."""
    if not alpha > 0:
        raise ParameterError("alpha must be positive")
    if d < 2 or depth < 0:
        raise ParameterError("need d >= 2 and depth >= 0")
    cap = np.iinfo(np.int64).max if size_cap is None else int(size_cap)
    sizes, touched, censored = K.batch_tree_root_clusters(
        d, depth, float(alpha), _seed_u64(seed), first_stream, replicas, stack_cap, cap)
    if size_cap is None and censored.any():
        raise ContractError("root cluster exceeded the exploration stack")
    return sizes, touched, censored


def final_edge_masks(g: GraphTopology, alpha: float, seed: int, replicas: int,
                     first_stream: int = 0, warm: bool = False) -> np.ndarray:
    """Bitmask of open edges in the final configuration for many replicas of a
    small graph (``E <= 62``).  Same clocks as ``sample_clocks``."""
    if g.edge_count > 62:
        raise ContractError("bitmask batches need at most 62 edges")
    if not alpha > 0:
        raise ParameterError("alpha must be positive")
    boundary = np.array(g.boundary_mask) if warm else np.zeros(g.vertex_count, dtype=np.bool_)
    return K.batch_final_masks(g.vertex_count, np.ascontiguousarray(g.edges[:, 0]),
                               np.ascontiguousarray(g.edges[:, 1]),
                               np.arange(g.vertex_count, dtype=np.int64), float(alpha),
                               _seed_u64(seed), first_stream, replicas, boundary, warm)


def write_trajectory(result: RunResult, path: str | Path) -> None:
    """One event per line: ``t kind index component_label``."""
    if result.trajectory is None:
        raise ContractError("run was not recorded; pass record=True")
    kinds = {0: "edge", 1: "vertex"}
    with open(path, "w", encoding="ascii") as fh:
        for t, k, i, lab in result.trajectory.tolist():
            fh.write(f"{t!r} {kinds[k]} {i} {lab}\n")
