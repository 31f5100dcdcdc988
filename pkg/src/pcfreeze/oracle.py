"""Exact final distribution of PCF on tiny graphs.

States are pairs of bitmasks ``(frozen, open)``.  Every transition either
opens an edge or freezes a warm cluster, so the chain is acyclic and the
absorption probabilities follow from a single pass over the states in
order of ``popcount(frozen) + popcount(open)``.

Arithmetic is generic: pass ``alpha`` as a :class:`fractions.Fraction` to
get exact rational probabilities.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .engine import Configuration
from .errors import CapacityError, ParameterError
from .graph import GraphTopology

MAX_ELEMENTS = 16


@dataclass(frozen=True)
class StateSpace:
    vertex_count: int
    edges: tuple[tuple[int, int], ...]
    states: tuple[tuple[int, int], ...]
    index: dict
    absorbing: frozenset

    def configuration(self, i: int) -> Configuration:
        frozen, opened = self.states[i]
        n, m = self.vertex_count, len(self.edges)
        return Configuration(np.array([(opened >> e) & 1 for e in range(m)], dtype=bool),
                             np.array([(frozen >> v) & 1 for v in range(n)], dtype=bool))

    def __len__(self):
        return len(self.states)


def clusters(n: int, edges, opened: int) -> list[int]:
    """Vertex bitmasks of the clusters of an open-edge set (singletons included)."""
    parent = list(range(n))

    def root(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e, (u, v) in enumerate(edges):
        if opened >> e & 1:
            parent[root(u)] = root(v)
    groups: dict[int, int] = {}
    for v in range(n):
        r = root(v)
        groups[r] = groups.get(r, 0) | (1 << v)
    return list(groups.values())


def transitions(n: int, edges, state: tuple[int, int]):
    """Yield ``(next_state, kind)`` with kind ``"edge"`` (rate 1) or
    ``"freeze"`` (rate alpha)."""
    frozen, opened = state
    for e, (u, v) in enumerate(edges):
        if not opened >> e & 1 and not (frozen >> u & 1) and not (frozen >> v & 1):
            yield (frozen, opened | (1 << e)), "edge"
    for c in clusters(n, edges, opened):
        if not frozen & c:
            yield (frozen | c, opened), "freeze"


def enumerate_states(g: GraphTopology) -> StateSpace:
    """Breadth-first closure of the all-closed, all-warm state."""
    n, m = g.vertex_count, g.edge_count
    if n + m > MAX_ELEMENTS:
        raise CapacityError(f"V + E = {n + m} exceeds the cap of {MAX_ELEMENTS}")
    edges = tuple((int(u), int(v)) for u, v in g.edges.tolist())
    start = (0, 0)
    seen = {start: 0}
    order = [start]
    absorbing = set()
    queue = deque([start])
    while queue:
        s = queue.popleft()
        nxt = [t for t, _ in transitions(n, edges, s)]
        if not nxt:
            absorbing.add(seen[s])
        for t in nxt:
            if t not in seen:
                seen[t] = len(order)
                order.append(t)
                queue.append(t)
    return StateSpace(n, edges, tuple(order), seen, frozenset(absorbing))


@dataclass(frozen=True)
class FinalDistribution:
    """``probability[i]`` is the chance of absorbing in state ordinal ``i``."""

    probability: dict
    alpha: object

    def total(self):
        return sum(self.probability.values())

    def by_open_mask(self, space: StateSpace) -> dict:
        """Keyed by open-edge bitmask; every absorbing state is all-frozen so
        this is a bijection."""
        return {space.states[i][1]: p for i, p in self.probability.items()}


def jump_chain(space: StateSpace, i: int, alpha) -> list[tuple[int, object]]:
    """Embedded jump chain out of state ``i`` as ``[(j, probability), ...]``."""
    moves = list(transitions(space.vertex_count, space.edges, space.states[i]))
    total = sum(1 if k == "edge" else alpha for _, k in moves)
    return [(space.index[t], (1 if k == "edge" else alpha) / total) for t, k in moves]


def _level(state):
    return bin(state[0]).count("1") + bin(state[1]).count("1")


def final_distribution(space: StateSpace, alpha) -> FinalDistribution:
    """Absorption probabilities from the all-closed, all-warm start state.

    Mass is pushed forward in increasing ``_level`` order, which is a
    topological order because every transition raises it.
    """
    if not alpha > 0:
        raise ParameterError("alpha must be positive")
    order = sorted(range(len(space)), key=lambda i: _level(space.states[i]))
    mass = {0: alpha / alpha}  # unity in alpha's numeric type
    out = {}
    for i in order:
        p = mass.pop(i, None)
        if p is None:
            continue
        if i in space.absorbing:
            out[i] = p
            continue
        for j, q in jump_chain(space, i, alpha):
            mass[j] = mass.get(j, 0) + p * q
    return FinalDistribution(out, alpha)


def marginal(dist: FinalDistribution, space: StateSpace,
             predicate: Callable[[Configuration], bool]):
    """Total final probability of the absorbing states satisfying ``predicate``."""
    acc = 0 * dist.total()
    for i, p in dist.probability.items():
        if predicate(space.configuration(i)):
            acc += p
    return acc


def oracle_for(g: GraphTopology, alpha) -> tuple[StateSpace, FinalDistribution]:
    space = enumerate_states(g)
    return space, final_distribution(space, alpha)
