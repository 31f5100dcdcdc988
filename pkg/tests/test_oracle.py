import itertools
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from pcfreeze.errors import CapacityError, ParameterError
from pcfreeze.graph import build_generic, build_grid, named_graph
from pcfreeze.oracle import (clusters, enumerate_states, final_distribution, jump_chain,
                             marginal, oracle_for)


def expected_state_count(g):
    """Reachable states are exactly (frozen set = union of open clusters):
    open the edges first, then freeze any subset of the clusters."""
    n, edges = g.vertex_count, [tuple(e) for e in g.edges.tolist()]
    total = 0
    for mask in range(1 << len(edges)):
        total += 2 ** len(clusters(n, edges, mask))
    return total


def test_single_vertex():
    space, dist = oracle_for(named_graph("vertex"), Fraction(1))
    assert len(space) == 2
    assert marginal(dist, space, lambda c: bool(c.frozen.all())) == 1


def test_single_edge_state_count_and_law():
    space, dist = oracle_for(named_graph("edge"), Fraction(1))
    # closed with ww/wf/fw/ff, open with ww/ff
    assert len(space) == 6
    assert len(space.absorbing) == 2
    assert dist.by_open_mask(space)[1] == Fraction(1, 3)


@pytest.mark.parametrize("alpha", [Fraction(1, 4), Fraction(1), Fraction(4), Fraction(7, 3)])
def test_single_edge_closed_form(alpha):
    space, dist = oracle_for(named_graph("edge"), alpha)
    assert dist.by_open_mask(space)[1] == 1 / (1 + 2 * alpha)


def test_single_edge_large_alpha():
    space, dist = oracle_for(named_graph("edge"), 1e9)
    assert dist.by_open_mask(space)[1] < 1e-8


def test_p3_state_count_and_pinned_law():
    g = named_graph("p3")
    space, dist = oracle_for(g, Fraction(1))
    assert len(space) == 18 == expected_state_count(g)
    law = dist.by_open_mask(space)
    assert law == {0: Fraction(7, 15), 1: Fraction(1, 5), 2: Fraction(1, 5), 3: Fraction(2, 15)}
    both = marginal(dist, space, lambda c: bool(c.edge_open.all()))
    assert both == Fraction(2, 15)


@pytest.mark.parametrize("name", ["vertex", "edge", "p3", "p4", "c3", "c4", "s3"])
def test_state_counts_match_characterisation(name):
    g = named_graph(name)
    assert len(enumerate_states(g)) == expected_state_count(g)


@pytest.mark.parametrize("name", ["edge", "p3", "p4", "c3", "c4", "s3"])
def test_structure(name):
    g = named_graph(name)
    space = enumerate_states(g)
    full = (1 << g.vertex_count) - 1
    for i, (frozen, opened) in enumerate(space.states):
        # absorbing iff everything is frozen
        assert (i in space.absorbing) == (frozen == full)
        jumps = jump_chain(space, i, Fraction(3, 2))
        if jumps:
            assert sum(p for _, p in jumps) == 1
        for j, _ in jumps:
            f2, o2 = space.states[j]
            # acyclic: frozen and open sets only grow, and something grows
            assert f2 & frozen == frozen and o2 & opened == opened
            assert (f2, o2) != (frozen, opened)


@given(st.sampled_from(["edge", "p3", "p4", "c3", "c4", "s3"]),
       st.fractions(min_value=Fraction(1, 20), max_value=20))
def test_total_mass_one(name, alpha):
    if alpha <= 0:
        return
    space, dist = oracle_for(named_graph(name), alpha)
    assert dist.total() == 1
    assert marginal(dist, space, lambda c: True) == 1
    assert marginal(dist, space, lambda c: False) == 0


@pytest.mark.parametrize("name", ["p4", "c4", "s3"])
def test_float_matches_exact(name):
    space, exact = oracle_for(named_graph(name), Fraction(1, 4))
    _, approx = oracle_for(named_graph(name), 0.25)
    assert abs(approx.total() - 1) < 1e-12
    for i, p in exact.probability.items():
        assert abs(approx.probability[i] - float(p)) < 1e-14


def test_symmetry_of_cycle():
    # rotating the 4-cycle permutes edges; the law must be invariant
    space, dist = oracle_for(named_graph("c4"), Fraction(1))
    law = dist.by_open_mask(space)
    rot = lambda m: ((m << 1) | (m >> 3)) & 0b1111
    for m, p in law.items():
        assert law[rot(m)] == p


def test_capacity_and_alpha_errors():
    with pytest.raises(CapacityError):
        enumerate_states(build_grid(3, 3))
    with pytest.raises(ParameterError):
        final_distribution(enumerate_states(named_graph("edge")), 0)


def test_disconnected_graph_factorises():
    g = build_generic(4, [(0, 1), (2, 3)])
    space, dist = oracle_for(g, Fraction(1))
    law = dist.by_open_mask(space)
    for a, b in itertools.product((0, 1), repeat=2):
        pa = Fraction(1, 3) if a else Fraction(2, 3)
        pb = Fraction(1, 3) if b else Fraction(2, 3)
        assert law[a | (b << 1)] == pa * pb
