from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ordramsey.colorings import all_red, general_construction_chi
from ordramsey.graphs import OrderedGraph, complete_graph, contains_ordered_subgraph, nested_matching
from ordramsey.routes import (
    PreconditionError,
    QueuePartition,
    Route,
    antidiagonal_profile,
    chromatic_lower_bound_from_coloring,
    extremal_nm_free_graph,
    format_routes,
    materialize_routes,
    max_nested_matching,
    nested,
    nm_free_edge_bound,
    parse_routes,
    queue_partition,
    routes_cover,
)

import oracles


@st.composite
def graphs(draw, max_n=9):
    n = draw(st.integers(2, max_n))
    pairs = list(combinations(range(1, n + 1), 2))
    return OrderedGraph(n, tuple(draw(st.sets(st.sampled_from(pairs)))))


def test_nesting_is_strict():
    assert nested((1, 4), (2, 3)) and nested((2, 3), (1, 4))
    assert not nested((1, 4), (1, 3))
    assert not nested((1, 3), (2, 4))
    assert not nested((1, 2), (3, 4))


@settings(max_examples=200, deadline=None)
@given(graphs())
def test_first_fit_meets_the_chain_bound(g):
    p = queue_partition(g)
    size, chain = max_nested_matching(g)
    assert p.is_valid_for(g)
    assert len(p) == size
    if g.edge_count <= 14:
        assert size == oracles.brute_max_nested(g.edges)


def test_partition_validity_rejects_nested_class():
    g = nested_matching(2)
    assert not QueuePartition((((1, 4), (2, 3)),)).is_valid_for(g)
    assert not QueuePartition((((1, 4),),)).is_valid_for(g)


@pytest.mark.parametrize("n, N", [(2, 4), (3, 9), (4, 12), (3, 16)])
def test_extremal_graph_routes(n, N):
    g = extremal_nm_free_graph(n, N)
    assert g.edge_count == nm_free_edge_bound(n, N)
    p = queue_partition(g)
    assert len(p) == n - 1
    routes = materialize_routes(p, N)
    assert routes is not None
    assert all(r.is_staircase(N) for r in routes)
    assert routes_cover(routes, g)


def test_route_shape_for_two_queues():
    # two queues on nine vertices: the outer route hugs the top-right corner
    routes = materialize_routes(queue_partition(extremal_nm_free_graph(3, 9)), 9)
    assert [r.index for r in routes] == [1, 2]
    assert routes[0].positions[0] == (1, 1) and routes[0].positions[-1] == (9, 9)
    assert routes[1].positions[0] == (2, 2) and routes[1].positions[-1] == (8, 8)
    assert not set(routes[0].positions) & set(routes[1].positions)


def test_too_many_classes_for_routes():
    assert materialize_routes(queue_partition(complete_graph(4)), 4) is not None
    p = QueuePartition((((1, 2),), ((2, 3),), ((3, 4),)))
    assert materialize_routes(p, 5) is None


def test_staircase_check():
    assert Route(1, ((1, 1), (1, 2), (2, 2))).is_staircase(2)
    assert not Route(1, ((1, 1), (2, 2))).is_staircase(2)
    assert not Route(2, ((1, 1), (1, 2), (2, 2))).is_staircase(2)


def test_routes_text_round_trip():
    routes = materialize_routes(queue_partition(extremal_nm_free_graph(3, 10)), 10)
    assert parse_routes(format_routes(routes)) == routes
    assert parse_routes("no routes here") == []


def test_overlapping_routes_do_not_cover():
    r = Route(1, ((1, 1), (1, 2), (2, 2)))
    assert not routes_cover([r, r], OrderedGraph(2, ((1, 2),)))


@pytest.mark.parametrize("N", range(4, 8))
def test_edge_bound_for_nm2_by_brute_force(N):
    # the largest edge set with no two nested edges, by exhaustive search
    pairs = list(combinations(range(1, N + 1), 2))
    conflict = [sum(1 << j for j, f in enumerate(pairs) if nested(e, f)) for e in pairs]
    best = 0

    def grow(i, chosen, count):
        nonlocal best
        if count + (len(pairs) - i) <= best:
            return
        if i == len(pairs):
            best = max(best, count)
            return
        if not conflict[i] & chosen:
            grow(i + 1, chosen | 1 << i, count + 1)
        grow(i + 1, chosen, count)

    grow(0, 0, 0)
    assert best == nm_free_edge_bound(2, N)


def test_edge_bound_values():
    assert nm_free_edge_bound(4, 15) == 69
    assert nm_free_edge_bound(5, 19) == 116
    with pytest.raises(ValueError):
        nm_free_edge_bound(3, 5)


@settings(max_examples=100, deadline=None)
@given(graphs(max_n=10))
def test_antidiagonals_are_chains(g):
    prof = antidiagonal_profile(g)
    assert sum(prof.values()) == g.edge_count
    assert max(prof.values(), default=0) <= max_nested_matching(g)[0]


def test_chi_routes_cover():
    c = general_construction_chi(6)
    g = c.red_graph()
    p = queue_partition(g)
    assert len(p) <= 5
    routes = materialize_routes(p, c.N)
    assert routes is not None and routes_cover(routes, g)
    assert contains_ordered_subgraph(g, nested_matching(6)) is None


def test_chromatic_bound_rejects_non_witness():
    with pytest.raises(PreconditionError) as exc:
        chromatic_lower_bound_from_coloring(all_red(8), 3)
    assert not exc.value.verdict.avoiding
