import xml.etree.ElementTree as ET
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ordramsey.colorings import (
    ColoringFormatError,
    Status,
    TwoColoring,
    all_blue,
    all_red,
    block_coloring,
    chi_blue_edges,
    general_construction_chi,
    hamming_distance,
    is_symmetric,
    parse,
    render_matrix,
    serialize,
    verify_avoiding,
    witness_holds,
)
from ordramsey.graphs import complete_graph, enumerate_connected_graphs, monotone_path, nested_matching
from ordramsey.routes import Route, format_routes

import oracles


@st.composite
def colorings(draw, max_n=9):
    N = draw(st.integers(1, max_n))
    pairs = list(combinations(range(1, N + 1), 2))
    red = draw(st.sets(st.sampled_from(pairs))) if pairs else set()
    return TwoColoring(N, frozenset(red))


@given(colorings())
def test_serialize_round_trip(c):
    assert parse(serialize(c)) == c


@given(colorings())
def test_reflect_is_an_involution(c):
    assert c.reflect().reflect() == c
    assert is_symmetric(c) == (c.reflect() == c)


def test_constructors_and_views():
    c = TwoColoring.from_blue_edges(4, [(2, 1)])
    assert c.color(1, 2) == "B" and c.is_red(3, 4)
    assert c.red_count == 5
    assert c.blue_graph().edges == ((1, 2),)
    assert c.rows() == ["BRR", "RR", "R"]
    assert all_red(3).red_count == 3 and all_blue(3).red_count == 0
    assert hamming_distance(all_red(4), all_blue(4)) == 6


def test_bad_red_edge():
    with pytest.raises(ValueError):
        TwoColoring(3, frozenset({(1, 4)}))


@pytest.mark.parametrize(
    "text, line",
    [
        ("nope\n", 1),
        ("ordered-coloring v1\nM=3\n", 2),
        ("ordered-coloring v1\nN=3\nRR\nRB\n", 4),
        ("ordered-coloring v1\nN=3\nRX\nR\n", 3),
    ],
)
def test_parse_errors_name_the_line(text, line):
    with pytest.raises(ColoringFormatError) as exc:
        parse(text)
    assert exc.value.line == line


def test_parse_skips_route_section():
    c = all_red(4)
    text = serialize(c) + format_routes([Route(1, ((1, 1), (1, 2), (2, 2)))])
    assert parse(text) == c


@settings(max_examples=100, deadline=None)
@given(colorings(max_n=6))
def test_verify_matches_brute_force(c):
    red_pat, blue_pat = nested_matching(2), complete_graph(3)
    v = verify_avoiding(c, red_pat, blue_pat)
    assert v.avoiding == oracles.avoids(set(c.red), c.N, oracles.nm(2), oracles.kn(3))
    assert witness_holds(c, v, red_pat, blue_pat)


def test_red_copy_is_reported_first():
    v = verify_avoiding(TwoColoring(4, frozenset({(1, 4), (2, 3)})), nested_matching(2), complete_graph(3))
    assert v.status is Status.RED_WITNESS
    assert v.witness.map == (1, 2, 3, 4)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_block_coloring_is_a_lower_bound_witness(n):
    # every connected m-vertex pattern is missed by n-1 red cliques of m-1 vertices
    for m in range(2, 6):
        c = block_coloring(m - 1, n - 1)
        for g in enumerate_connected_graphs(m):
            assert verify_avoiding(c, g, complete_graph(n)).avoiding


def test_block_coloring_shape():
    c = block_coloring(3, 2)
    assert c.N == 6 and c.red_count == 6
    with pytest.raises(ValueError):
        block_coloring(0, 2)


@pytest.mark.parametrize("n", [6, 7, 9])
def test_chi_blue_edge_sets(n):
    blue = chi_blue_edges(n)
    square = {(i, j) for i in range(4, 2 * n - 2) for j in range(2 * n + 4, 4 * n - 2)}
    assert square <= blue and len(square) == (2 * n - 6) ** 2
    rect1 = {(i, j) for i in range(3, 10) for j in range(2 * n - 2, 2 * n + 1)}
    assert rect1 <= blue
    assert all(1 <= i < j <= 4 * n for i, j in blue)


def test_chi_needs_n_at_least_six():
    with pytest.raises(ValueError):
        general_construction_chi(5)


def test_chi_six_is_symmetric_and_avoiding():
    c = general_construction_chi(6)
    assert c.N == 24 and is_symmetric(c)
    assert verify_avoiding(c, nested_matching(6), complete_graph(3)).avoiding
    assert not verify_avoiding(c, nested_matching(5), complete_graph(3)).avoiding


def test_ascii_render():
    out = render_matrix(block_coloring(2, 2))
    lines = out.splitlines()
    assert lines[0].strip() == "1234"
    assert lines[1].endswith("\\#..")
    assert lines[4].endswith("\\")


def test_svg_render_is_wellformed():
    c = block_coloring(2, 2)
    routes = [Route(1, ((1, 1), (1, 2), (2, 2), (2, 3), (2, 4), (3, 4), (4, 4)))]
    root = ET.fromstring(render_matrix(c, "svg", routes))
    assert root.tag.endswith("svg")
    assert any(el.tag.endswith("polyline") for el in root.iter())


def test_unknown_render_style():
    with pytest.raises(ValueError):
        render_matrix(all_red(2), "png")


def test_path_is_found_in_red_clique():
    v = verify_avoiding(all_red(5), monotone_path(5), complete_graph(2))
    assert v.status is Status.RED_WITNESS
