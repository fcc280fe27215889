from itertools import product

import pytest

from ordramsey.colorings import is_symmetric, serialize, verify_avoiding
from ordramsey.graphs import complete_graph, nested_matching
from ordramsey.routes import materialize_routes, nm_free_edge_bound, queue_partition, routes_cover
from ordramsey.sat.encode import EncodeOptions, encode_arrow
from ordramsey.sat.extremal import (
    NM4_AT_15,
    NM5_AT_19,
    chi2_constraints,
    lexmin_model,
    pinned_fixture,
    recover_extremal_colorings,
)


def brute_lexmin(nvars, clauses):
    for bits in product((False, True), repeat=nvars):
        if all(any(bits[abs(l) - 1] == (l > 0) for l in c) for c in clauses):
            return [v if b else -v for v, b in enumerate(bits, start=1)]
    return None


@pytest.mark.parametrize("N, symmetric", [(4, False), (5, False), (6, True)])
def test_lexmin_matches_brute_force(N, symmetric):
    inst = encode_arrow(N, nested_matching(2), complete_graph(3), EncodeOptions(symmetric=symmetric))
    assert lexmin_model(inst) == brute_lexmin(inst.variable_count, inst.clauses)


def test_lexmin_of_unsat_is_none():
    assert lexmin_model(encode_arrow(7, nested_matching(2), complete_graph(3))) is None


def test_chi2_constraints():
    fixed = chi2_constraints()
    assert fixed[(3, 8)] is False and fixed[(3, 18)] is False
    assert fixed[(8, 11)] is False and fixed[(10, 17)] is False
    assert fixed[(8, 9)] is True and fixed[(1, 2)] is True and fixed[(2, 4)] is True
    assert all(1 <= u < v <= 19 for u, v in fixed)


@pytest.mark.parametrize("name, n, N", [("chi1", 4, 15), ("chi2", 5, 19)])
def test_pinned_fixture_is_an_extremal_witness(name, n, N):
    c = pinned_fixture(name)
    assert c.N == N
    assert verify_avoiding(c, nested_matching(n), complete_graph(3)).avoiding
    assert c.red_count == nm_free_edge_bound(n, N)
    part = queue_partition(c.red_graph())
    assert len(part) == n - 1
    routes = materialize_routes(part, N)
    assert routes is not None and routes_cover(routes, c.red_graph())


def test_chi2_is_symmetric_and_meets_constraints():
    c = pinned_fixture("chi2")
    assert is_symmetric(c)
    assert all(c.is_red(u, v) == red for (u, v), red in chi2_constraints().items())


def test_chi2_is_re_derived():
    fam = recover_extremal_colorings(NM5_AT_19)
    assert fam.complete and len(fam.colorings) == 1
    assert serialize(fam.colorings[0]) == serialize(pinned_fixture("chi2"))
    assert fam.attains_edge_bound


def test_chi1_belongs_to_the_census():
    fam = recover_extremal_colorings(NM4_AT_15, constraints={(1, 15): True})
    assert fam.complete
    assert all(c.is_red(1, 15) for c in fam.colorings)
    full = recover_extremal_colorings(NM4_AT_15)
    assert pinned_fixture("chi1") in full.colorings
    assert len(fam.colorings) == sum(1 for c in full.colorings if c.is_red(1, 15))


def test_conflicting_constraints_give_an_empty_family():
    # vertex 3 is stated to see 8 in blue
    fam = recover_extremal_colorings(NM5_AT_19, constraints={(8, 3): True})
    assert fam.colorings == [] and fam.complete and fam.max_red == 0


def test_unknown_target():
    with pytest.raises(ValueError):
        recover_extremal_colorings("nm6-24")


def test_census_has_no_symmetric_coloring():
    fam = recover_extremal_colorings(NM4_AT_15)
    assert len(fam.colorings) == 326
    assert not any(is_symmetric(c) for c in fam.colorings)
    assert sum(1 for c in fam.colorings if c.red_count == fam.edge_bound) == 4
