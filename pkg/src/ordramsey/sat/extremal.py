"""Re-deriving the extremal colorings for NM_4 on 15 and NM_5 on 19 vertices."""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from typing import Mapping, Optional

from ..colorings import TwoColoring, parse
from ..graphs import Edge, complete_graph, nested_matching
from ..routes import nm_free_edge_bound
from .backends import UNLIMITED, Backend, Budget, check_model, enumerate_models
from .cdcl import CDCLSolver, SAT
from .encode import EncodeOptions, encode_arrow

NM4_AT_15 = "nm4-15"
NM5_AT_19 = "nm5-19"
TARGETS = {NM4_AT_15: (4, 15), NM5_AT_19: (5, 19)}

# Blue neighborhoods stated for the symmetric 19-vertex coloring.
CHI2_BLUE_NEIGHBORS: dict[int, set[int]] = {
    8: {3, 5, 11, 12},
    9: {3, 5, 6, 12, 13},
    10: {3, 6, 7, 13, 14, 17},
}
CHI2_VERTEX3_BLUE = {8, 9, 10, 18, 19}
CHI2_NO_BLUE_INSIDE = (1, 2, 4)  # no blue neighbor among 1..10


def chi2_constraints() -> dict[Edge, bool]:
    """Fixed edge colors (True = red) implied by the stated neighborhoods."""
    N = 19
    fixed: dict[Edge, bool] = {}

    def put(u: int, v: int, red: bool) -> None:
        e = (min(u, v), max(u, v))
        if fixed.get(e, red) != red:
            raise ValueError(f"contradictory constraints on {e}")
        fixed[e] = red

    for v, blues in CHI2_BLUE_NEIGHBORS.items():
        for u in range(1, N + 1):
            if u != v:
                put(u, v, u not in blues)
    for u in range(1, N + 1):
        if u != 3:
            put(3, u, u not in CHI2_VERTEX3_BLUE)
    for v in CHI2_NO_BLUE_INSIDE:
        for u in range(1, 11):
            if u != v:
                put(u, v, True)
    return fixed


class ReDerivationError(RuntimeError):
    """The stated structure could not be reproduced."""


@dataclass
class ExtremalFamily:
    target: str
    n: int
    N: int
    colorings: list[TwoColoring]
    complete: bool
    max_red: int = 0
    edge_bound: int = 0
    notes: dict = field(default_factory=dict)

    @property
    def attains_edge_bound(self) -> bool:
        return self.max_red == self.edge_bound


def lexmin_model(inst, seed: int = 0) -> Optional[list[int]]:
    """Lexicographically smallest model (false before true, variable 1 first)."""
    solver = CDCLSolver(inst.variable_count, inst.clauses, seed=seed)
    if solver.solve() != SAT:
        return None
    model = list(solver.model)
    for v in range(1, inst.variable_count + 1):
        if model[v - 1] > 0:
            if solver.solve(assumptions=[-v]) == SAT:
                model = list(solver.model)
            else:
                solver.add_clause([v])
                continue
        solver.add_clause([-v])
    return model


def recover_extremal_colorings(
    target: str,
    constraints: Optional[Mapping[Edge, bool]] = None,
    backend: Optional[Backend] = None,
    budget: Budget = UNLIMITED,
) -> ExtremalFamily:
    """All avoiding colorings on 15 vertices, or the canonical constrained symmetric one on 19.

    ``constraints`` adds fixed edge colors (True = red) on top of the built-in
    ones.  An inconsistent constraint set yields an empty family.
    """
    if target not in TARGETS:
        raise ValueError(f"unknown target {target!r}; choose from {sorted(TARGETS)}")
    n, N = TARGETS[target]
    red, blue = nested_matching(n), complete_graph(3)
    bound = nm_free_edge_bound(n, N)
    if target == NM4_AT_15:
        opts = EncodeOptions(fixed=dict(constraints or {}))
        inst = encode_arrow(N, red, blue, opts)
        result = enumerate_models(inst, backend, budget=budget)
        family = ExtremalFamily(target, n, N, result.colorings, result.complete, edge_bound=bound)
    else:
        fixed = chi2_constraints()
        for e, is_red in (constraints or {}).items():
            e = (min(e), max(e))
            if fixed.get(e, is_red) != is_red:
                return ExtremalFamily(target, n, N, [], True, edge_bound=bound)
            fixed[e] = is_red
        inst = encode_arrow(N, red, blue, EncodeOptions(symmetric=True, fixed=fixed))
        model = lexmin_model(inst)
        colorings = [] if model is None else [check_model(inst, model)]
        family = ExtremalFamily(target, n, N, colorings, True, edge_bound=bound)
    family.max_red = max((c.red_count for c in family.colorings), default=0)
    return family


def pinned_fixture(name: str) -> TwoColoring:
    """Load a pinned coloring shipped with the package (``chi1`` or ``chi2``)."""
    text = resources.files("ordramsey.data").joinpath(f"{name}.txt").read_text(encoding="ascii")
    return parse(text)
