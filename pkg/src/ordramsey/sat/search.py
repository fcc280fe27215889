"""Exact ordered Ramsey numbers, closed-form brackets and the goodness auditor."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Callable, Optional

from ..colorings import TwoColoring, block_coloring, verify_avoiding
from ..graphs import (
    OrderedGraph,
    caterpillar_by_decomposition,
    complete_graph,
    enumerate_connected_graphs,
    is_connected,
)
from .backends import Backend, Budget, BuiltinBackend, SolverVerdict, solve
from .cdcl import SAT, UNKNOWN, UNSAT
from .encode import EncodeOptions, encode_arrow, is_monotone_path, pattern_id


# -- closed-form brackets ---------------------------------------------------


def _floor_half_root_sum(b: int, disc: int) -> int:
    """floor((b + sqrt(disc)) / 2) in exact integer arithmetic."""
    return (b + math.isqrt(disc)) // 2


def nm_k3_bounds(n: int) -> tuple[int, int]:
    """Bracket for r(NM_n, K_3) from the anti-diagonal counting bound and the known constructions."""
    if n < 1:
        raise ValueError("n must be positive")
    if n <= 3:
        lo = 4 * n - 1
    elif n == 4:
        lo = 16
    elif n == 5:
        lo = 20
    else:
        lo = 4 * n + 1
    hi = _floor_half_root_sum(6 * n - 3, 20 * n * n - 12 * n + 1) + 1
    return lo, hi


@dataclass(frozen=True)
class Bracket:
    lo: int
    hi: int
    fallback: bool = False  # hi came from the trivial cap


def nm_kn_bounds(m: int, n: int) -> Bracket:
    """Bracket for r(NM_m, K_{n+1}) from the edge-counting argument against Turan's bound."""
    if m < 1 or n < 1:
        raise ValueError("m and n must be positive")
    lo = (2 * m - 1) * (n - 1) + 1
    disc = (4 * m - 3) ** 2 * n * n - 16 * m * m * n + 24 * m * n - 8 * n
    if disc < 0:
        # r(K_2m, K_{n+1}) <= C(2m + n - 1, n)
        return Bracket(lo, math.comb(2 * m + n - 1, n), fallback=True)
    return Bracket(lo, _floor_half_root_sum(4 * m * n - 3 * n, disc) + 1)


# -- arrowing decisions -----------------------------------------------------


@dataclass
class Decision:
    """Outcome of "does K_N arrow (red, blue)?"; ``arrows`` is None when unknown."""

    N: int
    arrows: Optional[bool]
    witness: Optional[TwoColoring] = None
    verdicts: list[tuple[str, str]] = field(default_factory=list)  # (mode, status)
    diagnostic: str = ""
    seconds: float = 0.0


def decide_arrowing(
    N: int,
    red: OrderedGraph,
    blue: OrderedGraph,
    backend: Optional[Backend] = None,
    budget: Budget = Budget(),
    use_symmetry: bool = True,
) -> Decision:
    """Symmetric instance first as a cheap witness finder, then the full one.

    Only the full (non-symmetric) instance can establish that K_N arrows.
    """
    start = time.monotonic()
    d = _decide(N, red, blue, backend or BuiltinBackend(), budget, use_symmetry)
    d.seconds = time.monotonic() - start
    return d


def _decide(N, red, blue, backend, budget, use_symmetry) -> Decision:
    d = Decision(N, None)
    if max(red.n, blue.n) > N:
        # no placement of the larger pattern: color everything to dodge the smaller one
        small_red = red.n <= N
        d.witness = TwoColoring.from_red_edges(N, []) if small_red else TwoColoring.from_blue_edges(N, [])
        if verify_avoiding(d.witness, red, blue).avoiding:
            d.arrows = False
            d.verdicts.append(("trivial", SAT))
            return d
    labels = is_monotone_path(red)
    if use_symmetry:
        sym = encode_arrow(N, red, blue, EncodeOptions(symmetric=True, path_labels=labels))
        v = solve(sym, backend, budget)
        d.verdicts.append(("symmetric", v.status))
        if v.satisfiable:
            d.arrows = False
            d.witness = _decode(sym, v)
            return d
    full = encode_arrow(N, red, blue, EncodeOptions(path_labels=labels))
    assert not full.symmetric
    v = solve(full, backend, budget)
    d.verdicts.append(("full", v.status))
    if v.satisfiable:
        d.arrows = False
        d.witness = _decode(full, v)
    elif v.unsatisfiable:
        d.arrows = True
    else:
        d.diagnostic = v.diagnostic
    return d


def _decode(inst, verdict: SolverVerdict) -> TwoColoring:
    from .backends import check_model

    return check_model(inst, verdict.model)


@dataclass
class SearchReport:
    red_id: str
    blue_id: str
    lo: int
    hi: Optional[int]
    witness: Optional[TwoColoring] = None  # avoiding coloring on lo - 1 vertices
    decisions: dict[int, Decision] = field(default_factory=dict)
    unknown: list[int] = field(default_factory=list)

    @property
    def exact(self) -> Optional[int]:
        if self.hi is not None and self.lo == self.hi and not self.unknown:
            return self.lo
        return None

    def describe(self) -> str:
        if self.exact is not None:
            return str(self.exact)
        hi = "?" if self.hi is None else str(self.hi)
        return f"{self.lo} ≤ r ≤ {hi}"


def ordered_ramsey(
    red: OrderedGraph,
    blue: OrderedGraph,
    lo_hint: Optional[int] = None,
    hi_hint: Optional[int] = None,
    budget: Budget = Budget(),
    backend: Optional[Backend] = None,
    use_symmetry: bool = True,
    max_n: int = 64,
    on_decision: Optional[Callable[[Decision], None]] = None,
    prior: Optional[dict[int, Decision]] = None,
) -> SearchReport:
    """Least N such that every coloring of K_N has a red ``red`` or a blue ``blue``.

    Bisection relies on monotonicity: a coloring of K_{N+1} restricts to K_N.
    Hints only narrow where the search looks; both ends of the final answer are
    solved explicitly (SAT just below, UNSAT at the value).
    """
    report = SearchReport(pattern_id(red), pattern_id(blue), lo=1, hi=None)
    cache = report.decisions
    cache.update(prior or {})

    def decide(N: int) -> Decision:
        if N not in cache:
            if N < 1:
                cache[N] = Decision(N, False)
            else:
                cache[N] = decide_arrowing(N, red, blue, backend, budget, use_symmetry)
                if on_decision is not None:
                    on_decision(cache[N])
        return cache[N]

    edgeless = [g.n for g in (red, blue) if g.edge_count == 0]
    if edgeless:
        # an edgeless pattern appears as soon as there is room for its vertices
        report.lo = report.hi = min(edgeless)
        return _finish(report)
    low = max(1, lo_hint or 1)  # candidate smallest arrowing N
    high = None
    if low > 1:
        d = decide(low - 1)
        if d.arrows:
            low, high = 1, low - 1
        elif d.arrows is None:
            report.unknown.append(low - 1)
    if high is None and hi_hint is not None:
        d = decide(hi_hint)
        if d.arrows:
            high = hi_hint
        elif d.arrows is False:
            low = max(low, hi_hint + 1)
        else:
            report.unknown.append(hi_hint)
    if high is None:
        probe = max(low, 2)
        while True:
            if probe > max_n:
                report.lo, report.hi = low, None
                return _finish(report)
            d = decide(probe)
            if d.arrows:
                high = probe
                break
            if d.arrows is None:
                report.unknown.append(probe)
                report.lo, report.hi = low, None
                return _finish(report)
            low = probe + 1
            probe *= 2
    while low < high:
        mid = (low + high) // 2
        d = decide(mid)
        if d.arrows:
            high = mid
        elif d.arrows is False:
            low = mid + 1
        else:
            report.unknown.append(mid)
            break
    report.lo, report.hi = low, high
    if low == high and not report.unknown:
        # pin both sides of the exact value
        below = decide(low - 1)
        at = decide(low)
        if below.arrows is not False or at.arrows is not True:
            report.unknown.extend(n for n, d in ((low - 1, below), (low, at)) if d.arrows is None)
    return _finish(report)


def _finish(report: SearchReport) -> SearchReport:
    below = report.decisions.get(report.lo - 1)
    if below is not None and below.arrows is False:
        report.witness = below.witness
    report.unknown = sorted(set(report.unknown))
    return report


# -- goodness ---------------------------------------------------------------

GOOD = "good"
NOT_GOOD = "not-good"
UNKNOWN_GOODNESS = "unknown"


@dataclass
class GoodnessVerdict:
    status: str
    target: int  # (m-1)(n-1)+1
    lower: int  # proven lower bound on r(G, K_n)
    upper: Optional[int] = None
    witness: Optional[TwoColoring] = None

    @property
    def value(self) -> Optional[int]:
        return self.lower if self.upper == self.lower else None


def goodness_check(
    g: OrderedGraph,
    n: int,
    budget: Budget = Budget(),
    backend: Optional[Backend] = None,
    exact: bool = False,
) -> GoodnessVerdict:
    """Is r(g, K_n) equal to (m-1)(n-1)+1?

    The block coloring with n-1 red cliques of m-1 vertices gives the lower
    bound for free, so only K_target needs solving.
    """
    if not is_connected(g):
        raise ValueError("goodness is defined for connected ordered graphs only")
    if n < 1:
        raise ValueError("n must be positive")
    m = g.n
    target = (m - 1) * (n - 1) + 1
    if m == 1 or n == 1:
        # a single vertex is a red copy / an empty set of blue edges is a blue copy
        return GoodnessVerdict(GOOD, target, target, target)
    lower_witness = block_coloring(m - 1, n - 1)
    if not verify_avoiding(lower_witness, g, complete_graph(n)).avoiding:
        raise AssertionError("block coloring failed to avoid a connected pattern")
    d = decide_arrowing(target, g, complete_graph(n), backend, budget)
    if d.arrows:
        return GoodnessVerdict(GOOD, target, target, target, lower_witness)
    if d.arrows is None:
        return GoodnessVerdict(UNKNOWN_GOODNESS, target, target)
    verdict = GoodnessVerdict(NOT_GOOD, target, target + 1, None, d.witness)
    if exact:
        rep = ordered_ramsey(g, complete_graph(n), lo_hint=target + 1, budget=budget, backend=backend)
        verdict.lower = rep.lo
        verdict.upper = rep.hi
        if rep.witness is not None:
            verdict.witness = rep.witness
    return verdict


@dataclass
class ScanReport:
    n: int
    max_vertices: int
    rows: list[tuple[OrderedGraph, str, bool]] = field(default_factory=list)

    @property
    def good_noncaterpillars(self) -> list[OrderedGraph]:
        return [g for g, status, cat in self.rows if status == GOOD and not cat]

    @property
    def nongood_caterpillars(self) -> list[OrderedGraph]:
        return [g for g, status, cat in self.rows if status == NOT_GOOD and cat]

    @property
    def unknowns(self) -> list[OrderedGraph]:
        return [g for g, status, _ in self.rows if status == UNKNOWN_GOODNESS]

    def table(self) -> dict[tuple[str, bool], int]:
        counts: dict[tuple[str, bool], int] = {}
        for _, status, cat in self.rows:
            counts[(status, cat)] = counts.get((status, cat), 0) + 1
        return counts

    @property
    def dichotomy_holds(self) -> bool:
        return not self.good_noncaterpillars and not self.nongood_caterpillars and not self.unknowns


MAX_SCAN_VERTICES = 6


def scan_good_graphs(
    max_vertices: int,
    n: int,
    budget: Budget = Budget(),
    backend: Optional[Backend] = None,
    min_vertices: int = 2,
) -> ScanReport:
    """Goodness of every connected ordered graph, cross-tabulated with caterpillar shape."""
    if max_vertices > MAX_SCAN_VERTICES:
        raise ValueError(f"scan is limited to {MAX_SCAN_VERTICES} vertices")
    report = ScanReport(n, max_vertices)
    for v in range(min_vertices, max_vertices + 1):
        for g in enumerate_connected_graphs(v):
            verdict = goodness_check(g, n, budget, backend)
            report.rows.append((g, verdict.status, caterpillar_by_decomposition(g) is not None))
    return report
