"""Red/blue colorings of complete ordered graphs.

A coloring of the pairs of ``1..N`` is stored as its red edge set; every other
pair is blue.  The text format is an upper-triangular matrix::

    ordered-coloring v1
    N=4
    RBB
    BB
    R

where line ``i`` lists the colors of ``{i, i+1}, ..., {i, N}``.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from itertools import combinations
from typing import Iterable, Optional, Union
from xml.sax.saxutils import escape

from .graphs import Edge, Embedding, OrderedGraph, contains_ordered_subgraph

RED = "R"
BLUE = "B"
HEADER = "ordered-coloring v1"


class ColoringFormatError(ValueError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True)
class TwoColoring:
    """Total red/blue coloring of the pairs of ``1..N``."""

    N: int
    red: frozenset[Edge]

    def __post_init__(self) -> None:
        if self.N < 1:
            raise ValueError("coloring needs at least one vertex")
        for u, v in self.red:
            if not 1 <= u < v <= self.N:
                raise ValueError(f"red edge ({u}, {v}) is not a pair of 1..{self.N}")
        object.__setattr__(self, "red", frozenset(self.red))

    @classmethod
    def from_red_edges(cls, N: int, red: Iterable[Edge]) -> "TwoColoring":
        return cls(N, frozenset((min(u, v), max(u, v)) for u, v in red))

    @classmethod
    def from_blue_edges(cls, N: int, blue: Iterable[Edge]) -> "TwoColoring":
        blue = {(min(u, v), max(u, v)) for u, v in blue}
        return cls(N, frozenset(p for p in combinations(range(1, N + 1), 2) if p not in blue))

    def color(self, u: int, v: int) -> str:
        if u > v:
            u, v = v, u
        return RED if (u, v) in self.red else BLUE

    def is_red(self, u: int, v: int) -> bool:
        return self.color(u, v) == RED

    def red_graph(self) -> OrderedGraph:
        return OrderedGraph(self.N, tuple(self.red))

    def blue_graph(self) -> OrderedGraph:
        return OrderedGraph(
            self.N, tuple(p for p in combinations(range(1, self.N + 1), 2) if p not in self.red)
        )

    @property
    def red_count(self) -> int:
        return len(self.red)

    def rows(self) -> list[str]:
        return [
            "".join(self.color(i, j) for j in range(i + 1, self.N + 1)) for i in range(1, self.N)
        ]

    def bits(self) -> tuple[bool, ...]:
        """Red indicator of every pair in lexicographic pair order."""
        return tuple(p in self.red for p in combinations(range(1, self.N + 1), 2))

    def reflect(self) -> "TwoColoring":
        N = self.N
        return TwoColoring(N, frozenset((N - v + 1, N - u + 1) for u, v in self.red))


def all_red(N: int) -> TwoColoring:
    return TwoColoring(N, frozenset(combinations(range(1, N + 1), 2)))


def all_blue(N: int) -> TwoColoring:
    return TwoColoring(N, frozenset())


def hamming_distance(a: TwoColoring, b: TwoColoring) -> int:
    if a.N != b.N:
        raise ValueError("colorings live on different vertex counts")
    return len(a.red ^ b.red)


# -- constructions ----------------------------------------------------------


def block_coloring(clique_size: int, clique_count: int) -> TwoColoring:
    """Consecutive red cliques of ``clique_size`` vertices joined by blue edges."""
    if clique_size < 1 or clique_count < 1:
        raise ValueError("block coloring needs positive clique size and count")
    N = clique_size * clique_count
    block = lambda v: (v - 1) // clique_size  # noqa: E731
    red = frozenset(p for p in combinations(range(1, N + 1), 2) if block(p[0]) == block(p[1]))
    return TwoColoring(N, red)


def chi_blue_edges(n: int) -> set[Edge]:
    """Blue edges of the 4n-vertex construction avoiding red NM_n and blue K_3."""
    if n < 6:
        raise ValueError("the 4n construction is defined for n >= 6")
    N = 4 * n
    blue: set[Edge] = set()
    # square block
    blue.update((i, j) for i in range(4, 2 * n - 2) for j in range(2 * n + 4, 4 * n - 2))
    # L-shaped top-right corner
    blue.update((i, j) for i in (1, 2) for j in range(2 * n + 4, N + 1))
    blue.update((i, j) for i in range(1, 2 * n - 2) for j in (N - 1, N))
    # two 3x7 rectangles
    blue.update((i, j) for i in range(3, 10) for j in range(2 * n - 2, 2 * n + 1))
    blue.update((i, j) for i in range(2 * n + 1, 2 * n + 4) for j in range(4 * n - 8, 4 * n - 1))
    blue.add((3, 2 * n + 1))
    blue.add((2 * n, 4 * n - 2))
    return blue


def general_construction_chi(n: int) -> TwoColoring:
    return TwoColoring.from_blue_edges(4 * n, chi_blue_edges(n))


# -- verification -----------------------------------------------------------


class Status(Enum):
    AVOIDING = "avoiding"
    RED_WITNESS = "red"
    BLUE_WITNESS = "blue"


@dataclass(frozen=True)
class Verdict:
    status: Status
    witness: Optional[Embedding] = None

    @property
    def avoiding(self) -> bool:
        return self.status is Status.AVOIDING

    def __str__(self) -> str:
        if self.avoiding:
            return "avoiding"
        return f"{self.status.value} copy at {list(self.witness.map)}"


def verify_avoiding(c: TwoColoring, red_pattern: OrderedGraph, blue_pattern: OrderedGraph) -> Verdict:
    """Look for a red copy of ``red_pattern``, then a blue copy of ``blue_pattern``."""
    hit = contains_ordered_subgraph(c.red_graph(), red_pattern)
    if hit is not None:
        return Verdict(Status.RED_WITNESS, hit)
    hit = contains_ordered_subgraph(c.blue_graph(), blue_pattern)
    if hit is not None:
        return Verdict(Status.BLUE_WITNESS, hit)
    return Verdict(Status.AVOIDING)


def witness_holds(c: TwoColoring, verdict: Verdict, red_pattern: OrderedGraph, blue_pattern: OrderedGraph) -> bool:
    """Re-check a witness against the actual colors."""
    if verdict.avoiding:
        return True
    pattern, want = (
        (red_pattern, RED) if verdict.status is Status.RED_WITNESS else (blue_pattern, BLUE)
    )
    return all(c.color(u, v) == want for u, v in verdict.witness.image(pattern.edges))


def is_symmetric(c: TwoColoring) -> bool:
    return c.reflect().red == c.red


# -- text format ------------------------------------------------------------


def serialize(c: TwoColoring) -> str:
    return "\n".join([HEADER, f"N={c.N}", *c.rows()]) + "\n"


def parse(text: str) -> TwoColoring:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines or lines[0] != HEADER:
        raise ColoringFormatError(1, f"expected header {HEADER!r}")
    if len(lines) < 2 or not lines[1].startswith("N="):
        raise ColoringFormatError(2, "expected 'N=<count>'")
    try:
        N = int(lines[1][2:])
    except ValueError:
        raise ColoringFormatError(2, f"bad vertex count {lines[1][2:]!r}") from None
    if N < 1:
        raise ColoringFormatError(2, "vertex count must be positive")
    rows = lines[2:]
    # an optional routes section may follow the matrix
    if "routes:" in rows:
        rows = rows[: rows.index("routes:")]
    if len(rows) != N - 1:
        raise ColoringFormatError(len(lines) + 1, f"expected {N - 1} matrix rows, got {len(rows)}")
    red = set()
    for i, row in enumerate(rows, start=1):
        lineno = i + 2
        if len(row) != N - i:
            raise ColoringFormatError(lineno, f"row {i} has length {len(row)}, expected {N - i}")
        for offset, ch in enumerate(row):
            if ch == RED:
                red.add((i, i + 1 + offset))
            elif ch != BLUE:
                raise ColoringFormatError(lineno, f"unexpected character {ch!r}")
    return TwoColoring(N, frozenset(red))


# -- rendering --------------------------------------------------------------


def render_matrix(c: TwoColoring, style: str = "ascii", routes: Union[list, None] = None) -> str:
    """Draw the red matrix: ``#`` for red, ``.`` for blue, ``\\`` on the diagonal."""
    if style == "ascii":
        return _render_ascii(c)
    if style == "svg":
        return _render_svg(c, routes or [])
    raise ValueError(f"unknown render style {style!r}")


def _render_ascii(c: TwoColoring) -> str:
    N = c.N
    width = len(str(N))
    out = [" " * (width + 1) + "".join(str(j % 10) for j in range(1, N + 1))]
    for i in range(1, N + 1):
        cells = []
        for j in range(1, N + 1):
            if j < i:
                cells.append(" ")
            elif j == i:
                cells.append("\\")
            else:
                cells.append("#" if c.is_red(i, j) else ".")
        out.append(f"{i:>{width}} " + "".join(cells).rstrip())
    return "\n".join(out) + "\n"


_ROUTE_COLORS = ["#1b9e77", "#d95f02", "#7570b3", "#e7298a", "#66a61e", "#e6ab02", "#a6761d"]


def _render_svg(c: TwoColoring, routes: list) -> str:
    cell = 16
    N = c.N
    size = cell * N
    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
        f"<title>{escape(f'coloring on {N} vertices')}</title>",
    ]
    for i in range(1, N + 1):
        for j in range(i, N + 1):
            if i == j:
                fill = "#dddddd"
            else:
                fill = "#d62728" if c.is_red(i, j) else "#1f77b4"
            x, y = (j - 1) * cell, (i - 1) * cell
            parts.append(
                f'<rect x="{x}" y="{y}" width="{cell}" height="{cell}" fill="{fill}" stroke="white"/>'
            )
    for t, route in enumerate(routes):
        color = _ROUTE_COLORS[t % len(_ROUTE_COLORS)]
        points = " ".join(
            f"{(j - 0.5) * cell:g},{(i - 0.5) * cell:g}" for i, j in route.positions
        )
        parts.append(
            f'<polyline points="{points}" fill="none" stroke="{color}" stroke-width="2"/>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
