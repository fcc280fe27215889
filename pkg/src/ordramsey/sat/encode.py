"""CNF encoding of "some coloring of K_N avoids red G and blue H".

Variable ``x_ij`` is true when edge ``{i, j}`` is red.  Every placement of the
red pattern contributes a clause saying one of its edges is blue, every
placement of the blue pattern one saying one of its edges is red, so models
are exactly the avoiding colorings.

A red monotone path can instead be excluded with label variables
``L(j, l)``: "some red monotone path on l vertices ends at j".  The labels
make the pigeonhole structure of path-versus-clique instances visible to the
solver, and their edge projection is the same set of colorings.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Mapping, Optional

from ..colorings import TwoColoring
from ..graphs import Edge, OrderedGraph


class EdgeVarMap:
    """Bijection between pairs ``i < j`` of ``1..N`` and variables ``1..C(N,2)``.

    Pairs are numbered in lexicographic order.
    """

    def __init__(self, N: int):
        if N < 1:
            raise ValueError("need N >= 1")
        self.N = N
        self.size = N * (N - 1) // 2

    def var(self, i: int, j: int) -> int:
        if i > j:
            i, j = j, i
        if not 1 <= i < j <= self.N:
            raise ValueError(f"({i}, {j}) is not a pair of 1..{self.N}")
        return (i - 1) * self.N - (i - 1) * i // 2 + (j - i)

    def pair(self, var: int) -> Edge:
        if not 1 <= var <= self.size:
            raise ValueError(f"variable {var} out of range")
        i = 1
        while var > self.N - i:
            var -= self.N - i
            i += 1
        return i, i + var

    def pairs(self) -> list[Edge]:
        return list(combinations(range(1, self.N + 1), 2))

    def mirror(self, var: int) -> int:
        i, j = self.pair(var)
        return self.var(self.N - j + 1, self.N - i + 1)


@dataclass(frozen=True)
class EncodeOptions:
    symmetric: bool = False
    fixed: Mapping[Edge, bool] = field(default_factory=dict)  # edge -> is red
    path_labels: bool = False  # only meaningful when the red pattern is a monotone path


@dataclass
class CnfInstance:
    variable_count: int
    clauses: list[list[int]]
    N: int
    red_id: str
    blue_id: str
    options: EncodeOptions = field(default_factory=EncodeOptions)
    red_pattern: Optional[OrderedGraph] = field(default=None, repr=False)
    blue_pattern: Optional[OrderedGraph] = field(default=None, repr=False)
    edge_variable_count: Optional[int] = None  # variables past this one are auxiliary

    def __post_init__(self) -> None:
        if self.edge_variable_count is None:
            self.edge_variable_count = self.variable_count
        for c in self.clauses:
            if not c:
                raise ValueError("empty clause in instance")
            for lit in c:
                if lit == 0 or abs(lit) > self.variable_count:
                    raise ValueError(f"literal {lit} references no variable")

    @property
    def symmetric(self) -> bool:
        return self.options.symmetric

    def to_dimacs(self) -> str:
        opts = self.options
        lines = [
            f"c ordered ramsey instance N={self.N} red={self.red_id} blue={self.blue_id}",
            f"c symmetric={'on' if opts.symmetric else 'off'} fixed={len(opts.fixed)}"
            f" edge-vars={self.edge_variable_count}",
            f"p cnf {self.variable_count} {len(self.clauses)}",
        ]
        lines.extend(" ".join(map(str, c)) + " 0" for c in self.clauses)
        return "\n".join(lines) + "\n"


def pattern_id(g: OrderedGraph) -> str:
    return f"n{g.n}:" + ",".join(f"{u}-{v}" for u, v in g.edges)


def is_monotone_path(g: OrderedGraph) -> bool:
    return g.n >= 2 and g.edges == tuple((i, i + 1) for i in range(1, g.n))


def _path_label_clauses(N: int, m: int, vmap: EdgeVarMap, first_aux: int) -> tuple[int, list[list[int]]]:
    label = {}
    nxt = first_aux
    for j in range(1, N + 1):
        for l in range(2, m + 1):
            label[j, l] = nxt
            nxt += 1
    clauses = []
    for i, j in combinations(range(1, N + 1), 2):
        x = vmap.var(i, j)
        clauses.append([-x, label[j, 2]])
        for l in range(2, m):
            clauses.append([-x, -label[i, l], label[j, l + 1]])
    clauses.extend([-label[j, m]] for j in range(1, N + 1))
    return nxt - 1, clauses


def _placement_clauses(N: int, pattern: OrderedGraph, vmap: EdgeVarMap, sign: int) -> Iterable[list[int]]:
    k = pattern.n
    edges = pattern.edges
    var = vmap.var
    for image in combinations(range(1, N + 1), k):
        yield [sign * var(image[u - 1], image[v - 1]) for u, v in edges]


def encode_arrow(
    N: int,
    red: OrderedGraph,
    blue: OrderedGraph,
    opts: Optional[EncodeOptions] = None,
    red_id: Optional[str] = None,
    blue_id: Optional[str] = None,
) -> CnfInstance:
    opts = opts or EncodeOptions()
    if N < 1:
        raise ValueError("need N >= 1")
    for name, g in (("red", red), ("blue", blue)):
        if g.n <= N and g.edge_count == 0:
            raise ValueError(f"{name} pattern has no edges; every coloring contains it")
    vmap = EdgeVarMap(N)
    nvars = vmap.size
    clauses: dict[tuple[int, ...], None] = {}
    if opts.path_labels and red.n <= N:
        if not is_monotone_path(red):
            raise ValueError("path_labels needs a monotone path as the red pattern")
        nvars, extra = _path_label_clauses(N, red.n, vmap, vmap.size + 1)
        for c in extra:
            clauses.setdefault(tuple(c))
    else:
        for c in _placement_clauses(N, red, vmap, -1):
            clauses.setdefault(tuple(c))
    for c in _placement_clauses(N, blue, vmap, +1):
        clauses.setdefault(tuple(c))
    if opts.symmetric:
        for v in range(1, vmap.size + 1):
            w = vmap.mirror(v)
            if v < w:
                clauses.setdefault((-v, w))
                clauses.setdefault((v, -w))
    for (i, j), is_red in sorted(opts.fixed.items()):
        v = vmap.var(i, j)
        clauses.setdefault((v if is_red else -v,))
    return CnfInstance(
        nvars,
        [list(c) for c in clauses],
        N,
        red_id or pattern_id(red),
        blue_id or pattern_id(blue),
        opts,
        red,
        blue,
        vmap.size,
    )


def decode_model(model: Iterable[int], N: int) -> TwoColoring:
    """Positive literal for a pair means red."""
    vmap = EdgeVarMap(N)
    values = {}
    for lit in model:
        if lit != 0 and abs(lit) <= vmap.size:
            values[abs(lit)] = lit > 0
    missing = [v for v in range(1, vmap.size + 1) if v not in values]
    if missing:
        raise ValueError(f"model leaves {len(missing)} variables unassigned (first: {missing[0]})")
    return TwoColoring(N, frozenset(vmap.pair(v) for v, red in values.items() if red))


def coloring_literals(c: TwoColoring) -> list[int]:
    vmap = EdgeVarMap(c.N)
    return [vmap.var(i, j) if c.is_red(i, j) else -vmap.var(i, j) for i, j in vmap.pairs()]


def parse_dimacs(text: str) -> tuple[int, list[list[int]]]:
    nvars = None
    clauses: list[list[int]] = []
    current: list[int] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise ValueError(f"line {lineno}: bad problem line {line!r}")
            nvars = int(parts[2])
            continue
        for tok in line.split():
            lit = int(tok)
            if lit == 0:
                clauses.append(current)
                current = []
            else:
                current.append(lit)
    if current:
        clauses.append(current)
    if nvars is None:
        raise ValueError("missing 'p cnf' header")
    return nvars, clauses
