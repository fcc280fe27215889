"""Ordered graphs on the vertex set 1..n, standard families and embedding search."""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Iterator, Optional

Edge = tuple[int, int]

MAX_ENUMERATION_VERTICES = 8


class GraphFormatError(ValueError):
    """Raised when an ``ordered-graph v1`` document is malformed."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line
        self.message = message


@dataclass(frozen=True)
class OrderedGraph:
    """Graph on vertices ``1..n`` taken in their natural order.

    Edges are stored as sorted ``(u, v)`` pairs with ``u < v``.
    """

    n: int
    edges: tuple[Edge, ...] = ()
    _adj: tuple[frozenset[int], ...] = field(init=False, repr=False, compare=False)
    _edge_set: frozenset[Edge] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.n < 0:
            raise ValueError("vertex count must be non-negative")
        normalized = set()
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            u, v = min(u, v), max(u, v)
            if u < 1 or v > self.n:
                raise ValueError(f"edge ({u}, {v}) outside 1..{self.n}")
            normalized.add((u, v))
        object.__setattr__(self, "edges", tuple(sorted(normalized)))
        object.__setattr__(self, "_edge_set", frozenset(normalized))
        adj: list[set[int]] = [set() for _ in range(self.n + 1)]
        for u, v in normalized:
            adj[u].add(v)
            adj[v].add(u)
        object.__setattr__(self, "_adj", tuple(frozenset(a) for a in adj))

    def __len__(self) -> int:
        return self.n

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def has_edge(self, u: int, v: int) -> bool:
        if u > v:
            u, v = v, u
        return (u, v) in self._edge_set

    def neighbors(self, v: int) -> frozenset[int]:
        return self._adj[v]

    def induced(self, vertices: Iterable[int]) -> "OrderedGraph":
        """Subgraph induced by ``vertices``, relabelled to 1..k in order."""
        keep = sorted(set(vertices))
        index = {v: i + 1 for i, v in enumerate(keep)}
        edges = [(index[u], index[v]) for u, v in self.edges if u in index and v in index]
        return OrderedGraph(len(keep), tuple(edges))

    def shift(self, offset: int) -> tuple[Edge, ...]:
        return tuple((u + offset, v + offset) for u, v in self.edges)

    def to_text(self) -> str:
        lines = ["ordered-graph v1", f"n={self.n}"]
        lines.extend(f"{u} {v}" for u, v in self.edges)
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "OrderedGraph":
        lines = text.split("\n")
        if lines and lines[-1] == "":
            lines.pop()
        if not lines or lines[0] != "ordered-graph v1":
            raise GraphFormatError(1, "expected header 'ordered-graph v1'")
        if len(lines) < 2 or not lines[1].startswith("n="):
            raise GraphFormatError(2, "expected 'n=<count>'")
        try:
            n = int(lines[1][2:])
        except ValueError:
            raise GraphFormatError(2, f"bad vertex count {lines[1][2:]!r}") from None
        if n < 0:
            raise GraphFormatError(2, "negative vertex count")
        edges = []
        for lineno, line in enumerate(lines[2:], start=3):
            parts = line.split(" ")
            if len(parts) != 2 or not all(p.isdigit() for p in parts):
                raise GraphFormatError(lineno, f"expected 'u v', got {line!r}")
            u, v = int(parts[0]), int(parts[1])
            if not 1 <= u < v <= n:
                raise GraphFormatError(lineno, f"edge {u} {v} is not a pair 1 <= u < v <= {n}")
            edges.append((u, v))
        if edges != sorted(set(edges)):
            raise GraphFormatError(3, "edges must be sorted and distinct")
        return cls(n, tuple(edges))


@dataclass(frozen=True)
class Embedding:
    """Strictly increasing map from pattern vertices 1..k to host vertices."""

    pattern_size: int
    map: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.map) != self.pattern_size:
            raise ValueError("map length differs from pattern size")
        if any(a >= b for a, b in zip(self.map, self.map[1:])):
            raise ValueError("embedding map must be strictly increasing")

    def image(self, edges: Iterable[Edge]) -> list[Edge]:
        phi = self.map
        return [(phi[u - 1], phi[v - 1]) for u, v in edges]


@dataclass(frozen=True)
class CaterpillarDecomposition:
    """Sequence of one-sided stars ``(l, r)`` whose join is the graph."""

    stars: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        for l, r in self.stars:
            if l != 1 and r != 1:
                raise ValueError(f"star S_{{{l},{r}}} is not one-sided")

    def rebuild(self) -> OrderedGraph:
        return join_all([ordered_star(l, r) for l, r in self.stars])


# -- constructors -----------------------------------------------------------


def nested_matching(k: int) -> OrderedGraph:
    if k < 1:
        raise ValueError("nested matching needs k >= 1")
    return OrderedGraph(2 * k, tuple((i, 2 * k - i + 1) for i in range(1, k + 1)))


def ordered_star(l: int, r: int) -> OrderedGraph:
    """Star on ``l + r - 1`` vertices whose hub is the ``l``-th vertex."""
    if l < 1 or r < 1:
        raise ValueError("ordered star needs l >= 1 and r >= 1")
    n = l + r - 1
    return OrderedGraph(n, tuple((min(l, v), max(l, v)) for v in range(1, n + 1) if v != l))


def monotone_path(m: int) -> OrderedGraph:
    if m < 1:
        raise ValueError("monotone path needs m >= 1")
    return OrderedGraph(m, tuple((i, i + 1) for i in range(1, m)))


def complete_graph(n: int) -> OrderedGraph:
    if n < 1:
        raise ValueError("complete graph needs n >= 1")
    return OrderedGraph(n, tuple(combinations(range(1, n + 1), 2)))


def join(g: OrderedGraph, h: OrderedGraph) -> OrderedGraph:
    """Identify the leftmost vertex of ``h`` with the rightmost vertex of ``g``."""
    if g.n == 0 or h.n == 0:
        raise ValueError("cannot join an empty ordered graph")
    return OrderedGraph(g.n + h.n - 1, g.edges + h.shift(g.n - 1))


def join_all(graphs: Iterable[OrderedGraph]) -> OrderedGraph:
    graphs = list(graphs)
    if not graphs:
        raise ValueError("join of no graphs")
    result = graphs[0]
    for g in graphs[1:]:
        result = join(result, g)
    return result


# -- embeddings -------------------------------------------------------------


def enumerate_embeddings(pattern: OrderedGraph, host_size: int) -> Iterator[Embedding]:
    """All increasing maps of ``pattern`` into the complete ordered graph on ``host_size`` vertices."""
    if pattern.n == 0:
        raise ValueError("pattern must have at least one vertex")
    k = pattern.n
    for image in combinations(range(1, host_size + 1), k):
        yield Embedding(k, image)


def longest_nested_chain(edges: Iterable[Edge]) -> list[Edge]:
    """A maximum set of pairwise nested edges, outermost first.

    Nested edges have strictly increasing left and strictly decreasing right
    endpoints, so this is a longest decreasing subsequence of right endpoints
    once edges are sorted by (left, right).  Ties on the left endpoint sort
    ascending on the right so no two of them can be chained.
    """
    ordered = sorted(edges)
    tails: list[int] = []  # tails[t]: -right endpoint ending the best chain of length t+1
    tail_idx: list[int] = []
    prev = [-1] * len(ordered)
    for idx, (_, v) in enumerate(ordered):
        t = bisect_left(tails, -v)
        if t == len(tails):
            tails.append(-v)
            tail_idx.append(idx)
        else:
            tails[t] = -v
            tail_idx[t] = idx
        prev[idx] = tail_idx[t - 1] if t > 0 else -1
    chain = []
    idx = tail_idx[-1] if tail_idx else -1
    while idx != -1:
        chain.append(ordered[idx])
        idx = prev[idx]
    chain.reverse()
    return chain


def _is_nested_matching(g: OrderedGraph) -> bool:
    k = g.n // 2
    return g.n % 2 == 0 and k >= 1 and g.edges == nested_matching(k).edges


def contains_ordered_subgraph(host: OrderedGraph, pattern: OrderedGraph) -> Optional[Embedding]:
    """Return the lexicographically smallest embedding of ``pattern`` into ``host``, if any."""
    k, n = pattern.n, host.n
    if k == 0:
        return Embedding(0, ())
    if k > n or pattern.edge_count > host.edge_count:
        return None
    # absence of a nested matching is decided in polynomial time
    if _is_nested_matching(pattern) and len(longest_nested_chain(host.edges)) < k // 2:
        return None
    # back[i]: earlier pattern vertices adjacent to pattern vertex i
    back = [[u for u in pattern.neighbors(i) if u < i] for i in range(k + 1)]
    phi = [0] * (k + 1)

    def extend(i: int, start: int) -> bool:
        if i > k:
            return True
        # leave room for the k - i vertices still to place
        for x in range(start, n - (k - i) + 1):
            nbrs = host.neighbors(x)
            if all(phi[u] in nbrs for u in back[i]):
                phi[i] = x
                if extend(i + 1, x + 1):
                    return True
        return False

    if extend(1, 1):
        return Embedding(k, tuple(phi[1:]))
    return None


# -- structure --------------------------------------------------------------


def is_connected(g: OrderedGraph) -> bool:
    if g.n <= 1:
        return True
    seen = {1}
    stack = [1]
    while stack:
        v = stack.pop()
        for w in g.neighbors(v):
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == g.n


def is_forest(g: OrderedGraph) -> bool:
    parent = list(range(g.n + 1))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in g.edges:
        ru, rv = find(u), find(v)
        if ru == rv:
            return False
        parent[ru] = rv
    return True


def is_tree(g: OrderedGraph) -> bool:
    return is_connected(g) and g.edge_count == g.n - 1


def caterpillar_by_decomposition(g: OrderedGraph) -> Optional[CaterpillarDecomposition]:
    """Split ``g`` into a join of one-sided stars, or return None.

    Works right to left: with ``v`` the leftmost neighbor of the last vertex,
    the vertices strictly between ``v`` and the last one must all hang off
    exactly one of the two, and the prefix ``1..v`` must decompose in turn.
    """
    if g.n == 0:
        return None
    stars: list[tuple[int, int]] = []
    current = g
    while current.n > 1:
        last = current.n
        if not current.neighbors(last):
            return None
        v = min(current.neighbors(last))
        gap = range(v + 1, last)
        hub = None
        for x in gap:
            nbrs = current.neighbors(x)
            if nbrs == {v}:
                side = v
            elif nbrs == {last}:
                side = last
            else:
                return None
            if hub is None:
                hub = side
            elif hub != side:
                return None
        size = last - v + 1
        stars.append((size, 1) if hub == last else (1, size))
        current = current.induced(range(1, v + 1))
    if not stars:
        return CaterpillarDecomposition(((1, 1),))
    return CaterpillarDecomposition(tuple(reversed(stars)))


# Forbidden patterns for monotone caterpillars.
PATTERN_A = nested_matching(2)
PATTERN_B = OrderedGraph(4, ((1, 3), (2, 4)))
PATTERN_C = OrderedGraph(4, ((1, 2), (1, 4), (3, 4)))
PATTERN_D = complete_graph(3)
CATERPILLAR_PATTERNS = {"A": PATTERN_A, "B": PATTERN_B, "C": PATTERN_C, "D": PATTERN_D}


def caterpillar_by_patterns(g: OrderedGraph, include_triangle: bool = True) -> bool:
    """Forbidden-pattern test; ``g`` must be connected."""
    if not is_connected(g):
        raise ValueError("pattern characterization applies to connected graphs only")
    for name, pattern in CATERPILLAR_PATTERNS.items():
        if name == "D" and not include_triangle:
            continue
        if contains_ordered_subgraph(g, pattern) is not None:
            return False
    return True


def enumerate_connected_graphs(v: int) -> Iterator[OrderedGraph]:
    """Every connected ordered graph on exactly ``v`` vertices.

    Graphs come out in lexicographic order of their sorted edge lists.
    """
    if v > MAX_ENUMERATION_VERTICES:
        raise ValueError(
            f"enumeration on {v} vertices exceeds the budget of {MAX_ENUMERATION_VERTICES} vertices"
        )
    if v < 1:
        raise ValueError("need at least one vertex")
    pairs = list(combinations(range(1, v + 1), 2))
    found = []
    for mask in range(1 << len(pairs)):
        edges = tuple(p for bit, p in enumerate(pairs) if mask >> bit & 1)
        g = OrderedGraph(v, edges)
        if is_connected(g):
            found.append(g)
    found.sort(key=lambda g: g.edges)
    yield from found


def enumerate_trees(v: int) -> Iterator[OrderedGraph]:
    for g in enumerate_connected_graphs(v):
        if g.edge_count == v - 1:
            yield g


def minimal_noncaterpillar_trees(v: int = 4) -> list[OrderedGraph]:
    if v != 4:
        raise ValueError("only v = 4 is supported")
    return [t for t in enumerate_trees(v) if caterpillar_by_decomposition(t) is None]
