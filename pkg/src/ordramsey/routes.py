"""Certificates that an ordered graph has no large nested matching.

A set of edges with no two nested is a queue.  Partitioning the edges into
``k`` queues rules out ``NM_{k+1}`` by pigeonhole, and in the matrix picture
each queue can be drawn as a monotone staircase ("route") from ``(t, t)`` to
``(N-t+1, N-t+1)``.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Optional

from .colorings import Status, TwoColoring, Verdict, verify_avoiding
from .graphs import Edge, OrderedGraph, complete_graph, longest_nested_chain, nested_matching

ROUTE_STEP_BUDGET = 10**6


def nested(e: Edge, f: Edge) -> bool:
    """True when one edge lies strictly inside the other."""
    (a, b), (c, d) = e, f
    return a < c < d < b or c < a < b < d


@dataclass(frozen=True)
class QueuePartition:
    classes: tuple[tuple[Edge, ...], ...]

    def __len__(self) -> int:
        return len(self.classes)

    def is_valid_for(self, g: OrderedGraph) -> bool:
        seen = [e for cls in self.classes for e in cls]
        if sorted(seen) != list(g.edges):
            return False
        return all(
            not nested(e, f) for cls in self.classes for i, e in enumerate(cls) for f in cls[i + 1 :]
        )


@dataclass(frozen=True)
class Route:
    index: int
    positions: tuple[tuple[int, int], ...]

    def is_staircase(self, N: int) -> bool:
        k = self.index
        pos = self.positions
        if not pos or pos[0] != (k, k) or pos[-1] != (N - k + 1, N - k + 1):
            return False
        return all(
            (c - a, d - b) in ((1, 0), (0, 1)) for (a, b), (c, d) in zip(pos, pos[1:])
        )


def max_nested_matching(g: OrderedGraph) -> tuple[int, list[Edge]]:
    chain = longest_nested_chain(g.edges)
    return len(chain), chain


def queue_partition(g: OrderedGraph) -> QueuePartition:
    """First-fit over lexicographically sorted edges into nesting-free classes."""
    classes: list[list[Edge]] = []
    for e in g.edges:
        # earlier edges start no later, so the only possible conflict is e sitting inside one
        for cls in classes:
            if not any(nested(f, e) for f in cls):
                cls.append(e)
                break
        else:
            classes.append([e])
    return QueuePartition(tuple(tuple(c) for c in classes))


class RouteBudgetExceeded(RuntimeError):
    pass


def materialize_routes(
    p: QueuePartition, N: int, budget: int = ROUTE_STEP_BUDGET
) -> Optional[list[Route]]:
    """Draw class ``t`` as route ``t``; None when no disjoint drawing is found.

    Routes are laid out from the outermost class inwards, each hugging the
    upper-right corner of the matrix so the inner ones keep as much room near
    the diagonal as possible.
    """
    k = len(p.classes)
    if 2 * k > N:
        return None
    owner: dict[tuple[int, int], int] = {}
    for t, cls in enumerate(p.classes, start=1):
        for e in cls:
            owner[e] = t
    for t in range(1, k + 1):
        owner[(t, t)] = t
        owner[(N - t + 1, N - t + 1)] = t
    taken: set[tuple[int, int]] = set()
    routes = []
    steps = [0]
    try:
        for t, cls in enumerate(p.classes, start=1):
            waypoints = [(t, t), *sorted(cls), (N - t + 1, N - t + 1)]
            blocked = lambda cell, t=t: cell in taken or owner.get(cell, t) != t  # noqa: E731
            path = [waypoints[0]]
            for src, dst in zip(waypoints, waypoints[1:]):
                segment = _upper_right_path(src, dst, blocked, N, steps, budget)
                if segment is None:
                    return None
                path.extend(segment[1:])
            taken.update(path)
            routes.append(Route(t, tuple(path)))
    except RouteBudgetExceeded:
        return None
    return routes


def _upper_right_path(src, dst, blocked, N, steps, budget):
    (a, b), (c, d) = src, dst
    if c < a or d < b:
        return None
    # cells of the box from which dst is reachable
    reach = set()
    for i in range(c, a - 1, -1):
        for j in range(d, b - 1, -1):
            steps[0] += 1
            if steps[0] > budget:
                raise RouteBudgetExceeded
            if (i, j) != src and (i, j) != dst and blocked((i, j)):
                continue
            if (i, j) == (c, d) or (i, j + 1) in reach or (i + 1, j) in reach:
                reach.add((i, j))
    if src not in reach:
        return None
    path = [src]
    i, j = src
    while (i, j) != dst:
        if j < d and (i, j + 1) in reach:
            j += 1
        else:
            i += 1
        path.append((i, j))
    return path


def routes_cover(routes: list[Route], g: OrderedGraph) -> bool:
    cells = [c for r in routes for c in r.positions]
    if len(cells) != len(set(cells)):
        return False
    return set(g.edges) <= set(cells)


def format_routes(routes: list[Route]) -> str:
    """Text block appended after a coloring matrix."""
    lines = ["routes:"]
    for r in routes:
        lines.append(f"{r.index}: " + " ".join(f"{i},{j}" for i, j in r.positions))
    return "\n".join(lines) + "\n"


def parse_routes(text: str) -> list[Route]:
    lines = text.split("\n")
    try:
        start = lines.index("routes:")
    except ValueError:
        return []
    routes = []
    for line in lines[start + 1 :]:
        if not line:
            continue
        head, _, body = line.partition(": ")
        positions = tuple(tuple(int(x) for x in cell.split(",")) for cell in body.split())
        routes.append(Route(int(head), positions))
    return routes


# -- edge bounds ------------------------------------------------------------


def nm_free_edge_bound(n: int, N: int) -> int:
    """Most edges an ordered graph on N vertices can have without NM_n."""
    if N < 2 * n:
        raise ValueError(f"bound needs N >= 2n (got n={n}, N={N})")
    return (n - 1) * (2 * N - 2 * n + 1)


def extremal_nm_free_graph(n: int, N: int) -> OrderedGraph:
    """All edges of length at most ``2n - 2``."""
    if N < 2 * n:
        raise ValueError(f"construction needs N >= 2n (got n={n}, N={N})")
    return OrderedGraph(
        N, tuple((i, j) for i in range(1, N + 1) for j in range(i + 1, min(N, i + 2 * n - 2) + 1))
    )


def antidiagonal_profile(g: OrderedGraph) -> dict[int, int]:
    """Edge counts on each anti-diagonal ``i + j = k``, for k = 3..2N-1."""
    counts = Counter(u + v for u, v in g.edges)
    return {k: counts.get(k, 0) for k in range(3, 2 * g.n)}


# -- chromatic bound for queue graphs ---------------------------------------


class PreconditionError(ValueError):
    def __init__(self, message: str, verdict: Verdict):
        super().__init__(message)
        self.verdict = verdict


def chromatic_lower_bound_from_coloring(c: TwoColoring, k: int) -> int:
    """Lower bound ceil(N/2) on the largest chromatic number of k-queue graphs.

    The red graph of ``c`` has no NM_{k+1}, so it is a k-queue graph, and its
    independent sets have at most two vertices since there is no blue triangle.
    """
    verdict = verify_avoiding(c, nested_matching(k + 1), complete_graph(3))
    if verdict.status is not Status.AVOIDING:
        raise PreconditionError(f"coloring is not a witness: {verdict}", verdict)
    return math.ceil(c.N / 2)
