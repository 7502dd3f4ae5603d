"""Simple undirected graphs on vertices ``0..n-1`` with bitset adjacency.

Distances are unweighted hop counts computed by BFS over the bitsets.
Mean path length is kept as an exact :class:`fractions.Fraction`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

INF = math.inf


class GraphError(ValueError):
    pass


class SelfLoop(GraphError):
    pass


class VertexOutOfRange(GraphError):
    pass


def _iter_bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class Graph:
    """Immutable simple graph.

    ``edges`` holds each edge once as ``(u, v)`` with ``u < v``, sorted.
    ``adjacency[u]`` is an int bitset of the neighbours of ``u``.
    """

    n: int
    edges: tuple[tuple[int, int], ...]
    adjacency: tuple[int, ...] = field(repr=False, compare=False)

    def neighbors(self, u: int) -> list[int]:
        return list(_iter_bits(self.adjacency[u]))

    def degree(self, u: int) -> int:
        return self.adjacency[u].bit_count()

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adjacency[u] >> v & 1)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Return the graph with vertex ``u`` renamed to ``perm[u]``."""
        if sorted(perm) != list(range(self.n)):
            raise GraphError("not a permutation of the vertex set")
        return from_edges(self.n, ((perm[u], perm[v]) for u, v in self.edges))

    def __len__(self) -> int:
        return self.n


def from_edges(n: int, pairs: Iterable[tuple[int, int]]) -> Graph:
    """Build a validated :class:`Graph`; duplicate pairs are collapsed."""
    if n < 0:
        raise GraphError(f"vertex count must be non-negative, got {n}")
    adj = [0] * n
    seen = set()
    for u, v in pairs:
        u, v = int(u), int(v)
        if not (0 <= u < n and 0 <= v < n):
            raise VertexOutOfRange(f"edge ({u}, {v}) outside 0..{n - 1}")
        if u == v:
            raise SelfLoop(f"self-loop at vertex {u}")
        if u > v:
            u, v = v, u
        if (u, v) in seen:
            continue
        seen.add((u, v))
        adj[u] |= 1 << v
        adj[v] |= 1 << u
    return Graph(n, tuple(sorted(seen)), tuple(adj))


def from_adjacency(masks: Sequence[int]) -> Graph:
    """Build a graph from per-vertex neighbour bitsets (must be symmetric)."""
    n = len(masks)
    pairs = [(u, v) for u in range(n) for v in _iter_bits(masks[u]) if u < v]
    g = from_edges(n, pairs)
    if g.adjacency != tuple(masks):
        raise GraphError("adjacency bitsets are not symmetric or contain loops")
    return g


def degree_profile(g: Graph) -> tuple[bool, int | None]:
    """Return ``(is_regular, k)``; ``k`` is ``None`` when the graph is irregular."""
    degrees = {m.bit_count() for m in g.adjacency}
    if len(degrees) == 1:
        return True, degrees.pop()
    if not degrees:  # empty graph on zero vertices
        return True, 0
    return False, None


@dataclass(frozen=True)
class DistanceRow:
    source: int
    dist: tuple[float, ...]  # ints, or INF for unreachable vertices


def bfs_distances(g: Graph, source: int) -> DistanceRow:
    if not 0 <= source < g.n:
        raise VertexOutOfRange(f"source {source} outside 0..{g.n - 1}")
    dist: list[float] = [INF] * g.n
    adj = g.adjacency
    dist[source] = 0
    seen = 1 << source
    frontier = seen
    d = 0
    while frontier:
        d += 1
        reach = 0
        for u in _iter_bits(frontier):
            reach |= adj[u]
        frontier = reach & ~seen
        seen |= frontier
        for v in _iter_bits(frontier):
            dist[v] = d
    return DistanceRow(source, tuple(dist))


def _layer_counts(adj: Sequence[int], n: int, source: int) -> tuple[int, int, int]:
    """(eccentricity, distance sum, vertices reached) from ``source``."""
    seen = 1 << source
    frontier = seen
    d = total = reached = 0
    while True:
        reach = 0
        for u in _iter_bits(frontier):
            reach |= adj[u]
        frontier = reach & ~seen
        if not frontier:
            return d, total, reached + 1
        d += 1
        seen |= frontier
        c = frontier.bit_count()
        total += d * c
        reached += c


@dataclass(frozen=True)
class Metrics:
    """Exact distance statistics.

    For a disconnected graph ``diameter`` and ``mpl`` are ``INF``.
    """

    n: int
    diameter: float
    distance_sum: int
    mpl: Fraction | float
    connected: bool

    @property
    def mpl_str(self) -> str:
        return format_mpl(self.mpl)


def format_mpl(value: Fraction | float) -> str:
    """Four-decimal rendering with exact half-up rounding of the rational."""
    if value == INF:
        return "inf"
    q = Fraction(value) * 10000
    scaled = (q.numerator * 2 + q.denominator) // (2 * q.denominator)
    return f"{scaled // 10000}.{scaled % 10000:04d}"


def metrics(g: Graph) -> Metrics:
    n = g.n
    if n <= 1:
        return Metrics(n, 0, 0, Fraction(0), True)
    diameter = 0
    total = 0
    for s in range(n):
        ecc, dsum, reached = _layer_counts(g.adjacency, n, s)
        if reached < n:
            return Metrics(n, INF, 0, INF, False)
        diameter = max(diameter, ecc)
        total += dsum
    return Metrics(n, diameter, total, Fraction(total, n * (n - 1)), True)


def is_connected(g: Graph) -> bool:
    if g.n == 0:
        return True
    return _layer_counts(g.adjacency, g.n, 0)[2] == g.n


def cartesian_product(g: Graph, h: Graph) -> Graph:
    """Cartesian product; vertex ``(u, v)`` gets index ``u * h.n + v``."""
    if g.n == 0 or h.n == 0:
        raise GraphError("cartesian product needs non-empty factors")
    m = h.n
    pairs = []
    for u in range(g.n):
        for a, b in h.edges:
            pairs.append((u * m + a, u * m + b))
    for a, b in g.edges:
        for v in range(m):
            pairs.append((a * m + v, b * m + v))
    return from_edges(g.n * m, pairs)


# Small named graphs used by the CLI, tests and the k=2 special case.

def complete_graph(n: int) -> Graph:
    return from_edges(n, ((u, v) for u in range(n) for v in range(u + 1, n)))


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise GraphError("a simple cycle needs at least 3 vertices")
    return from_edges(n, ((i, (i + 1) % n) for i in range(n)))


def path_graph(n: int) -> Graph:
    return from_edges(n, ((i, i + 1) for i in range(n - 1)))


def complete_bipartite(a: int, b: int) -> Graph:
    return from_edges(a + b, ((u, a + v) for u in range(a) for v in range(b)))


def petersen_graph() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return from_edges(10, outer + spokes + inner)


def heawood_graph() -> Graph:
    """Incidence graph of the Fano plane: points 0..6, lines 7..13."""
    lines = [(i % 7, (i + 1) % 7, (i + 3) % 7) for i in range(7)]
    return from_edges(14, ((p, 7 + j) for j, line in enumerate(lines) for p in line))


def hypercube(dim: int) -> Graph:
    g = complete_graph(1)
    k2 = complete_graph(2)
    for _ in range(dim):
        g = cartesian_product(g, k2)
    return g
