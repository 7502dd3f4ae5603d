"""Isomorph-free generation of connected k-regular graphs.

Orderly generation on the adjacency matrix.  A labelled graph is *canonical*
when its code (rows ``0..n-1`` of the upper triangle, most significant column
first) is maximal over all relabellings.  The maximal code of a connected
graph is always produced by a breadth-first numbering, so the search builds
graphs row by row in BFS form: vertex ``i`` is joined to some already
discovered vertices and to a contiguous block of fresh ones.

After row ``i`` is fixed, rows ``0..i`` belong to saturated vertices and will
never change.  Every BFS relabelling whose first rows only involve saturated
vertices is compared against them; a strictly larger row proves the prefix
can never become canonical.  Comparisons that reach an unsaturated vertex are
suspended and resumed when that vertex is completed, so each node only pays
for the newly decidable part.  Every isomorphism class is emitted exactly
once, as its canonical labelled representative, with no global table.

When ``2k > n - 1`` the graphs are built as complements of
``(n - 1 - k)``-regular graphs, assembled from connected components
generated by the same search.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, combinations_with_replacement, permutations, product
from typing import Callable, Iterator

from .graph import Graph, from_edges, is_connected


class ParityViolation(ValueError):
    """``n * k`` is odd, so no ``k``-regular graph on ``n`` vertices exists."""


class InvalidDegree(ValueError):
    pass


@dataclass
class GenStats:
    generated: int = 0
    visited: int = 0
    rejected_iso: int = 0
    parity_violation: bool = False

    def merge(self, other: "GenStats") -> None:
        self.generated += other.generated
        self.visited += other.visited
        self.rejected_iso += other.rejected_iso
        self.parity_violation = self.parity_violation or other.parity_violation


@dataclass(frozen=True)
class GenTask:
    """A search subtree: rows ``0..depth-1`` are fixed by ``prefix``."""

    n: int
    k: int
    prefix: tuple[tuple[int, int], ...]
    depth: int

    def to_record(self) -> str:
        edges = " ".join(f"{u}-{v}" for u, v in self.prefix)
        return f"{self.n} {self.k} {self.depth} {edges}".rstrip()

    @classmethod
    def from_record(cls, line: str) -> "GenTask":
        n, k, depth, *edges = line.split()
        pairs = tuple(tuple(int(x) for x in e.split("-")) for e in edges)
        return cls(int(n), int(k), pairs, int(depth))


def _validate(n: int, k: int) -> bool:
    """Return False on a parity violation; raise on impossible degrees."""
    if k < 1 or k >= n:
        raise InvalidDegree(f"need 1 <= k < n, got n={n}, k={k}")
    return (n * k) % 2 == 0


# Suspended comparison: (blocking vertex, BFS order, position to resume at).
_State = tuple[int, tuple[int, ...], int]


class _Search:
    def __init__(self, n: int, k: int, consumer: Callable[[Graph], None] | None):
        self.n, self.k = n, k
        self.consumer = consumer
        self.nbrs: list[list[int]] = [[] for _ in range(n)]
        self.adj = [0] * n
        self.deg = [0] * n
        self.rows = [0] * n
        self.bit = [1 << (n - 1 - q) for q in range(n)]
        self.block = {}
        for last in range(-1, n):
            for c in range(k + 1):
                if last + c < n:
                    self.block[last, c] = sum(self.bit[last + 1:last + 1 + c])
        self.stats = GenStats()
        # splitting support
        self.split_depth: int | None = None
        self.tasks: list[GenTask] = []

    # -- canonicity ---------------------------------------------------------

    def _advance(self, order: list[int], p: int, lim: int, out: list[_State]) -> bool:
        pos = [-1] * self.n
        for j, u in enumerate(order):
            pos[u] = j
        return self._compare(order, pos, p, lim, out)

    def _compare(self, order, pos, p, lim, out) -> bool:
        """Extend a BFS relabelling from position ``p``; True if it beats us."""
        nbrs, bit, rows, block = self.nbrs, self.bit, self.rows, self.block
        while p < len(order):
            w = order[p]
            if w > lim:
                out.append((w, tuple(order), p))
                return False
            last = len(order) - 1
            val = 0
            new = []
            for u in nbrs[w]:
                pu = pos[u]
                if pu < 0:
                    new.append(u)
                elif pu > p:
                    val |= bit[pu]
            c = len(new)
            val |= block[last, c]
            if val != rows[p]:
                return val > rows[p]
            if c == 0:
                p += 1
            elif c == 1:
                pos[new[0]] = last + 1
                order.append(new[0])
                p += 1
            else:
                base = last + 1
                for perm in permutations(new):
                    for j, u in enumerate(perm):
                        pos[u] = base + j
                    order.extend(perm)
                    beaten = self._compare(order, pos, p + 1, lim, out)
                    for u in order[base:]:
                        pos[u] = -1
                    del order[base:]
                    if beaten:
                        return True
                return False
        return False

    def _check(self, i: int, frontier: list[_State]) -> list[_State] | None:
        out: list[_State] = []
        for state in frontier:
            if state[0] == i:
                if self._advance(list(state[1]), state[2], i, out):
                    return None
            else:
                out.append(state)
        if self._advance([i], 0, i, out):
            return None
        return out

    # -- feasibility ---------------------------------------------------------

    def _feasible(self, i: int) -> bool:
        """Every unsaturated vertex still has enough free partners."""
        k, deg, adj = self.k, self.deg, self.adj
        open_ = 0
        for j in range(i + 1, self.n):
            if deg[j] < k:
                open_ |= 1 << j
        mask = open_
        while mask:
            low = mask & -mask
            j = low.bit_length() - 1
            mask ^= low
            if (open_ & ~adj[j] & ~low).bit_count() < k - deg[j]:
                return False
        return True

    # -- row placement -------------------------------------------------------

    def _apply(self, i: int, targets) -> None:
        row = 0
        for j in targets:
            self.adj[i] |= 1 << j
            self.adj[j] |= 1 << i
            self.deg[j] += 1
            self.nbrs[i].append(j)
            self.nbrs[j].append(i)
            row |= self.bit[j]
        self.deg[i] = self.k
        self.rows[i] = row

    def _undo(self, i: int, targets, old_deg: int) -> None:
        for j in targets:
            self.adj[i] &= ~(1 << j)
            self.adj[j] &= ~(1 << i)
            self.deg[j] -= 1
            self.nbrs[j].pop()
        del self.nbrs[i][len(self.nbrs[i]) - len(targets):]
        self.deg[i] = old_deg

    def _choices(self, i: int, m: int) -> Iterator[tuple[tuple[int, ...], int]]:
        """Candidate upper rows for vertex ``i``: (targets, new discovered max)."""
        r = self.k - self.deg[i]
        cands = [j for j in range(i + 1, m + 1)
                 if self.deg[j] < self.k and not self.adj[i] >> j & 1]
        for s in range(min(r, len(cands)), -1, -1):
            c = r - s
            if m + c > self.n - 1:
                continue
            fresh = tuple(range(m + 1, m + c + 1))
            for chosen in combinations(cands, s):
                yield chosen + fresh, m + c

    def _edges(self) -> tuple[tuple[int, int], ...]:
        return tuple((u, v) for u in range(self.n) for v in self.nbrs[u] if u < v)

    def _emit(self) -> None:
        g = from_edges(self.n, self._edges())
        # BFS form guarantees connectivity; the check is a cheap safeguard.
        if not is_connected(g):
            return
        self.stats.generated += 1
        if self.consumer is not None:
            self.consumer(g)

    def search(self, i: int, m: int, frontier: list[_State]) -> None:
        if self.split_depth is not None and i == self.split_depth:
            self.tasks.append(GenTask(self.n, self.k, self._edges(), i))
            return
        self.stats.visited += 1
        if i == self.n:
            self._emit()
            return
        if i > m:  # vertex i was never reached: disconnected
            return
        old = self.deg[i]
        for targets, m2 in self._choices(i, m):
            self._apply(i, targets)
            if self._feasible(i):
                nxt = self._check(i, frontier)
                if nxt is None:
                    self.stats.rejected_iso += 1
                else:
                    self.search(i + 1, m2, nxt)
            self._undo(i, targets, old)

    def replay(self, task: GenTask) -> tuple[int, list[_State]]:
        """Rebuild the search state at the root of ``task``."""
        upper = [[] for _ in range(self.n)]
        for u, v in task.prefix:
            u, v = min(u, v), max(u, v)
            upper[u].append(v)
        m = 0
        frontier: list[_State] = []
        for i in range(task.depth):
            if i == self.n:
                break
            targets = sorted(upper[i])
            self._apply(i, targets)
            if self.deg[i] != self.k or any(self.deg[j] > self.k for j in targets):
                raise ValueError(f"task prefix is not a valid search node: {task}")
            m = max([m] + targets)
            nxt = self._check(i, frontier)
            if nxt is None:
                raise ValueError(f"task prefix is not canonical: {task}")
            frontier = nxt
        return m, frontier


def _dense(n: int, k: int) -> bool:
    """Generate through complements when they have smaller degree.

    Comparisons try every order of a freshly discovered block of vertices,
    which costs up to ``k!`` per root; the complement keeps blocks small.
    """
    return 2 * k > n - 1


def _components(n: int, d: int, stats: GenStats) -> dict[int, list[Graph]]:
    """Connected ``d``-regular classes for every order up to ``n``."""
    out: dict[int, list[Graph]] = {}
    if d == 0:
        out[1] = [from_edges(1, [])]
        return out
    for size in range(d + 1, n + 1):
        if size * d % 2:
            continue
        found: list[Graph] = []
        s = _Search(size, d, found.append)
        s.search(0, 0, [])
        # component searches count as search work, not as output
        stats.visited += s.stats.visited
        stats.rejected_iso += s.stats.rejected_iso
        if found:
            out[size] = found
    return out


def _partitions(n: int, sizes: list[int], top: int | None = None) -> Iterator[list[int]]:
    """Non-increasing sequences from ``sizes`` summing to ``n``."""
    if n == 0:
        yield []
        return
    for s in sizes:
        if s <= n and (top is None or s <= top):
            for rest in _partitions(n - s, sizes, s):
                yield [s] + rest


def _enumerate_dense(n: int, k: int, consumer: Callable[[Graph], None] | None) -> GenStats:
    """Connected ``k``-regular graphs as complements of ``(n-1-k)``-regular ones.

    The sparse side may be disconnected: it is a multiset of connected
    components, and distinct multisets give non-isomorphic graphs.
    """
    d = n - 1 - k
    stats = GenStats()
    comps = _components(n, d, stats)
    sizes = sorted(comps, reverse=True)
    for parts in _partitions(n, sizes):
        counts: dict[int, int] = {}
        for s in parts:
            counts[s] = counts.get(s, 0) + 1
        choices = [list(combinations_with_replacement(range(len(comps[s])), c))
                   for s, c in counts.items()]
        for pick in product(*choices):
            stats.visited += 1
            pieces = [comps[s][i] for s, idxs in zip(counts, pick) for i in idxs]
            adj = []
            offset = 0
            for h in pieces:
                adj.extend(m << offset for m in h.adjacency)
                offset += h.n
            g = from_edges(n, ((u, v) for u in range(n)
                               for v in range(u + 1, n) if not adj[u] >> v & 1))
            if not is_connected(g):
                continue
            stats.generated += 1
            if consumer is not None:
                consumer(g)
    return stats


def enumerate_regular(n: int, k: int, consumer: Callable[[Graph], None] | None = None) -> GenStats:
    """Call ``consumer`` once per isomorphism class of connected ``k``-regular graphs.

    Returns the search statistics.  When ``n * k`` is odd nothing is emitted
    and ``parity_violation`` is set on the returned stats.
    """
    if not _validate(n, k):
        return GenStats(parity_violation=True)
    if _dense(n, k):
        return _enumerate_dense(n, k, consumer)
    s = _Search(n, k, consumer)
    s.search(0, 0, [])
    return s.stats


def _split(n: int, k: int, split_depth: int) -> tuple[list[GenTask], GenStats]:
    if split_depth < 0:
        raise ValueError("split_depth must be >= 0")
    if not _validate(n, k):
        return [], GenStats(parity_violation=True)
    if _dense(n, k):
        # complement generation runs as a single task
        return [GenTask(n, k, (), 0)], GenStats()
    s = _Search(n, k, None)
    s.split_depth = min(split_depth, n)
    s.search(0, 0, [])
    return s.tasks, s.stats


def split_tasks(n: int, k: int, split_depth: int) -> list[GenTask]:
    """Partition the search tree into independent subtrees at ``split_depth`` rows."""
    return _split(n, k, split_depth)[0]


def run_task(task: GenTask, consumer: Callable[[Graph], None] | None = None) -> GenStats:
    """Run one subtree produced by :func:`split_tasks`."""
    if not _validate(task.n, task.k):
        return GenStats(parity_violation=True)
    if _dense(task.n, task.k):
        if task.depth or task.prefix:
            raise ValueError(f"dense parameters run as one unsplit task: {task}")
        return _enumerate_dense(task.n, task.k, consumer)
    s = _Search(task.n, task.k, consumer)
    m, frontier = s.replay(task)
    s.search(task.depth, m, frontier)
    return s.stats


def count_regular(n: int, k: int) -> int:
    return enumerate_regular(n, k).generated


def iter_regular(n: int, k: int) -> list[Graph]:
    """All classes as a list (convenience for small cases)."""
    out: list[Graph] = []
    enumerate_regular(n, k, out.append)
    return out
