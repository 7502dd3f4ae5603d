"""Canonical labelling and automorphism groups by individualization-refinement.

The search tree has the equitable refinement of the unit partition at its
root; each child individualizes one vertex of the first smallest
non-singleton cell and refines again.  Leaves are discrete partitions, i.e.
relabellings.  The canonical leaf is the maximum of (refinement trace,
relabelled adjacency), and leaves that tie with the first or the best leaf
yield automorphisms.  Pruning uses those automorphisms (orbits of the
pointwise stabilizer of the current path, and a return to the divergence
point after an automorphism with the first leaf) plus the traces.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .graph import Graph
from .permgroup import Perm, StabilizerChain, orbits

MAX_VERTICES = 64


class TooLarge(ValueError):
    pass


def _check_size(g: Graph) -> None:
    if g.n > MAX_VERTICES:
        raise TooLarge(f"symmetry routines support n <= {MAX_VERTICES}, got {g.n}")


class _Partition:
    """Ordered partition stored as ``lab`` plus the start of each vertex's cell."""

    __slots__ = ("lab", "start", "size")

    def __init__(self, lab, start, size):
        self.lab = lab
        self.start = start  # start[v]: index in lab where v's cell begins
        self.size = size    # size[s]: length of the cell beginning at s

    def copy(self) -> "_Partition":
        return _Partition(self.lab[:], self.start[:], dict(self.size))

    def is_discrete(self) -> bool:
        return len(self.size) == len(self.lab)

    def target_cell(self) -> int:
        best = None
        for s in sorted(self.size):
            L = self.size[s]
            if L > 1 and (best is None or L < self.size[best]):
                best = s
        return best


def _refine(adj, part: _Partition, splitters: set[int]) -> tuple:
    """Refine ``part`` to the coarsest equitable refinement; return the trace."""
    lab, start, size = part.lab, part.start, part.size
    trace = []
    pending = set(splitters)
    while pending:
        w = min(pending)
        pending.discard(w)
        wmask = 0
        for v in lab[w:w + size[w]]:
            wmask |= 1 << v
        for s in sorted(size):
            L = size[s]
            if L == 1:
                continue
            cell = lab[s:s + L]
            counts = [(adj[v] & wmask).bit_count() for v in cell]
            if min(counts) == max(counts):
                continue
            groups: dict[int, list[int]] = {}
            for v, c in zip(cell, counts):
                groups.setdefault(c, []).append(v)
            keys = sorted(groups)
            pos = s
            was_pending = s in pending
            new_starts = []
            for c in keys:
                members = sorted(groups[c])
                lab[pos:pos + len(members)] = members
                size[pos] = len(members)
                for v in members:
                    start[v] = pos
                new_starts.append(pos)
                trace.append((w, pos, c, len(members)))
                pos += len(members)
            if was_pending:
                pending.update(new_starts)
            else:
                # Hopcroft: all but one largest piece suffice
                largest = max(new_starts, key=lambda t: (size[t], -t))
                pending.update(t for t in new_starts if t != largest)
    trace.append((-1, len(size), 0, 0))
    return tuple(trace)


def _individualize(part: _Partition, v: int) -> int:
    s = part.start[v]
    L = part.size[s]
    lab = part.lab
    i = lab.index(v, s, s + L)
    lab[s], lab[i] = lab[i], lab[s]
    rest = sorted(lab[s + 1:s + L])
    lab[s + 1:s + L] = rest
    part.size[s] = 1
    part.size[s + 1] = L - 1
    for u in rest:
        part.start[u] = s + 1
    return s


def _certificate(adj, lab) -> tuple[int, ...]:
    pos = [0] * len(lab)
    for i, v in enumerate(lab):
        pos[v] = i
    rows = []
    for v in lab:
        m = adj[v]
        row = 0
        while m:
            low = m & -m
            row |= 1 << pos[low.bit_length() - 1]
            m ^= low
        rows.append(row)
    return tuple(rows)


@dataclass
class _Leaf:
    traces: tuple
    cert: tuple
    lab: list[int]
    path: tuple[int, ...]


@dataclass
class _Search:
    adj: tuple
    n: int
    first: _Leaf | None = None
    best: _Leaf | None = None
    generators: list[Perm] = field(default_factory=list)
    nodes: int = 0

    def _perm(self, a: _Leaf, b: _Leaf) -> Perm:
        p = [0] * self.n
        for x, y in zip(a.lab, b.lab):
            p[x] = y
        return tuple(p)

    def _add_generator(self, p: Perm) -> None:
        if any(i != x for i, x in enumerate(p)) and p not in self.generators:
            self.generators.append(p)

    def _stab_orbit_rep(self, path: tuple[int, ...]):
        gens = [g for g in self.generators if all(g[v] == v for v in path)]
        parent = list(range(self.n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for g in gens:
            for x in range(self.n):
                a, b = find(x), find(g[x])
                if a != b:
                    parent[max(a, b)] = min(a, b)
        return find

    def leaf(self, part: _Partition, traces: tuple, path: tuple[int, ...]) -> int | None:
        """Process a leaf; return a level to jump back to, if any."""
        leaf = _Leaf(traces, _certificate(self.adj, part.lab), part.lab[:], path)
        if self.first is None:
            self.first = self.best = leaf
            return None
        if leaf.traces == self.first.traces and leaf.cert == self.first.cert:
            self._add_generator(self._perm(self.first, leaf))
            common = 0
            while common < len(path) and path[common] == self.first.path[common]:
                common += 1
            return common
        key = (leaf.traces, leaf.cert)
        best_key = (self.best.traces, self.best.cert)
        if key == best_key:
            self._add_generator(self._perm(self.best, leaf))
        elif key > best_key:
            self.best = leaf
        return None

    def explore(self, part: _Partition, traces: tuple, path: tuple[int, ...]) -> int | None:
        self.nodes += 1
        if part.is_discrete():
            return self.leaf(part, traces, path)
        level = len(path)
        s = part.target_cell()
        children = sorted(part.lab[s:s + part.size[s]])
        done: list[int] = []
        for v in children:
            if done:
                find = self._stab_orbit_rep(path)
                if any(find(v) == find(u) for u in done):
                    continue
            done.append(v)
            child = part.copy()
            cell = _individualize(child, v)
            t = traces + (_refine(self.adj, child, {cell}),)
            if self.first is not None:
                d = len(t)
                on_first = t == self.first.traces[:d]
                if not on_first and t < self.best.traces[:d]:
                    continue
            jump = self.explore(child, t, path + (v,))
            if jump is not None and jump < level:
                return jump
        return None


def _run(g: Graph) -> _Search:
    _check_size(g)
    n = g.n
    search = _Search(g.adjacency, n)
    part = _Partition(list(range(n)), [0] * n, {0: n} if n else {})
    if n == 0:
        search.first = search.best = _Leaf((), (), [], ())
        return search
    t0 = _refine(g.adjacency, part, {0})
    search.explore(part, (t0,), ())
    return search


@dataclass(frozen=True)
class CanonicalForm:
    bytes: bytes

    def __str__(self) -> str:
        return self.bytes.hex()


def _encode(n: int, cert: tuple[int, ...]) -> bytes:
    width = max(1, (n + 7) // 8)
    return n.to_bytes(2, "big") + b"".join(r.to_bytes(width, "big") for r in cert)


def canonical_labeling(g: Graph) -> list[int]:
    """``lab[i]`` is the vertex placed at canonical position ``i``."""
    return _run(g).best.lab[:]


def canonical_graph(g: Graph) -> Graph:
    lab = canonical_labeling(g)
    perm = [0] * g.n
    for i, v in enumerate(lab):
        perm[v] = i
    return g.relabel(perm)


def canonical_form(g: Graph) -> CanonicalForm:
    s = _run(g)
    return CanonicalForm(_encode(g.n, s.best.cert))


def is_isomorphic(g: Graph, h: Graph) -> bool:
    _check_size(g)
    _check_size(h)
    if g.n != h.n or g.num_edges != h.num_edges:
        return False
    if sorted(g.degree(v) for v in range(g.n)) != sorted(h.degree(v) for v in range(h.n)):
        return False
    return canonical_form(g) == canonical_form(h)


@dataclass(frozen=True)
class SymmetryResult:
    order: int
    generators: tuple[Perm, ...]
    orbits: tuple[tuple[int, ...], ...]
    vertex_transitive: bool
    edge_transitive: bool
    canonical: CanonicalForm


def edge_orbits(g: Graph, generators) -> list[list[tuple[int, int]]]:
    index = {e: i for i, e in enumerate(g.edges)}
    parent = list(range(len(g.edges)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for p in generators:
        for i, (u, v) in enumerate(g.edges):
            a, b = p[u], p[v]
            j = index[(a, b) if a < b else (b, a)]
            ri, rj = find(i), find(j)
            if ri != rj:
                parent[max(ri, rj)] = min(ri, rj)
    classes: dict[int, list[tuple[int, int]]] = {}
    for i, e in enumerate(g.edges):
        classes.setdefault(find(i), []).append(e)
    return [classes[r] for r in sorted(classes)]


def automorphisms(g: Graph) -> SymmetryResult:
    s = _run(g)
    gens = tuple(s.generators)
    order = StabilizerChain(g.n, gens).order()
    vorb = tuple(tuple(o) for o in orbits(g.n, gens))
    eorb = edge_orbits(g, gens)
    return SymmetryResult(
        order=order,
        generators=gens,
        orbits=vorb,
        vertex_transitive=len(vorb) <= 1,
        edge_transitive=len(eorb) <= 1,
        canonical=CanonicalForm(_encode(g.n, s.best.cert)),
    )
