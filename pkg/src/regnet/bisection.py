"""Minimum bisection width.

Exact solver: depth-first branch and bound.  Vertices are assigned in an
attachment order (next vertex = most neighbours already placed); the lower
bound adds, for every unplaced vertex, the edges it must cut whichever side
it joins, with sides that are already full counted as forced.  A
Kernighan-Lin local search supplies the starting incumbent.  A second pass in
vertex-index order with the optimum known recovers the lexicographically
least optimal side assignment, so the witness does not depend on the search
order.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .graph import Graph


@dataclass(frozen=True)
class BisectionResult:
    width: int
    witness: tuple[int, ...]  # side (0 or 1) per vertex; vertex 0 is on side 0
    exact: bool

    @property
    def parts(self) -> tuple[list[int], list[int]]:
        a = [v for v, s in enumerate(self.witness) if s == 0]
        b = [v for v, s in enumerate(self.witness) if s == 1]
        return a, b


def cut_size(g: Graph, sides) -> int:
    return sum(1 for u, v in g.edges if sides[u] != sides[v])


def is_balanced(sides) -> bool:
    ones = sum(sides)
    return abs(len(sides) - 2 * ones) <= 1


def _normalize(sides) -> tuple[int, ...]:
    if sides and sides[0] == 1:
        return tuple(1 - s for s in sides)
    return tuple(sides)


def _attachment_order(g: Graph) -> list[int]:
    n = g.n
    order = [0]
    placed = 1
    score = [0] * n
    for u in g.neighbors(0):
        score[u] += 1
    while len(order) < n:
        v = max((u for u in range(n) if not placed >> u & 1),
                key=lambda u: (score[u], g.degree(u), -u))
        order.append(v)
        placed |= 1 << v
        for u in g.neighbors(v):
            score[u] += 1
    return order


def _branch_and_bound(g: Graph, order: list[int], limit: int, first_only: bool):
    """Search assignments along ``order`` for cuts below ``limit``.

    With ``first_only`` the first assignment reaching ``limit - 1`` or better
    in DFS order (side 0 tried first) is returned; otherwise the best one.
    Returns (width, sides) or None.
    """
    n = g.n
    hi = (n + 1) // 2
    lo = n // 2
    nbrs = [g.neighbors(v) for v in range(n)]
    sides = [-1] * n
    # cnt[v][s]: neighbours of v already placed on side s
    cnt = [[0, 0] for _ in range(n)]
    size = [0, 0]
    best = [limit, None]

    def bound(cut: int) -> int:
        full0 = size[0] >= hi
        full1 = size[1] >= hi
        # a part that already holds floor(n/2) can take one more vertex at most
        extra = 0
        for v in range(n):
            if sides[v] < 0:
                c0, c1 = cnt[v]
                if full0:
                    extra += c0
                elif full1:
                    extra += c1
                else:
                    extra += c0 if c0 < c1 else c1
        return cut + extra

    def rec(i: int, cut: int) -> bool:
        if i == n:
            if size[0] in (lo, hi) and cut < best[0]:
                best[0] = cut
                best[1] = tuple(sides)
                return first_only
            return False
        v = order[i]
        for s in (0, 1):
            if size[s] >= hi:
                continue
            # leave room so the other side can still reach floor(n/2)
            if size[1 - s] + (n - i - 1) < lo:
                continue
            add = cnt[v][1 - s]
            sides[v] = s
            size[s] += 1
            for u in nbrs[v]:
                cnt[u][s] += 1
            if bound(cut + add) < best[0] and rec(i + 1, cut + add):
                return True
            for u in nbrs[v]:
                cnt[u][s] -= 1
            size[s] -= 1
            sides[v] = -1
        return False

    # vertex 0 fixed on side 0
    v0 = order[0]
    sides[v0] = 0
    size[0] = 1
    for u in nbrs[v0]:
        cnt[u][0] += 1
    rec(1, 0)
    if best[1] is None:
        return None
    return best[0], best[1]


def min_bisection(g: Graph, seed_restarts: int = 8) -> BisectionResult:
    """Exact minimum bisection with a deterministic witness."""
    n = g.n
    if n <= 1:
        return BisectionResult(0, (0,) * n, True)
    seed = heuristic_bisection(g, restarts=seed_restarts, seed=0)
    found = _branch_and_bound(g, _attachment_order(g), seed.width, first_only=False)
    width = seed.width if found is None else found[0]
    lex = _branch_and_bound(g, list(range(n)), width + 1, first_only=True)
    assert lex is not None and lex[0] == width
    return BisectionResult(width, _normalize(lex[1]), True)


def _kl_pass(nbrs, sides: list[int]) -> int:
    """One Kernighan-Lin pass; returns the total gain applied (>= 0)."""
    n = len(sides)
    d = [0] * n
    for v in range(n):
        ext = sum(1 for u in nbrs[v] if sides[u] != sides[v])
        d[v] = 2 * ext - len(nbrs[v])  # external minus internal
    locked = [False] * n
    swaps = []
    gains = []
    work = sides[:]
    while True:
        best = None
        a_side = [v for v in range(n) if not locked[v] and work[v] == 0]
        b_side = [v for v in range(n) if not locked[v] and work[v] == 1]
        if not a_side or not b_side:
            break
        for a in a_side:
            for b in b_side:
                gain = d[a] + d[b] - (2 if b in nbrs[a] else 0)
                if best is None or gain > best[0]:
                    best = (gain, a, b)
        gain, a, b = best
        locked[a] = locked[b] = True
        swaps.append((a, b))
        gains.append(gain)
        work[a], work[b] = 1, 0
        for x, moved_to in ((a, 1), (b, 0)):
            for u in nbrs[x]:
                if locked[u]:
                    continue
                # u's external/internal balance changes by 2 either way
                d[u] += 2 if work[u] != moved_to else -2
    total = 0
    best_total = 0
    best_k = 0
    for i, gval in enumerate(gains):
        total += gval
        if total > best_total:
            best_total, best_k = total, i + 1
    for a, b in swaps[:best_k]:
        sides[a], sides[b] = 1, 0
    return best_total


def heuristic_bisection(g: Graph, restarts: int = 16, seed: int = 0) -> BisectionResult:
    """Kernighan-Lin from random balanced starts; an upper bound on the width."""
    if restarts < 1:
        raise ValueError("restarts must be >= 1")
    n = g.n
    if n <= 1:
        return BisectionResult(0, (0,) * n, False)
    rng = random.Random(seed)
    nbrs = [set(g.neighbors(v)) for v in range(n)]
    best = None
    for _ in range(restarts):
        perm = list(range(n))
        rng.shuffle(perm)
        sides = [0] * n
        for v in perm[: n // 2]:
            sides[v] = 1
        while _kl_pass(nbrs, sides) > 0:
            pass
        w = cut_size(g, sides)
        cand = (w, _normalize(sides))
        if best is None or cand < best:
            best = cand
    return BisectionResult(best[0], best[1], False)
