"""Permutation groups given by generators: stabilizer chain and orbits.

Permutations are tuples of images, ``p[x]`` is the image of ``x``.
Products compose left to right: ``mul(p, q)`` applies ``p`` first.
"""

from __future__ import annotations

from math import prod
from typing import Iterable, Sequence

Perm = tuple[int, ...]


def identity(n: int) -> Perm:
    return tuple(range(n))


def mul(p: Perm, q: Perm) -> Perm:
    return tuple(q[x] for x in p)


def inverse(p: Perm) -> Perm:
    out = [0] * len(p)
    for i, x in enumerate(p):
        out[x] = i
    return tuple(out)


def is_identity(p: Perm) -> bool:
    return all(i == x for i, x in enumerate(p))


class StabilizerChain:
    """Base and strong generating set built by the deterministic Schreier-Sims method.

    ``transversals[i]`` maps each point of the orbit of ``base[i]`` under the
    pointwise stabilizer of ``base[:i]`` to a coset representative sending
    ``base[i]`` there.
    """

    def __init__(self, n: int, generators: Iterable[Sequence[int]]):
        self.n = n
        gens = [tuple(g) for g in generators if not is_identity(tuple(g))]
        self.base: list[int] = []
        self.strong: list[list[Perm]] = []
        self.transversals: list[dict[int, Perm]] = []
        for g in gens:
            if all(g[b] == b for b in self.base):
                self._add_base_point(next(x for x in range(n) if g[x] != x))
        for i in range(len(self.base)):
            self.strong[i] = [g for g in gens if all(g[b] == b for b in self.base[:i])]
            self._orbit(i)
        self._complete()

    def _add_base_point(self, b: int) -> None:
        self.base.append(b)
        self.strong.append([])
        self.transversals.append({b: identity(self.n)})

    def _orbit(self, i: int) -> None:
        b = self.base[i]
        u = {b: identity(self.n)}
        queue = [b]
        for p in queue:
            for s in self.strong[i]:
                q = s[p]
                if q not in u:
                    u[q] = mul(u[p], s)
                    queue.append(q)
        self.transversals[i] = u

    def strip(self, h: Perm, start: int = 0) -> tuple[Perm, int]:
        """Sift ``h`` through levels ``start..``; return (residue, level reached)."""
        for level in range(start, len(self.base)):
            beta = h[self.base[level]]
            u = self.transversals[level].get(beta)
            if u is None:
                return h, level
            h = mul(h, inverse(u))
        return h, len(self.base)

    def _complete(self) -> None:
        i = len(self.base) - 1
        while i >= 0:
            restart = self._check_level(i)
            i = i - 1 if restart is None else restart

    def _check_level(self, i: int) -> int | None:
        u = self.transversals[i]
        for p in list(u):
            for s in list(self.strong[i]):
                q = s[p]
                h = mul(mul(u[p], s), inverse(u[q]))
                if is_identity(h):
                    continue
                residue, j = self.strip(h, i + 1)
                if j < len(self.base) or not is_identity(residue):
                    if j == len(self.base):
                        self._add_base_point(next(x for x in range(self.n) if residue[x] != x))
                    for level in range(i + 1, j + 1):
                        self.strong[level].append(residue)
                        self._orbit(level)
                    return j
        return None

    def order(self) -> int:
        return prod(len(t) for t in self.transversals)

    def contains(self, g: Sequence[int]) -> bool:
        residue, level = self.strip(tuple(g))
        return level == len(self.base) and is_identity(residue)


def group_order(n: int, generators: Iterable[Sequence[int]]) -> int:
    return StabilizerChain(n, generators).order()


def orbits(n: int, generators: Iterable[Sequence[int]]) -> list[list[int]]:
    """Orbits of the group on ``0..n-1``, each sorted, ordered by least element."""
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for g in generators:
        for x in range(n):
            a, b = find(x), find(g[x])
            if a != b:
                parent[max(a, b)] = min(a, b)
    classes: dict[int, list[int]] = {}
    for x in range(n):
        classes.setdefault(find(x), []).append(x)
    return [classes[r] for r in sorted(classes)]
