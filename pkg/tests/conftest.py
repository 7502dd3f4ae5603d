import itertools
import random
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from regnet.graph import from_edges  # noqa: E402

# Brinkmann graph: 21 vertices, 4-regular, girth 5.
_BRINKMANN = {
    0: [2, 5, 7, 13], 1: [3, 6, 7, 8], 2: [4, 8, 9], 3: [5, 9, 10], 4: [6, 10, 11],
    5: [11, 12], 6: [12, 13], 7: [15, 20], 8: [14, 16], 9: [15, 17], 10: [16, 18],
    11: [17, 19], 12: [18, 20], 13: [14, 19], 14: [17, 18], 15: [18, 19],
    16: [19, 20], 17: [20],
}


def brinkmann_graph():
    return from_edges(21, [(u, v) for u, vs in _BRINKMANN.items() for v in vs])


def kneser_5_2():
    """Vertices are 2-subsets of {0..4}; adjacent when disjoint."""
    subsets = list(itertools.combinations(range(5), 2))
    pairs = [(i, j) for i, a in enumerate(subsets) for j, b in enumerate(subsets)
             if i < j and not set(a) & set(b)]
    return from_edges(10, pairs)


def prism_graph():
    return from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5),
                          (0, 3), (1, 4), (2, 5)])


def random_regular(n, k, rng, swaps=None):
    """Random simple k-regular graph: a circulant scrambled by double-edge swaps."""
    if n * k % 2 or k >= n:
        raise ValueError(f"no {k}-regular graph on {n} vertices")
    edges = {(min(i, (i + s) % n), max(i, (i + s) % n))
             for i in range(n) for s in range(1, k // 2 + 1)}
    if k % 2:
        edges |= {(i, i + n // 2) for i in range(n // 2)}
    edges = sorted(edges)
    present = set(edges)
    for _ in range(swaps or 10 * len(edges)):
        i, j = rng.sample(range(len(edges)), 2)
        (a, b), (c, d) = edges[i], edges[j]
        if rng.random() < 0.5:
            c, d = d, c
        e1, e2 = (min(a, c), max(a, c)), (min(b, d), max(b, d))
        if a == c or b == d or e1 in present or e2 in present:
            continue
        present -= {edges[i], edges[j]}
        present |= {e1, e2}
        edges[i], edges[j] = e1, e2
    return from_edges(n, edges)


def random_perm(n, rng):
    p = list(range(n))
    rng.shuffle(p)
    return p


@pytest.fixture
def rng():
    return random.Random(20240611)


@pytest.fixture
def brinkmann():
    return brinkmann_graph()


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for num in sorted(results):
            terminalreporter.write_line(results[num])
