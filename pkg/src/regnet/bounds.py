"""Moore bound and the derived lower bounds on diameter and mean path length.

All quantities are computed with integers and :class:`~fractions.Fraction`;
no floating-point logarithms are involved, so the exact Moore sizes
``n == moore_bound(k, d)`` land on the right side of the ceiling.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .graph import Graph, degree_profile, metrics


class DegreeTooSmall(ValueError):
    pass


class NotRegular(ValueError):
    pass


class Disconnected(ValueError):
    pass


def moore_bound(k: int, d: int) -> int:
    """Maximum order of a graph with maximum degree ``k`` and diameter ``d``."""
    if k < 2:
        raise DegreeTooSmall(f"Moore bound needs k >= 2, got {k}")
    if d < 0:
        raise ValueError(f"diameter must be non-negative, got {d}")
    if k == 2:
        return 1 + 2 * d
    return (k * (k - 1) ** d - 2) // (k - 2)


def _check_args(k: int, n: int) -> None:
    if k < 3:
        raise DegreeTooSmall(f"bound defined for k >= 3, got {k}")
    if n < k + 1:
        raise ValueError(f"a {k}-regular graph needs at least {k + 1} vertices, got {n}")


def diameter_lower_bound(k: int, n: int) -> int:
    """Smallest ``d`` with ``moore_bound(k, d) >= n``."""
    _check_args(k, n)
    d = 1
    while moore_bound(k, d) < n:
        d += 1
    return d


def mpl_lower_bound(k: int, n: int) -> Fraction:
    """Lower bound on mean path length of a ``k``-regular graph on ``n`` vertices.

    Fill BFS layers from any vertex as in a Moore tree (``k(k-1)^(i-1)``
    vertices at distance ``i``) up to the minimal diameter, with the last
    layer truncated to what is left of the ``n - 1`` other vertices.
    """
    _check_args(k, n)
    dmin = diameter_lower_bound(k, n)
    total = k * sum((k - 1) ** (i - 1) * i for i in range(1, dmin + 1))
    total -= (moore_bound(k, dmin) - n) * dmin
    return Fraction(total, n - 1)


@dataclass(frozen=True)
class BoundsRecord:
    n: int
    k: int
    moore_at_dmin: int
    d_min: int
    mpl_min: Fraction


def bounds_record(n: int, k: int) -> BoundsRecord:
    """Bounds for ``(n, k)``.

    ``k = 2`` uses the cycle: its diameter ``n // 2`` is forced and the
    cycle's own MPL is the (trivially attained) minimum.
    """
    if k == 2:
        if n < 3:
            raise ValueError(f"a 2-regular graph needs at least 3 vertices, got {n}")
        d = n // 2
        total = n * sum(min(i, n - i) for i in range(1, n))
        return BoundsRecord(n, 2, moore_bound(2, d), d, Fraction(total, n * (n - 1)))
    d = diameter_lower_bound(k, n)
    return BoundsRecord(n, k, moore_bound(k, d), d, mpl_lower_bound(k, n))


def is_generalized_moore(g: Graph) -> bool:
    """True when the graph's MPL equals :func:`mpl_lower_bound` exactly."""
    regular, k = degree_profile(g)
    if not regular:
        raise NotRegular("graph is not regular")
    m = metrics(g)
    if not m.connected:
        raise Disconnected("graph is disconnected")
    return m.mpl == mpl_lower_bound(k, g.n)
