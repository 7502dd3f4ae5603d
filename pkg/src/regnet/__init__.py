"""Optimal regular graphs for interconnection networks.

Enumerates connected regular graphs and ranks them by diameter, mean path
length, bisection width and automorphism group order.
"""

from .bisection import BisectionResult, heuristic_bisection, min_bisection
from .bounds import (
    BoundsRecord,
    bounds_record,
    diameter_lower_bound,
    is_generalized_moore,
    moore_bound,
    mpl_lower_bound,
)
from .enumerate import GenStats, GenTask, enumerate_regular, run_task, split_tasks
from .graph import (
    Graph,
    Metrics,
    bfs_distances,
    cartesian_product,
    degree_profile,
    from_edges,
    metrics,
)
from .pipeline import OptimalSet, Score, evaluate, optimize, report
from .symmetry import automorphisms, canonical_form, is_isomorphic

__version__ = "0.1.0"
