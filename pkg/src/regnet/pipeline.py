"""Lexicographic selection of optimal (n, k) graphs.

Graphs are ranked by diameter (smaller first), then mean path length
(smaller), then bisection width (larger), then automorphism group order
(larger).  ``optimize`` runs in two phases: exhaustive enumeration keeps only
the graphs minimising (diameter, distance sum); bisection and symmetry are
then computed for those survivors alone.
"""

from __future__ import annotations

import csv
import io
import json
import os
import tempfile
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from . import graph6
from .bisection import min_bisection
from .bounds import BoundsRecord, Disconnected, NotRegular, bounds_record
from .enumerate import (
    GenStats,
    GenTask,
    InvalidDegree,
    ParityViolation,
    _split,
    run_task,
)
from .graph import Graph, cycle_graph, degree_profile, format_mpl, metrics
from .symmetry import SymmetryResult, automorphisms

DEFAULT_MEMORY_CAP = 10**6
DEFAULT_SPLIT_DEPTH = 4


class MixedParameters(ValueError):
    pass


class Interrupted(RuntimeError):
    def __init__(self, checkpoint: str):
        super().__init__(f"interrupted; checkpoint written to {checkpoint}")
        self.checkpoint = checkpoint


class BoundViolation(AssertionError):
    """A computed value beat a theoretical lower bound (a bug somewhere)."""


@dataclass(frozen=True)
class Score:
    diameter: int
    distance_sum: int
    bisection: int
    aut_order: int

    def key(self) -> tuple[int, int, int, int]:
        """Sort key: smaller is better."""
        return (self.diameter, self.distance_sum, -self.bisection, -self.aut_order)


def compare(a: Score, b: Score) -> int:
    """-1 if ``a`` ranks better than ``b``, 1 if worse, 0 on a tie."""
    ka, kb = a.key(), b.key()
    return (ka > kb) - (ka < kb)


@dataclass(frozen=True)
class Member:
    graph: Graph
    score: Score
    symmetry: SymmetryResult

    @property
    def mpl(self) -> Fraction:
        n = self.graph.n
        return Fraction(self.score.distance_sum, n * (n - 1))

    @property
    def graph6(self) -> str:
        return graph6.encode(self.graph)


@dataclass
class OptimalSet:
    n: int
    k: int
    members: list[Member]
    bounds: BoundsRecord
    diameter_meets_bound: bool
    mpl_meets_bound: bool
    stats: GenStats = field(default_factory=GenStats)
    wall_seconds: float | None = None

    @property
    def tie_count(self) -> int:
        return len(self.members)

    @property
    def graphs(self) -> list[Graph]:
        return [m.graph for m in self.members]

    @property
    def score(self) -> Score | None:
        return self.members[0].score if self.members else None


# -- bound flags --------------------------------------------------------------

def bound_flags(n: int, k: int, diameter: int, distance_sum: int) -> tuple[bool, bool]:
    """(diameter meets bound, MPL meets bound); raises if a bound is beaten."""
    b = bounds_record(n, k)
    mpl = Fraction(distance_sum, n * (n - 1))
    if diameter < b.d_min or mpl < b.mpl_min:
        raise BoundViolation(
            f"({n},{k}): diameter {diameter} / MPL {mpl} below bound {b.d_min} / {b.mpl_min}"
        )
    return diameter == b.d_min, mpl == b.mpl_min


# -- survivor store -------------------------------------------------------------

class SurvivorStore:
    """Graphs tying for the best (diameter, distance_sum) seen so far.

    Records are graph6 strings.  Beyond ``cap`` records the store spills to a
    file under ``spill_dir``; a strict improvement clears everything.
    """

    def __init__(self, cap: int = DEFAULT_MEMORY_CAP, spill_dir: str | None = None, tag: str = "survivors"):
        self.cap = cap
        self.spill_dir = spill_dir
        self.best: tuple[int, int] | None = None
        self._mem: list[str] = []
        self._spilled = 0
        self._path = os.path.join(spill_dir, f"{tag}.g6") if spill_dir else None
        if self._path and os.path.exists(self._path):
            os.remove(self._path)

    def offer(self, key: tuple[int, int], record: str) -> None:
        if self.best is None or key < self.best:
            self.best = key
            self.clear()
        elif key > self.best:
            return
        self._mem.append(record)
        if len(self._mem) > self.cap:
            self._spill()

    def clear(self) -> None:
        self._mem = []
        self._spilled = 0
        if self._path and os.path.exists(self._path):
            os.remove(self._path)

    def _spill(self) -> None:
        if self._path is None:
            raise MemoryError(
                f"more than {self.cap} survivors and no spill directory configured"
            )
        os.makedirs(self.spill_dir, exist_ok=True)
        with open(self._path, "a") as fh:
            fh.writelines(r + "\n" for r in self._mem)
        self._spilled += len(self._mem)
        self._mem = []

    def __len__(self) -> int:
        return self._spilled + len(self._mem)

    def __iter__(self):
        if self._spilled:
            with open(self._path) as fh:
                for line in fh:
                    yield line.strip()
        yield from self._mem


# -- phase 1 ------------------------------------------------------------------------

def _phase1(task: GenTask) -> tuple[tuple[int, int] | None, list[str], GenStats]:
    best: list = [None]
    keep: list[str] = []

    def consume(g: Graph) -> None:
        m = metrics(g)
        key = (m.diameter, m.distance_sum)
        if best[0] is None or key < best[0]:
            best[0] = key
            keep.clear()
        elif key > best[0]:
            return
        keep.append(graph6.encode(g))

    stats = run_task(task, consume)
    return best[0], keep, stats


def _checkpoint_path(n: int, k: int, spill_dir: str | None) -> str:
    return os.path.join(spill_dir or tempfile.gettempdir(), f"regnet-checkpoint-{n}-{k}.json")


def _write_checkpoint(path, n, k, split_depth, done, store: SurvivorStore, stats: GenStats) -> None:
    payload = {
        "n": n, "k": k, "split_depth": split_depth,
        "done": sorted(done),
        "best": list(store.best) if store.best else None,
        "survivors": list(store),
        "stats": {"visited": stats.visited, "generated": stats.generated,
                  "rejected_iso": stats.rejected_iso},
    }
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    tmp = path + ".tmp"
    with open(tmp, "w") as fh:
        json.dump(payload, fh)
    os.replace(tmp, path)


# -- phase 2 ------------------------------------------------------------------------

def _bisection_width(record: str) -> int:
    return min_bisection(graph6.decode(record)).width


def _symmetry(record: str) -> SymmetryResult:
    return automorphisms(graph6.decode(record))


def _map(fn, items: Sequence, jobs: int) -> list:
    if jobs <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items, chunksize=max(1, len(items) // (4 * jobs))))


def _select(records: list[str], phase1_key: tuple[int, int], jobs: int) -> list[Member]:
    """Keep the records maximising bisection, then automorphism order."""
    widths = _map(_bisection_width, records, jobs)
    top = max(widths)
    records = [r for r, w in zip(records, widths) if w == top]
    syms = _map(_symmetry, records, jobs)
    best_order = max(s.order for s in syms)
    members: dict[bytes, Member] = {}
    for r, s in zip(records, syms):
        if s.order != best_order:
            continue
        cf = s.canonical.bytes
        if cf not in members:
            score = Score(phase1_key[0], phase1_key[1], top, best_order)
            members[cf] = Member(graph6.decode(r), score, s)
    return sorted(members.values(), key=lambda m: m.graph6)


def _cycle_set(n: int) -> OptimalSet:
    g = cycle_graph(n)
    m = metrics(g)
    s = automorphisms(g)
    score = Score(int(m.diameter), m.distance_sum, min_bisection(g).width, s.order)
    b = bounds_record(n, 2)
    return OptimalSet(n, 2, [Member(g, score, s)], b, True, True, GenStats(generated=1))


def optimize(
    n: int,
    k: int,
    jobs: int = 1,
    split_depth: int = DEFAULT_SPLIT_DEPTH,
    spill_dir: str | None = None,
    memory_cap: int = DEFAULT_MEMORY_CAP,
    resume: bool = False,
) -> OptimalSet:
    """All optimal connected ``k``-regular graphs on ``n`` vertices.

    The result does not depend on ``jobs`` or ``split_depth``.  On
    ``KeyboardInterrupt`` a checkpoint is written and :class:`Interrupted`
    raised; ``resume=True`` continues from it.
    """
    if k < 2 or k >= n:
        raise InvalidDegree(f"need 2 <= k < n, got n={n}, k={k}")
    if (n * k) % 2:
        raise ParityViolation(f"n*k = {n * k} is odd: no {k}-regular graph on {n} vertices")
    t0 = time.perf_counter()
    if k == 2:
        result = _cycle_set(n)
        result.wall_seconds = time.perf_counter() - t0
        return result

    tasks, stats = _split(n, k, split_depth)
    store = SurvivorStore(memory_cap, spill_dir, tag=f"survivors-{n}-{k}")
    ckpt = _checkpoint_path(n, k, spill_dir)
    done: set[int] = set()
    if resume and os.path.exists(ckpt):
        with open(ckpt) as fh:
            saved = json.load(fh)
        if (saved["n"], saved["k"], saved["split_depth"]) != (n, k, split_depth):
            raise ValueError(f"checkpoint {ckpt} was written for different parameters")
        done = set(saved["done"])
        stats = GenStats(**saved["stats"])
        if saved["best"] is not None:
            key = tuple(saved["best"])
            for r in saved["survivors"]:
                store.offer(key, r)

    pending = [i for i in range(len(tasks)) if i not in done]
    try:
        if jobs <= 1:
            results = ((i, _phase1(tasks[i])) for i in pending)
            _merge(results, store, stats, done)
        else:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                results = zip(pending, pool.map(_phase1, [tasks[i] for i in pending]))
                _merge(results, store, stats, done)
    except KeyboardInterrupt:
        _write_checkpoint(ckpt, n, k, split_depth, done, store, stats)
        raise Interrupted(ckpt) from None
    if resume and os.path.exists(ckpt):
        os.remove(ckpt)

    bounds = bounds_record(n, k)
    if store.best is None:
        return OptimalSet(n, k, [], bounds, False, False, stats,
                          time.perf_counter() - t0)
    members = _select(list(store), store.best, jobs)
    dflag, mflag = bound_flags(n, k, *store.best)
    return OptimalSet(n, k, members, bounds, dflag, mflag, stats, time.perf_counter() - t0)


def _merge(results, store: SurvivorStore, stats: GenStats, done: set[int]) -> None:
    for i, (key, records, st) in results:
        stats.merge(st)
        for r in records:
            store.offer(key, r)
        done.add(i)


# -- candidate-set mode -------------------------------------------------------------

@dataclass(frozen=True)
class Evaluation:
    graph: Graph
    score: Score
    diameter_meets_bound: bool
    mpl_meets_bound: bool
    symmetry: SymmetryResult


def evaluate(graphs: Iterable[Graph]) -> list[Evaluation]:
    """Full score and bound flags for each graph, in input order."""
    graphs = list(graphs)
    params = None
    out = []
    for g in graphs:
        regular, k = degree_profile(g)
        if not regular:
            raise NotRegular("candidate graph is not regular")
        if params is None:
            params = (g.n, k)
        elif params != (g.n, k):
            raise MixedParameters(f"expected (n, k) = {params}, got {(g.n, k)}")
        m = metrics(g)
        if not m.connected:
            raise Disconnected("candidate graph is disconnected")
        sym = automorphisms(g)
        score = Score(int(m.diameter), m.distance_sum, min_bisection(g).width, sym.order)
        dflag, mflag = bound_flags(g.n, k, score.diameter, score.distance_sum)
        out.append(Evaluation(g, score, dflag, mflag, sym))
    return out


def select_optimal(evaluations: Sequence[Evaluation]) -> OptimalSet:
    """Apply the lexicographic filter to evaluated candidates."""
    if not evaluations:
        raise ValueError("no candidates")
    first = evaluations[0]
    n = first.graph.n
    k = degree_profile(first.graph)[1]
    best = min(e.score.key() for e in evaluations)
    members: dict[bytes, Member] = {}
    for e in evaluations:
        if e.score.key() == best and e.symmetry.canonical.bytes not in members:
            members[e.symmetry.canonical.bytes] = Member(e.graph, e.score, e.symmetry)
    chosen = sorted(members.values(), key=lambda m: m.graph6)
    s = chosen[0].score
    dflag, mflag = bound_flags(n, k, s.diameter, s.distance_sum)
    return OptimalSet(n, k, chosen, bounds_record(n, k), dflag, mflag,
                      GenStats(generated=len(evaluations)))


# -- reports ------------------------------------------------------------------------

def _member_dict(m: Member) -> dict:
    mpl = m.mpl
    return {
        "graph6": m.graph6,
        "diameter": m.score.diameter,
        "distance_sum": m.score.distance_sum,
        "mpl": format_mpl(mpl),
        "mpl_exact": [mpl.numerator, mpl.denominator],
        "bisection": m.score.bisection,
        "aut_order": m.score.aut_order,
        "orbits": [list(o) for o in m.symmetry.orbits],
        "generators": [list(p) for p in m.symmetry.generators],
        "vertex_transitive": m.symmetry.vertex_transitive,
        "edge_transitive": m.symmetry.edge_transitive,
    }


def to_dict(s: OptimalSet, timing: bool = False) -> dict:
    b = s.bounds
    return {
        "n": s.n,
        "k": s.k,
        "bounds": {
            "moore": b.moore_at_dmin,
            "d_min": b.d_min,
            "mpl_min": format_mpl(b.mpl_min),
            "mpl_min_exact": [b.mpl_min.numerator, b.mpl_min.denominator],
        },
        "optimal": [_member_dict(m) for m in s.members],
        "tie_count": s.tie_count,
        "flags": {
            "diameter_meets_bound": s.diameter_meets_bound,
            "mpl_meets_bound": s.mpl_meets_bound,
        },
        "stats": {
            "visited": s.stats.visited,
            "generated": s.stats.generated,
            "wall_seconds": round(s.wall_seconds, 3) if timing and s.wall_seconds is not None else None,
        },
    }


CSV_FIELDS = ["n", "k", "diameter", "mpl", "bisection", "aut_order", "tie_count",
              "diameter_meets_bound", "mpl_meets_bound", "mpl_exact", "graph6"]


def _flag(v: bool) -> str:
    return "true" if v else "false"


def report(s: OptimalSet, fmt: str = "json", timing: bool = False) -> str:
    """Render an optimal set as ``json``, ``csv`` or ``text``.

    Output is byte-identical across runs unless ``timing`` adds wall time.
    """
    if fmt == "json":
        return json.dumps(to_dict(s, timing), indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_FIELDS)
        for m in s.members:
            mpl = m.mpl
            w.writerow([s.n, s.k, m.score.diameter, format_mpl(mpl), m.score.bisection,
                        m.score.aut_order, s.tie_count, _flag(s.diameter_meets_bound),
                        _flag(s.mpl_meets_bound), f"{mpl.numerator}/{mpl.denominator}",
                        m.graph6])
        return buf.getvalue()
    if fmt == "text":
        return _text(s, timing)
    raise ValueError(f"unknown report format {fmt!r}")


def _text(s: OptimalSet, timing: bool) -> str:
    b = s.bounds
    lines = [
        f"({s.n},{s.k}) optimal graphs: {s.tie_count}",
        f"bounds: diameter >= {b.d_min}, MPL >= {format_mpl(b.mpl_min)} "
        f"({b.mpl_min.numerator}/{b.mpl_min.denominator}), Moore bound {b.moore_at_dmin}",
    ]
    # '*' marks a minimum that does not reach the theoretical bound
    dmark = "" if s.diameter_meets_bound else "*"
    mmark = "" if s.mpl_meets_bound else "*"
    for i, m in enumerate(s.members, 1):
        lines.append(
            f"  [{i}] {m.graph6}  diameter {m.score.diameter}{dmark}  "
            f"MPL {format_mpl(m.mpl)}{mmark}  bisection {m.score.bisection}  "
            f"|Aut| {m.score.aut_order}"
            + ("  vertex-transitive" if m.symmetry.vertex_transitive else "")
            + ("  edge-transitive" if m.symmetry.edge_transitive else "")
        )
    lines.append(f"search: {s.stats.visited} nodes, {s.stats.generated} graphs")
    if timing and s.wall_seconds is not None:
        lines.append(f"wall time: {s.wall_seconds:.3f} s")
    return "\n".join(lines) + "\n"


def load_report(text: str) -> OptimalSet:
    """Rebuild an :class:`OptimalSet` from a JSON report."""
    from .symmetry import canonical_form

    d = json.loads(text)
    n, k = d["n"], d["k"]
    members = []
    for e in d["optimal"]:
        g = graph6.decode(e["graph6"])
        sym = SymmetryResult(
            order=e["aut_order"],
            generators=tuple(tuple(p) for p in e["generators"]),
            orbits=tuple(tuple(o) for o in e["orbits"]),
            vertex_transitive=e["vertex_transitive"],
            edge_transitive=e["edge_transitive"],
            canonical=canonical_form(g),
        )
        score = Score(e["diameter"], e["distance_sum"], e["bisection"], e["aut_order"])
        members.append(Member(g, score, sym))
    st = d["stats"]
    return OptimalSet(
        n, k, members, bounds_record(n, k),
        d["flags"]["diameter_meets_bound"], d["flags"]["mpl_meets_bound"],
        GenStats(generated=st["generated"], visited=st["visited"]),
        st["wall_seconds"],
    )
