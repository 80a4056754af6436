"""One density-increment step for a host avoiding a forbidden OCN-2 forest.

The step computes a window length ``f``, splits vertices into tame (90% of
incident labels covered by ``k-1`` windows of length ``f``) and wild, keeps the
edges covered at both tame ends (``G*``), cuts ``G*`` into label slices of width
``f`` and returns the densest slice. If ``G*`` is too small, the host must have
a heavy grid and the nice-embedding search is run on it instead.
"""

from __future__ import annotations

import math
import random
from bisect import bisect_right
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Sequence, Union

from .exact import floor_root_times
from .graph import EdgeOrderedGraph, Embedding, Subgraph, average_degree, normalize_labels
from .pattern import ForbiddenForest
from .weights import Grid, all_grids, grid_count, nice_embed, random_grid

STEP_CONSTANT = 134
DEFAULT_GRID_CAP = 20_000

Interval = tuple[int, int]


def compute_f(k: int, ell: int, d: Fraction | int, m: int) -> int:
    """``floor((134 k ell^2 / d)^(1/(k-1)) * m)`` with no floating point."""
    d = Fraction(d)
    if k < 2:
        raise ValueError("k must be at least 2")
    if d <= 0:
        raise ValueError("average degree must be positive")
    return floor_root_times(Fraction(STEP_CONSTANT * k * ell * ell) / d, k - 1, m)


def best_interval_cover(labels: Sequence[int], count: int, length: int) -> tuple[int, list[Interval]]:
    """Most labels coverable by ``count`` intervals ``[a, a+length]``, with the intervals.

    Dynamic program over the sorted labels: an optimal interval may be assumed to
    start at a label, so from position ``i`` either skip the label or open an
    interval there and jump past everything it covers.
    """
    if count < 0 or length < 0:
        raise ValueError("count and length must be non-negative")
    labels = list(labels)
    n = len(labels)
    jump = [bisect_right(labels, labels[i] + length) for i in range(n)]
    # best[c][i]: most labels among labels[i:] coverable with c intervals
    best = [[0] * (n + 1) for _ in range(count + 1)]
    for c in range(1, count + 1):
        row, prev = best[c], best[c - 1]
        for i in range(n - 1, -1, -1):
            take = jump[i] - i + prev[jump[i]]
            row[i] = max(take, row[i + 1])
    intervals = []
    i, c = 0, count
    while c > 0 and i < n:
        if best[c][i] == jump[i] - i + best[c - 1][jump[i]]:
            intervals.append((labels[i], labels[i] + length))
            i, c = jump[i], c - 1
        else:
            i += 1
    return best[count][0], intervals


def wild_intervals(labels: Sequence[int], f: int, c: int) -> list[Interval]:
    """Greedy windows: each starts at the ``c``-th label above the previous window.

    Stops once fewer than ``c`` labels lie above the last window, so exactly
    ``c-1`` labels sit below the first window and between consecutive ones.
    """
    if c < 1:
        raise ValueError("c must be positive")
    labels = sorted(labels)
    out = []
    start = 0
    while len(labels) - start >= c:
        a = labels[start + c - 1]
        out.append((a, a + f))
        start = bisect_right(labels, a + f)
    return out


def wild_c(d_v: int, k: int) -> int:
    return -(-d_v // (10 * k))


@dataclass(frozen=True)
class VertexCover:
    degree: int
    covered: int
    intervals: tuple[Interval, ...]

    @property
    def tame(self) -> bool:
        return 10 * self.covered >= 9 * self.degree

    def covers(self, label: int) -> bool:
        return any(a <= label <= b for a, b in self.intervals)


@dataclass(frozen=True)
class CoverReport:
    k: int
    f: int
    vertices: tuple[VertexCover, ...]

    @property
    def tame(self) -> frozenset[int]:
        return frozenset(v for v, c in enumerate(self.vertices) if c.tame)

    @property
    def wild(self) -> frozenset[int]:
        return frozenset(v for v, c in enumerate(self.vertices) if not c.tame)


def tame_wild(g: EdgeOrderedGraph, k: int, f: int) -> CoverReport:
    rows = []
    for v in range(g.n):
        labels = g.incident_labels(v)
        covered, intervals = best_interval_cover(labels, k - 1, f)
        rows.append(VertexCover(len(labels), covered, tuple(intervals)))
    return CoverReport(k, f, tuple(rows))


def expected_weight_lower_bound(d_v: int, f: int, k: int, m: int) -> Fraction:
    """Lower bound on the mean weight of a wild vertex over a uniform random grid."""
    if k < 2:
        raise ValueError("k must be at least 2")
    if m < k:
        raise ValueError("random grids need m >= k")
    return Fraction(d_v * (f + 1) ** (k - 1), 10 * k * math.comb(m - 1, k - 1))


def vertex_weight(labels: Sequence[int], t: Grid) -> int:
    """Weight of a vertex with the given sorted incident labels."""
    th = t.thresholds
    return min(bisect_right(labels, th[j]) - bisect_right(labels, th[j - 1]) for j in range(1, len(th)))


def exact_expected_weight(labels: Sequence[int], k: int, m: int) -> Fraction:
    """Mean vertex weight over all ``C(m-1, k-1)`` grids."""
    labels = sorted(labels)
    total = sum(vertex_weight(labels, t) for t in all_grids(m, k))
    return Fraction(total, grid_count(m, k))


def build_gstar(g: EdgeOrderedGraph, report: CoverReport) -> Subgraph:
    """Edges whose label is covered by a window at each end, both ends tame."""
    tame = report.tame
    rows = report.vertices
    edges = tuple(
        (u, v, lab)
        for u, v, lab in g.edges
        if u in tame and v in tame and rows[u].covers(lab) and rows[v].covers(lab)
    )
    return Subgraph(tame, edges)


def blame(g: EdgeOrderedGraph, report: CoverReport, gstar: Subgraph) -> tuple[int, int]:
    """Split the edges missing from ``G*`` into (blamed on tame, blamed on wild)."""
    kept = {(u, v) for u, v, _ in gstar.edges}
    wild = report.wild
    on_tame = on_wild = 0
    for u, v, _ in g.edges:
        if (u, v) in kept:
            continue
        if u in wild or v in wild:
            on_wild += 1
        else:
            on_tame += 1
    return on_tame, on_wild


def partition_slices(gstar: Subgraph, f: int, m: int) -> list[Subgraph]:
    """Slice ``j`` (1-based) keeps labels in ``((j-1)f, jf]``; vertices are edge endpoints."""
    if f <= 0:
        raise ValueError("slice width must be positive")
    count = -(-m // f)
    buckets: list[list] = [[] for _ in range(count)]
    for e in gstar.edges:
        buckets[(e[2] - 1) // f].append(e)
    return [Subgraph(frozenset(x for u, v, _ in es for x in (u, v)), tuple(es)) for es in buckets]


@dataclass(frozen=True)
class SliceStat:
    index: int
    edges: int
    vertices: int
    average_degree: Fraction


@dataclass
class StepAudit:
    n: int
    m: int
    d: Fraction
    k: int
    ell: int
    f: int | None = None
    report: CoverReport | None = None
    gstar_edges: int | None = None
    slices: list[SliceStat] = field(default_factory=list)
    chosen: int | None = None
    grid_search: dict[str, Any] | None = None

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "n": self.n,
            "m": self.m,
            "d": str(self.d),
            "k": self.k,
            "ell": self.ell,
            "f": self.f,
        }
        if self.report is not None:
            out["tame"] = len(self.report.tame)
            out["wild"] = len(self.report.wild)
        out["gstar_edges"] = self.gstar_edges
        out["slices"] = [
            {"j": s.index, "edges": s.edges, "vertices": s.vertices, "average_degree": str(s.average_degree)}
            for s in self.slices
        ]
        out["chosen_slice"] = self.chosen
        out["grid_search"] = self.grid_search
        return out


@dataclass(frozen=True)
class DenseSubgraph:
    subgraph: Subgraph
    audit: StepAudit
    kind = "dense"

    @property
    def edge_count(self) -> int:
        return self.subgraph.m

    @property
    def average_degree(self) -> Fraction:
        return self.subgraph.average_degree()


@dataclass(frozen=True)
class FoundEmbedding:
    embedding: Embedding
    grid: Grid
    audit: StepAudit
    kind = "embedding"


@dataclass(frozen=True)
class HostReturned:
    graph: EdgeOrderedGraph
    reason: str
    audit: StepAudit
    kind = "host"


IncrementOutcome = Union[DenseSubgraph, FoundEmbedding, HostReturned]


class IncrementDiagnostic(RuntimeError):
    """``G*`` came out small but no embedding was found.

    Impossible for a host avoiding the pattern, so it means the host contains the
    pattern and the best-effort search ran out, or there is a bug.
    """

    def __init__(self, message: str, audit: StepAudit):
        super().__init__(message)
        self.audit = audit


def _best_grid(g: EdgeOrderedGraph, k: int, seed: int, cap: int) -> tuple[Grid, int, dict[str, Any]]:
    m = g.m
    total = grid_count(m, k)
    inc = [g.incident_labels(v) for v in range(g.n)]
    if total <= cap:
        grids = all_grids(m, k)
        mode = "exhaustive"
    else:
        rng = random.Random(seed)
        grids = (random_grid(m, k, rng) for _ in range(cap))
        mode = "sampled"
    best: Grid | None = None
    best_w = -1
    examined = 0
    for t in grids:
        examined += 1
        w = sum(vertex_weight(labels, t) for labels in inc)
        if w > best_w:
            best, best_w = t, w
    assert best is not None
    info = {"mode": mode, "grids": total, "examined": examined, "best_weight": best_w, "best_grid": list(best.thresholds)}
    return best, best_w, info


def increment_step(
    g: EdgeOrderedGraph,
    pattern: ForbiddenForest,
    *,
    seed: int = 0,
    grid_cap: int = DEFAULT_GRID_CAP,
    embed_budget: int = 200_000,
    f: int | None = None,
) -> IncrementOutcome:
    """Either a subgraph with at most ``f`` edges and average degree at least
    ``d/(4k-4)``, or an embedding of the pattern, or ``g`` itself when ``m < k``.

    Vertex ids of the result refer to ``g``. ``f`` overrides the computed window
    length; the density guarantee then no longer applies.
    """
    k, ell = pattern.k, pattern.ell
    if k < 2:
        raise ValueError("the increment step needs k >= 2; stars are handled directly")
    if g.m < 1:
        raise ValueError("host needs at least one edge")
    d = average_degree(g)
    audit = StepAudit(n=g.n, m=g.m, d=d, k=k, ell=ell)
    if g.m < k:
        return HostReturned(g, "m < k", audit)

    h = normalize_labels(g)
    original = g.labels
    m, n = h.m, h.n
    fixed_f = f is None
    f = compute_f(k, ell, d, m) if f is None else f
    audit.f = f
    report = tame_wild(h, k, f)
    gstar = build_gstar(h, report)
    audit.report = report
    audit.gstar_edges = gstar.m

    if 2 * gstar.m >= m:
        slices = partition_slices(gstar, f, m)
        stats = [SliceStat(j, s.m, len(s.vertices), s.average_degree()) for j, s in enumerate(slices, 1)]
        audit.slices = stats
        best = max(stats, key=lambda s: (s.average_degree, -s.index))
        audit.chosen = best.index
        chosen = slices[best.index - 1]
        if fixed_f:
            if chosen.m > f or chosen.average_degree() < d / (4 * k - 4):
                raise AssertionError(f"densest slice violates the step guarantee: {audit.to_dict()}")
        sub = Subgraph(chosen.vertices, tuple((u, v, original[lab - 1]) for u, v, lab in chosen.edges))
        return DenseSubgraph(sub, audit)

    grid, weight, info = _best_grid(h, k, seed, grid_cap)
    threshold = 2 * ell * ell * n
    info["threshold"] = threshold
    audit.grid_search = info
    found = nice_embed(pattern, h, grid, budget=embed_budget)
    info["embedded"] = found is not None
    if found is None:
        if weight >= threshold:
            raise AssertionError(f"nice_embed failed above its weight threshold: {info}")
        raise IncrementDiagnostic(
            f"|E(G*)| = {gstar.m} < m/2 = {Fraction(m, 2)} but no embedding found (best grid weight {weight} < {threshold})",
            audit,
        )
    return FoundEmbedding(found.embedding, grid, audit)
