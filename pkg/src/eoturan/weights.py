"""Grids, j-degrees, vertex weights and the constructive nice-embedding search.

A grid ``0 = t_0 < t_1 < ... < t_k = m`` splits the labels ``1..m`` into ``k``
classes; class ``j`` holds labels in ``(t_{j-1}, t_j]``. The weight of a vertex
is its smallest class degree and a vertex is heavy once that reaches ``ell``.

``nice_embed`` follows the induction on the number of pattern edges: peel a left
leaf, or a right leaf reached by an extremal walk while deleting the ``ell``
extreme eligible edges at every host vertex, embed the rest, then extend.
Whenever the host weight meets ``2*ell*(u+1)*n`` the first branch succeeds.
"""

from __future__ import annotations

import random
from bisect import bisect_left
from dataclasses import dataclass
from itertools import combinations, permutations
from math import comb
from typing import Iterable, Iterator

from .graph import EdgeOrderedGraph, Embedding
from .oracle import verify_embedding
from .pattern import ForbiddenForest


@dataclass(frozen=True)
class Grid:
    thresholds: tuple[int, ...]

    def __post_init__(self) -> None:
        t = tuple(int(x) for x in self.thresholds)
        object.__setattr__(self, "thresholds", t)
        if len(t) < 2 or t[0] != 0:
            raise ValueError(f"grid must start at 0 and have k >= 1 classes: {t}")
        if any(a >= b for a, b in zip(t, t[1:])):
            raise ValueError(f"grid thresholds must strictly increase: {t}")

    @property
    def k(self) -> int:
        return len(self.thresholds) - 1

    @property
    def m(self) -> int:
        return self.thresholds[-1]

    def edge_class(self, label: int) -> int:
        """Class ``j`` in ``1..k`` with ``t_{j-1} < label <= t_j``."""
        j = bisect_left(self.thresholds, label)
        if not 1 <= j <= self.k:
            raise ValueError(f"label {label} outside (0, {self.m}]")
        return j

    @classmethod
    def even(cls, m: int, k: int) -> Grid:
        return cls(tuple((j * m) // k for j in range(k + 1)))


def grid_count(m: int, k: int) -> int:
    return comb(m - 1, k - 1)


def all_grids(m: int, k: int) -> Iterator[Grid]:
    for inner in combinations(range(1, m), k - 1):
        yield Grid((0, *inner, m))


def random_grid(m: int, k: int, rng: random.Random) -> Grid:
    """Uniform over all ``C(m-1, k-1)`` grids."""
    return Grid((0, *sorted(rng.sample(range(1, m), k - 1)), m))


@dataclass(frozen=True)
class WeightProfile:
    grid: Grid
    class_degrees: tuple[tuple[int, ...], ...]
    weights: tuple[int, ...]
    total: int
    heavy: frozenset[int]

    def d(self, j: int, v: int) -> int:
        """j-degree of ``v`` (``j`` is 1-based)."""
        return self.class_degrees[v][j - 1]


def _class_table(g: EdgeOrderedGraph, t: Grid) -> list[int]:
    if g.m and t.m != g.labels[-1]:
        raise ValueError(f"grid ends at {t.m} but the largest label is {g.labels[-1]}")
    if g.m and g.labels[0] < 1:
        raise ValueError("labels must be positive; normalize the graph first")
    return [t.edge_class(lab) for lab in g.labels]


def classify(
    g: EdgeOrderedGraph,
    t: Grid,
    ell: int | None = None,
    edges: Iterable[int] | None = None,
    *,
    _classes: list[int] | None = None,
) -> WeightProfile:
    """Class degrees, weights and heavy set of the subgraph ``G'`` of ``g``.

    ``edges`` are indices into ``g.edges`` selecting ``G'`` (default: all of
    ``g``). Without ``ell`` the heavy set is empty.
    """
    classes = _class_table(g, t) if _classes is None else _classes
    k = t.k
    deg = [[0] * k for _ in range(g.n)]
    idx = range(g.m) if edges is None else edges
    for i in idx:
        u, v, _ = g.edges[i]
        j = classes[i] - 1
        deg[u][j] += 1
        deg[v][j] += 1
    weights = tuple(min(row) for row in deg)
    heavy = frozenset() if ell is None else frozenset(v for v, w in enumerate(weights) if w >= ell)
    return WeightProfile(t, tuple(map(tuple, deg)), weights, sum(weights), heavy)


def graph_weight(g: EdgeOrderedGraph, t: Grid) -> int:
    return classify(g, t).total


def weight_threshold(pattern: ForbiddenForest, u: int, n: int) -> int:
    """Host weight that forces a nice embedding of any ``u``-edge subgraph."""
    return 2 * pattern.ell * (u + 1) * n


@dataclass(frozen=True)
class NiceEmbedding:
    embedding: Embedding
    grid: Grid


def check_nice(
    forest: ForbiddenForest,
    g: EdgeOrderedGraph,
    t: Grid,
    emb,
    edges: Iterable[int] | None = None,
    pattern_edges: Iterable[int] | None = None,
) -> bool:
    """Order-preserving embedding with right vertices on heavy vertices and
    every ``w_i y`` edge on a class ``i`` edge, all inside ``G'``."""
    mapping = tuple(emb)
    h = forest.graph
    if pattern_edges is not None:
        h = h.with_edges(h.edges[i] for i in sorted(set(pattern_edges)))
    if not verify_embedding(g, h, mapping):
        return False
    active = None if edges is None else set(edges)
    index = {(u, v): i for i, (u, v, _) in enumerate(g.edges)}
    profile = classify(g, t, forest.ell, edges)
    left_idx = forest.witness.left_index()
    for y in forest.right:
        if mapping[y] not in profile.heavy:
            return False
    for a, b, _ in h.edges:
        w, y = (a, b) if a in left_idx else (b, a)
        x, z = sorted((mapping[w], mapping[y]))
        e = index[(x, z)]
        if active is not None and e not in active:
            return False
        if t.edge_class(g.edges[e][2]) != left_idx[w]:
            return False
    return True


class _NiceSearch:
    def __init__(self, forest: ForbiddenForest, g: EdgeOrderedGraph, t: Grid, budget: int):
        self.forest = forest
        self.h = forest.graph
        self.g = g
        self.t = t
        self.ell = forest.ell
        self.budget = budget
        self.nodes = 0
        self.left_idx = forest.witness.left_index()
        self.classes = _class_table(g, t)
        # per host vertex: (neighbour, edge index), by label
        self.hadj: list[list[tuple[int, int]]] = [[] for _ in range(g.n)]
        for i, (u, v, _) in enumerate(g.edges):
            self.hadj[u].append((v, i))
            self.hadj[v].append((u, i))

    def _tick(self) -> bool:
        self.nodes += 1
        return self.nodes <= self.budget

    def _pattern_adj(self, pedges: frozenset[int]) -> dict[int, list[tuple[int, int]]]:
        adj: dict[int, list[tuple[int, int]]] = {}
        for e in sorted(pedges):
            a, b, _ = self.h.edges[e]
            adj.setdefault(a, []).append((b, e))
            adj.setdefault(b, []).append((a, e))
        return adj

    def _walk_to_leaf(self, padj: dict[int, list[tuple[int, int]]]) -> tuple[int, int, int, bool]:
        """Follow lowest/highest edges from the lowest non-isolated vertex to a leaf.

        Returns ``(leaf, its neighbour, edge index, smallest?)``. Lowest edge
        first, highest when the lowest leads back.
        """
        cur = min(padj)
        came: int | None = None
        prev = -1
        while True:
            inc = padj[cur]
            if came is not None and len(inc) == 1:
                smallest = padj[prev][0][1] == came
                return cur, prev, came, smallest
            low, high = inc[0], inc[-1]
            nxt, e = low if low[1] != came else high
            prev, cur, came = cur, nxt, e

    def embeddings(self, verts: frozenset[int], pedges: frozenset[int], active: frozenset[int]) -> Iterator[dict[int, int]]:
        if not self._tick():
            return
        profile = classify(self.g, self.t, self.ell, active, _classes=self.classes)
        heavy = profile.heavy
        if not pedges:
            yield from self._base(verts, heavy)
            return
        padj = self._pattern_adj(pedges)
        leaves = [w for w in self.forest.left if w in padj and len(padj[w]) == 1]
        if leaves:
            w = leaves[0]
            y, e = padj[w][0]
            i = self.left_idx[w]
            for f in self.embeddings(verts - {w}, pedges - {e}, active):
                image = set(f.values())
                fy = f[y]
                for x, idx in sorted(self.hadj[fy]):
                    if idx not in active or self.classes[idx] != i or x in image:
                        continue
                    if not self._tick():
                        return
                    yield {**f, w: x}
            return

        y, w, e, smallest = self._walk_to_leaf(padj)
        if w not in self.left_idx or y in self.left_idx:
            raise AssertionError("extremal walk must end at a right leaf")
        i = self.left_idx[w]
        eligible: dict[int, list[int]] = {}
        for idx in sorted(active):
            if self.classes[idx] != i:
                continue
            u, v, _ = self.g.edges[idx]
            if u in heavy:
                eligible.setdefault(v, []).append(idx)
            if v in heavy:
                eligible.setdefault(u, []).append(idx)
        removed: set[int] = set()
        for z, lst in eligible.items():
            removed.update(lst[: self.ell] if smallest else lst[-self.ell :])
        inner = active - removed
        others = [e2 for _, e2 in padj[w] if e2 != e]
        for f in self.embeddings(verts - {y}, pedges - {e}, inner):
            image = set(f.values())
            z = f[w]
            labels = [self.g.label(z, f[self._other(e2, w)]) for e2 in others]
            bound = min(labels) if smallest else max(labels)
            for idx in sorted(eligible.get(z, ()), key=lambda j: self._far(j, z)):
                if idx in inner:
                    continue
                x = self._far(idx, z)
                lab = self.g.edges[idx][2]
                if x in image or (lab >= bound if smallest else lab <= bound):
                    continue
                if not self._tick():
                    return
                yield {**f, y: x}

    def _other(self, e: int, a: int) -> int:
        u, v, _ = self.h.edges[e]
        return v if u == a else u

    def _far(self, idx: int, z: int) -> int:
        u, v, _ = self.g.edges[idx]
        return v if u == z else u

    def _base(self, verts: frozenset[int], heavy: frozenset[int]) -> Iterator[dict[int, int]]:
        right = sorted(v for v in verts if v not in self.left_idx)
        left = sorted(v for v in verts if v in self.left_idx)
        for images in permutations(sorted(heavy), len(right)):
            if not self._tick():
                return
            f = dict(zip(right, images))
            used = set(images)
            free = [x for x in range(self.g.n) if x not in used]
            if len(free) < len(left):
                return
            f.update(zip(left, free))
            yield f


def nice_embed(
    forest: ForbiddenForest,
    g: EdgeOrderedGraph,
    t: Grid,
    *,
    edges: Iterable[int] | None = None,
    pattern_edges: Iterable[int] | None = None,
    budget: int = 200_000,
) -> NiceEmbedding | None:
    """Nice embedding of the spanning subgraph ``H'`` of the forest into ``G'``.

    ``g`` must carry labels ``1..m`` matching ``t``. ``edges`` selects ``G'`` and
    ``pattern_edges`` selects ``H'`` (indices into the respective edge tuples;
    both default to everything). Above the weight threshold the first candidate
    is returned without backtracking; below it the same moves are retried until
    ``budget`` search nodes are spent, after which None is returned.
    """
    active = frozenset(range(g.m)) if edges is None else frozenset(edges)
    pedges = frozenset(range(forest.graph.m)) if pattern_edges is None else frozenset(pattern_edges)
    if forest.ell > g.n:
        return None
    search = _NiceSearch(forest, g, t, budget)
    verts = frozenset(range(forest.ell))
    for f in search.embeddings(verts, pedges, active):
        mapping = tuple(f[v] for v in range(forest.ell))
        if not check_nice(forest, g, t, mapping, active, pedges):
            raise AssertionError(f"nice_embed produced an invalid embedding {mapping}")
        return NiceEmbedding(Embedding(mapping), t)
    return None
