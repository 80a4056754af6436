"""Containment of an edge-ordered pattern in an edge-ordered host.

``contains`` is the backtracking search used everywhere; ``contains_exhaustive``
enumerates every injective vertex map and exists only to cross-check it.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from itertools import permutations
from typing import Mapping

from .graph import EdgeOrderedGraph, Embedding

DEFAULT_NODE_BUDGET = 5_000_000


class BudgetExceeded(RuntimeError):
    """A search gave up after spending its configured budget.

    Distinct from a negative answer: nothing is known about the instance.
    """


def verify_embedding(host: EdgeOrderedGraph, pattern: EdgeOrderedGraph, emb) -> bool:
    mapping = tuple(emb)
    if len(mapping) != pattern.n:
        return False
    if any(not (0 <= x < host.n) for x in mapping):
        return False
    if len(set(mapping)) != len(mapping):
        return False
    prev = None
    for u, v, _ in pattern.edges:
        lab = host.label(mapping[u], mapping[v])
        if lab is None:
            return False
        if prev is not None and lab <= prev:
            return False
        prev = lab
    return True


class _Search:
    """Backtracking over pattern edges in increasing label order.

    Each placed pattern edge must land on a host edge whose label exceeds the
    previous image label. Host candidates are tried in increasing vertex id so
    the first embedding found is reproducible.
    """

    def __init__(self, host: EdgeOrderedGraph, pattern: EdgeOrderedGraph, budget: int):
        self.host = host
        self.pattern = pattern
        self.budget = budget
        self.nodes = 0
        self.pedges = [(u, v) for u, v, _ in pattern.edges]
        self.hlabels = host.labels
        # neighbours of each host vertex sorted by id, with labels
        self.hnbrs = [sorted(adj) for adj in host.adjacency]
        # incident labels of each host vertex, ascending
        self.hinc = [[lab for _, lab in adj] for adj in host.adjacency]
        # remaining[i][a]: pattern edges at vertex a with index >= i
        mp = len(self.pedges)
        self.remaining = [[0] * pattern.n for _ in range(mp + 1)]
        for i in range(mp - 1, -1, -1):
            row = list(self.remaining[i + 1])
            u, v = self.pedges[i]
            row[u] += 1
            row[v] += 1
            self.remaining[i] = row

    def _tick(self) -> None:
        self.nodes += 1
        if self.nodes > self.budget:
            raise BudgetExceeded(f"containment search exceeded {self.budget} nodes")

    def _room(self, x: int, after: int, need: int) -> bool:
        """Host vertex ``x`` has at least ``need`` incident labels above ``after``."""
        inc = self.hinc[x]
        return len(inc) - bisect_right(inc, after) >= need

    def run(self, fixed: Mapping[int, int] | None = None) -> dict[int, int] | None:
        fwd = dict(fixed or {})
        used = set(fwd.values())
        if len(used) != len(fwd):
            return None
        mp = len(self.pedges)
        if mp > self.host.m:
            return None
        floor = self.hlabels[0] - 1 if self.hlabels else 0
        return self._extend(0, floor, fwd, used)

    def _extend(self, i: int, prev: int, fwd: dict[int, int], used: set[int]) -> dict[int, int] | None:
        self._tick()
        if i == len(self.pedges):
            return fwd
        # enough host labels must remain above prev for the unplaced edges
        if len(self.hlabels) - bisect_right(self.hlabels, prev) < len(self.pedges) - i:
            return None
        u, v = self.pedges[i]
        rem = self.remaining[i]
        host = self.host
        if u in fwd and v in fwd:
            lab = host.label(fwd[u], fwd[v])
            if lab is None or lab <= prev:
                return None
            return self._extend(i + 1, lab, fwd, used)
        if u in fwd or v in fwd:
            a, b = (u, v) if u in fwd else (v, u)
            x = fwd[a]
            for y, lab in self.hnbrs[x]:
                if lab <= prev or y in used:
                    continue
                if not self._room(y, prev, rem[b]):
                    continue
                fwd[b] = y
                used.add(y)
                found = self._extend(i + 1, lab, fwd, used)
                if found is not None:
                    return found
                del fwd[b]
                used.discard(y)
            return None
        for x in range(host.n):
            if x in used or not self._room(x, prev, rem[u]):
                continue
            for y, lab in self.hnbrs[x]:
                if lab <= prev or y in used:
                    continue
                if not self._room(y, prev, rem[v]):
                    continue
                fwd[u] = x
                fwd[v] = y
                used.add(x)
                used.add(y)
                found = self._extend(i + 1, lab, fwd, used)
                if found is not None:
                    return found
                del fwd[u], fwd[v]
                used.discard(x)
                used.discard(y)
        return None


def _complete(host: EdgeOrderedGraph, pattern: EdgeOrderedGraph, fwd: dict[int, int]) -> Embedding | None:
    # isolated pattern vertices take the smallest unused host ids
    used = set(fwd.values())
    free = (x for x in range(host.n) if x not in used)
    out = []
    for a in range(pattern.n):
        if a not in fwd:
            x = next(free, None)
            if x is None:
                return None
            fwd[a] = x
        out.append(fwd[a])
    return Embedding(tuple(out))


def contains(
    host: EdgeOrderedGraph,
    pattern: EdgeOrderedGraph,
    *,
    budget: int = DEFAULT_NODE_BUDGET,
    fixed: Mapping[int, int] | None = None,
) -> Embedding | None:
    """First embedding of ``pattern`` in ``host`` in canonical search order, or None.

    ``fixed`` pre-assigns images of some pattern vertices. Raises ``BudgetExceeded``
    when more than ``budget`` search nodes are needed.
    """
    if pattern.m == 0:
        raise ValueError("pattern must have at least one edge")
    if pattern.n > host.n:
        return None
    search = _Search(host, pattern, budget)
    fwd = search.run(fixed)
    if fwd is None:
        return None
    return _complete(host, pattern, dict(fwd))


def contains_with_top_edge(
    host: EdgeOrderedGraph, pattern: EdgeOrderedGraph, u: int, v: int, *, budget: int = DEFAULT_NODE_BUDGET
) -> Embedding | None:
    """An embedding sending the pattern's largest edge to the host edge ``uv``.

    When ``uv`` is the largest host edge these are exactly the new copies created
    by appending it, which is what prefix-pruned enumeration needs.
    """
    if pattern.m == 0:
        raise ValueError("pattern must have at least one edge")
    a, b, _ = pattern.edges[-1]
    for x, y in ((u, v), (v, u)):
        found = contains(host, pattern, budget=budget, fixed={a: x, b: y})
        if found is not None:
            return found
    return None


def contains_exhaustive(
    host: EdgeOrderedGraph, pattern: EdgeOrderedGraph, *, budget: int = 10_000_000
) -> Embedding | None:
    """Try every injective vertex map in lexicographic order (test oracle)."""
    if pattern.m == 0:
        raise ValueError("pattern must have at least one edge")
    if pattern.n > host.n:
        return None
    count = math.perm(host.n, pattern.n)
    if count > budget:
        raise BudgetExceeded(f"{count} injections exceed budget {budget}")
    for mapping in permutations(range(host.n), pattern.n):
        if verify_embedding(host, pattern, mapping):
            return Embedding(mapping)
    return None


class TopEdgeMatcher:
    """Does appending a new largest edge ``xy`` complete a copy of the pattern?

    Works on a mutable adjacency (``adj[v]`` maps neighbour to label) so prefix
    enumeration can add and remove edges without rebuilding graphs. The other
    pattern edges are placed in order of attachment to the top edge, and each
    placement is bounded by the host labels of already placed edges that come
    before and after it in the pattern order.
    """

    def __init__(self, pattern: EdgeOrderedGraph):
        if pattern.m == 0:
            raise ValueError("pattern must have at least one edge")
        self.pattern = pattern
        self.top = pattern.edges[-1][:2]
        self.isolated = sum(1 for v in range(pattern.n) if pattern.degree(v) == 0)
        self.top_degrees = (pattern.degree(self.top[0]), pattern.degree(self.top[1]))
        rest = list(range(pattern.m - 1))
        seen = set(self.top)
        order: list[int] = []
        while rest:
            attached = [r for r in rest if seen & set(pattern.edges[r][:2])]
            r = attached[0] if attached else rest[0]
            rest.remove(r)
            order.append(r)
            seen.update(pattern.edges[r][:2])
        self.steps = []
        for i, r in enumerate(order):
            # placed labels respect the pattern order, so the nearest placed
            # edge on each side gives the tightest bound
            below = max((j for j in range(i) if order[j] < r), key=order.__getitem__, default=-1)
            above = min((j for j in range(i) if order[j] > r), key=order.__getitem__, default=-1)
            u, v = pattern.edges[r][:2]
            self.steps.append((u, v, below, above))

    def completes(self, adj: list[dict[int, int]], x: int, y: int) -> bool:
        a, b = self.top
        n = len(adj)
        top = adj[x][y]
        labs = [0] * len(self.steps)
        da, db = self.top_degrees
        for p, q in ((x, y), (y, x)):
            if len(adj[p]) < da or len(adj[q]) < db:
                continue
            if self._extend(adj, 0, labs, top, {a: p, b: q}, {p, q}, n):
                return True
        return False

    def _extend(self, adj, i: int, labs: list[int], top: int, fwd: dict[int, int], used: set[int], n: int) -> bool:
        if i == len(self.steps):
            return n - len(used) >= self.isolated
        u, v, below, above = self.steps[i]
        lo = labs[below] if below >= 0 else 0
        hi = labs[above] if above >= 0 else top
        if lo >= hi:
            return False
        fu, fv = fwd.get(u), fwd.get(v)
        if fu is not None and fv is not None:
            lab = adj[fu].get(fv)
            if lab is None or not lo < lab < hi:
                return False
            labs[i] = lab
            return self._extend(adj, i + 1, labs, top, fwd, used, n)
        if fu is not None or fv is not None:
            src, new = (fu, v) if fu is not None else (fv, u)
            for z, lab in adj[src].items():
                if lo < lab < hi and z not in used:
                    fwd[new] = z
                    used.add(z)
                    labs[i] = lab
                    ok = self._extend(adj, i + 1, labs, top, fwd, used, n)
                    del fwd[new]
                    used.discard(z)
                    if ok:
                        return True
            return False
        for s in range(n):
            if s in used:
                continue
            for z, lab in adj[s].items():
                if lo < lab < hi and z not in used:
                    fwd[u], fwd[v] = s, z
                    used.add(s)
                    used.add(z)
                    labs[i] = lab
                    ok = self._extend(adj, i + 1, labs, top, fwd, used, n)
                    del fwd[u], fwd[v]
                    used.discard(s)
                    used.discard(z)
                    if ok:
                        return True
        return False
