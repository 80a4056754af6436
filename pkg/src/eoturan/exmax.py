"""Exact ex_<(n, H) for tiny n by exhaustive search.

Avoiding edge-ordered graphs on ``n`` vertices are generated one isomorphism
class at a time, growing each by a new largest edge. Dropping the largest edge of
an avoider leaves an avoider, so the first empty level bounds every level above
it and a single depth-first pass yields the exact value together with a count of
classes per edge number.
"""

from __future__ import annotations

import json
import os
import time
from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from pathlib import Path
from typing import Any

from .graph import EdgeOrderedGraph, canonical_key
from .oracle import BudgetExceeded, TopEdgeMatcher, contains

CACHE_ENV = "EOTURAN_CACHE"
DEFAULT_BUDGET = 50_000_000


def _pairs(n: int) -> list[tuple[int, int]]:
    return list(combinations(range(n), 2))


# ---------------------------------------------------------------- edge-ordered graphs


class _AvoiderTree:
    """Depth-first canonical augmentation of pattern-avoiding edge-ordered graphs.

    A state is an edge sequence (label ``i`` on the ``i``-th pair) whose vertices
    are numbered by first appearance. Its parent is the state without the
    largest edge, so children are generated once per orbit of the state's
    automorphisms and every isomorphism class of avoider on ``n`` vertices is
    visited exactly once. A child is discarded when its new top edge completes
    a copy of the pattern, which is the only way a copy can appear.

    Automorphisms must fix every edge, so the only non-trivial ones swap the two
    ends of edges that form a component by themselves.
    """

    def __init__(self, n: int, pattern: EdgeOrderedGraph, budget: int):
        self.n = n
        self.pattern = pattern
        self.budget = budget
        self.nodes = 0
        self.matcher = TopEdgeMatcher(pattern)
        self.adj: list[dict[int, int]] = [{} for _ in range(n)]
        self.seq: list[tuple[int, int]] = []
        self.levels: list[int] = []

    def _tick(self) -> None:
        self.nodes += 1
        if self.nodes > self.budget:
            raise BudgetExceeded(f"avoider enumeration exceeded {self.budget} nodes")

    def _candidates(self) -> list[tuple[int, int]]:
        adj = self.adj
        nv = sum(1 for v in range(self.n) if adj[v])
        # vertices on a lone edge: swapping the two ends is an automorphism
        partner = {}
        for u, v in self.seq:
            if len(adj[u]) == 1 and len(adj[v]) == 1:
                partner[u], partner[v] = v, u
        seen = set()
        out = []
        for a in range(nv):
            for b in range(a + 1, nv):
                if b in adj[a]:
                    continue
                key = min(
                    (min(x, y), max(x, y))
                    for x in {a, partner.get(a, a)}
                    for y in {b, partner.get(b, b)}
                )
                if key not in seen:
                    seen.add(key)
                    out.append(key)
        if nv < self.n:
            for a in range(nv):
                if partner.get(a, a) >= a:
                    out.append((a, nv))
        if nv + 1 < self.n:
            out.append((nv, nv + 1))
        return sorted(out)

    def _state(self) -> EdgeOrderedGraph:
        return EdgeOrderedGraph(self.n, tuple((u, v, i) for i, (u, v) in enumerate(self.seq, 1)))

    def walk(self, target: int | None = None) -> EdgeOrderedGraph | None:
        """Explore every avoider (or stop at the first with ``target`` edges).

        Without a target, returns the lexicographically least state of greatest
        depth; ``levels[i]`` counts the classes with ``i`` edges.
        """
        self.best: EdgeOrderedGraph | None = None
        found = self._dfs(target)
        return found if target is not None else self.best

    def _dfs(self, target: int | None) -> EdgeOrderedGraph | None:
        self._tick()
        depth = len(self.seq)
        if depth == len(self.levels):
            self.levels.append(0)
            if target is None:
                self.best = self._state()
        self.levels[depth] += 1
        if target is not None and depth == target:
            return self._state()
        for a, b in self._candidates():
            lab = depth + 1
            self.adj[a][b] = self.adj[b][a] = lab
            self.seq.append((a, b))
            try:
                if lab >= self.pattern.m and self.matcher.completes(self.adj, a, b):
                    continue
                found = self._dfs(target)
                if found is not None:
                    return found
            finally:
                self.seq.pop()
                del self.adj[a][b], self.adj[b][a]
        return None


@dataclass
class SearchStats:
    nodes: int = 0
    levels: list[int] = field(default_factory=list)


def _too_big(n: int, pattern: EdgeOrderedGraph) -> bool:
    return pattern.n > n


def avoider_exists(
    n: int, m: int, pattern: EdgeOrderedGraph, budget: int = DEFAULT_BUDGET, stats: SearchStats | None = None
) -> EdgeOrderedGraph | None:
    """An ``n``-vertex ``m``-edge edge-ordered graph avoiding ``pattern``, or None after exhausting all."""
    if not 0 <= m <= comb(n, 2):
        raise ValueError(f"m must lie in [0, {comb(n, 2)}]")
    if pattern.m == 0:
        raise ValueError("pattern must have at least one edge")
    if _too_big(n, pattern):
        return EdgeOrderedGraph(n, tuple((u, v, i) for i, (u, v) in enumerate(_pairs(n)[:m], 1)))
    tree = _AvoiderTree(n, pattern, budget)
    try:
        return tree.walk(m)
    finally:
        if stats is not None:
            stats.nodes += tree.nodes
            stats.levels = tree.levels


@dataclass(frozen=True)
class ExmaxResult:
    n: int
    pattern: str
    value: int
    witness: EdgeOrderedGraph
    levels: tuple[int, ...]
    nodes: int
    seconds: float
    cached: bool = False

    def as_dict(self) -> dict[str, Any]:
        return {
            "n": self.n,
            "pattern": self.pattern,
            "value": self.value,
            "witness": [list(e) for e in self.witness.edges],
            "levels": list(self.levels),
            "nodes": self.nodes,
            "seconds": round(self.seconds, 3),
        }


class ExmaxBudgetExceeded(BudgetExceeded):
    """Search stopped early; ``lower`` is verified, ``upper`` is refuted-above."""

    def __init__(self, message: str, lower: int, upper: int):
        super().__init__(message)
        self.lower = lower
        self.upper = upper


def brute_force_ex(
    n: int,
    pattern: EdgeOrderedGraph,
    budget: int = DEFAULT_BUDGET,
    *,
    allow_n7: bool = False,
    cache: str | os.PathLike | None = None,
) -> ExmaxResult:
    """Largest ``m`` admitting an ``n``-vertex avoider of ``pattern``.

    Results are read from and appended to a JSON-lines cache when one is given
    (or named by ``$EOTURAN_CACHE``).
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    if pattern.m == 0:
        raise ValueError("pattern must have at least one edge")
    if n > 7 or (n == 7 and not allow_n7):
        raise ValueError("n <= 6 by default; n = 7 needs allow_n7=True")
    key = canonical_key(pattern)
    path = _cache_path(cache)
    if path is not None:
        hit = _cache_lookup(path, n, key)
        if hit is not None:
            return hit

    start = time.perf_counter()
    if _too_big(n, pattern):
        full = avoider_exists(n, comb(n, 2), pattern)
        assert full is not None
        return ExmaxResult(n, key, comb(n, 2), full, (), 0, time.perf_counter() - start)
    tree = _AvoiderTree(n, pattern, budget)
    try:
        witness = tree.walk()
    except BudgetExceeded:
        raise ExmaxBudgetExceeded(
            f"budget {budget} spent; deepest avoider so far has {len(tree.levels) - 1} edges",
            lower=len(tree.levels) - 1,
            upper=comb(n, 2),
        ) from None
    assert witness is not None
    if contains(witness, pattern) is not None:
        raise AssertionError("witness contains the pattern")
    result = ExmaxResult(
        n, key, witness.m, witness, tuple(tree.levels), tree.nodes, time.perf_counter() - start
    )
    if path is not None:
        _cache_store(path, result)
    return result


def _cache_path(cache) -> Path | None:
    if cache is not None:
        return Path(cache)
    env = os.environ.get(CACHE_ENV)
    return Path(env) if env else None


def _cache_lookup(path: Path, n: int, key: str) -> ExmaxResult | None:
    if not path.exists():
        return None
    for line in path.read_text().splitlines():
        if not line.strip():
            continue
        rec = json.loads(line)
        if rec.get("n") == n and rec.get("pattern") == key:
            witness = EdgeOrderedGraph(n, tuple(tuple(e) for e in rec["witness"]))
            return ExmaxResult(
                n, key, rec["value"], witness, tuple(rec.get("levels", ())), rec.get("nodes", 0), rec.get("seconds", 0.0), True
            )
    return None


def _cache_store(path: Path, result: ExmaxResult) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("a") as fh:
        fh.write(json.dumps(result.as_dict(), sort_keys=True) + "\n")
