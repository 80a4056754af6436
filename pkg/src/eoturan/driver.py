"""Iterating the increment step, the constants behind it and the resulting bound.

With ``c1 = (134 k ell^2)^(1/(k-1))``, ``c2 = 1/(k-1)`` and ``c3 = 4k-4`` every
step keeps ``d' >= d/c3`` and ``m' <= c1 m / d^c2``. Iterating
``ceil(2 log d0 / (3 log c3))`` times forces
``m0 <= max(c4 n0, n0 2^(c5 sqrt(log n0)))`` (binary logs) with
``c4 = (c1 c3)^(3/c2) / 2`` and ``c5 = sqrt(9 log c3 / (2 c2))``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Union

from mpmath import iv

from .exact import bounds, iroot, is_perfect_power, precision, exact_log2, ivx, log2_iv
from .graph import EdgeOrderedGraph, Embedding, average_degree, normalize_labels
from .increment import (
    DEFAULT_GRID_CAP,
    STEP_CONSTANT,
    FoundEmbedding,
    HostReturned,
    IncrementDiagnostic,
    increment_step,
)
from .oracle import BudgetExceeded, contains, verify_embedding
from .pattern import ForbiddenForest


@dataclass(frozen=True)
class RecursionConstants:
    """``c1..c5`` for given ``(k, ell)``.

    ``c2``, ``c3``, ``c4`` and ``c5**2`` are exact; ``c1`` and ``c5`` are kept as
    outward-rounded intervals.
    """

    k: int
    ell: int

    def __post_init__(self) -> None:
        if self.k < 2:
            raise ValueError("constants need k >= 2")

    @property
    def base(self) -> int:
        """``134 k ell^2``, whose ``(k-1)``-th root is ``c1``."""
        return STEP_CONSTANT * self.k * self.ell**2

    @property
    def c1(self) -> iv.mpf:
        with precision():
            return ivx(self.base) ** (iv.mpf(1) / (self.k - 1))

    @property
    def c2(self) -> Fraction:
        return Fraction(1, self.k - 1)

    @property
    def c3(self) -> int:
        return 4 * self.k - 4

    @property
    def c4(self) -> Fraction:
        # (c1 c3)^(3(k-1)) = base^3 * c3^(3(k-1))
        return Fraction(self.base**3 * self.c3 ** (3 * (self.k - 1)), 2)

    @property
    def c5_squared(self) -> iv.mpf | Fraction:
        """``9 (k-1) log2(c3) / 2``; exact when ``c3`` is a power of two."""
        lg = exact_log2(self.c3)
        if lg is not None:
            return Fraction(9 * (self.k - 1) * lg, 2)
        with precision():
            return iv.mpf(9 * (self.k - 1)) * log2_iv(self.c3) / 2

    @property
    def c5(self) -> iv.mpf:
        with precision():
            return iv.sqrt(ivx(self.c5_squared) if isinstance(self.c5_squared, Fraction) else self.c5_squared)

    def c5_exact(self) -> Fraction | None:
        sq = self.c5_squared
        if isinstance(sq, Fraction) and _is_square(sq):
            return Fraction(math.isqrt(sq.numerator), math.isqrt(sq.denominator))
        return None

    def c1_exact(self) -> int | None:
        r = self.k - 1
        return iroot(self.base, r) if is_perfect_power(self.base, r) else None

    def as_dict(self) -> dict[str, Any]:
        c1 = self.c1_exact()
        return {
            "k": self.k,
            "ell": self.ell,
            "c1": str(c1) if c1 is not None else _fmt(self.c1),
            "c2": str(self.c2),
            "c3": self.c3,
            "c4": str(self.c4),
            "c5": str(self.c5_exact()) if self.c5_exact() is not None else _fmt(self.c5),
        }


def _is_square(q: Fraction) -> bool:
    return q >= 0 and math.isqrt(q.numerator) ** 2 == q.numerator and math.isqrt(q.denominator) ** 2 == q.denominator


def _fmt(x: iv.mpf) -> str:
    lo, hi = bounds(x)
    return f"[{float(lo):.12g}, {float(hi):.12g}]"


def _exp_branch_exact(n: int, const: RecursionConstants) -> int | None:
    """``n 2^(c5 sqrt(log2 n))`` when the exponent is a non-negative integer."""
    lg = exact_log2(n)
    sq = const.c5_squared
    if lg is None or not isinstance(sq, Fraction):
        return None
    e2 = sq * lg
    if e2.denominator != 1 or math.isqrt(e2.numerator) ** 2 != e2.numerator:
        return None
    return n * 2 ** math.isqrt(e2.numerator)


def exp_branch(n: int, k: int, ell: int) -> tuple[Fraction, Fraction]:
    """Rational enclosure of ``n 2^(c5 sqrt(log2 n))``."""
    const = RecursionConstants(k, ell)
    exact = _exp_branch_exact(n, const)
    if exact is not None:
        return Fraction(exact), Fraction(exact)
    with precision():
        val = ivx(n) * iv.mpf(2) ** (const.c5 * iv.sqrt(log2_iv(n)))
    return bounds(val)


def bound(n: int, k: int, ell: int) -> int:
    """Ceiling of ``max(c4 n, n 2^(c5 sqrt(log2 n)))``; never below the true value."""
    if n < 1:
        raise ValueError("n must be positive")
    const = RecursionConstants(k, ell)
    linear = const.c4 * n
    _, hi = exp_branch(n, k, ell)
    return math.ceil(max(linear, hi))


def iteration_count(d0: Fraction | int, k: int) -> int:
    """``ceil(2 log d0 / (3 log c3))``: smallest ``T`` with ``d0^2 <= c3^(3T)``."""
    d0 = Fraction(d0)
    if d0 <= 1:
        raise ValueError("iteration count needs d0 > 1")
    if k < 2:
        raise ValueError("k must be at least 2")
    c3 = 4 * k - 4
    p, q = d0.numerator, d0.denominator
    t = 0
    while p * p > c3 ** (3 * t) * q * q:
        t += 1
    return t


def case_inequalities(n0: int, m0: int, k: int, ell: int, t: int | None = None) -> dict[str, bool]:
    """Which of the three competing inequalities hold for a host with ``n0``, ``m0``.

    Each side is raised to the power ``3(k-1)`` so everything stays rational:
    (a) ``d0^t <= (m0/d0)^(3(k-1))``, (b) ``d0^t <= (c1 c3)^(3t(k-1))``,
    (c) ``d0^t <= c3^(3 C(t,2))``.
    """
    d0 = Fraction(2 * m0, n0)
    if t is None:
        t = iteration_count(d0, k)
    const = RecursionConstants(k, ell)
    lhs = d0**t
    a = lhs <= (Fraction(m0) / d0) ** (3 * (k - 1))
    b = lhs <= Fraction(const.base) ** (3 * t) * Fraction(const.c3) ** (3 * t * (k - 1))
    c = lhs <= Fraction(const.c3) ** (3 * math.comb(t, 2))
    return {"t": t, "a": a, "b": b, "c": c}


# ---------------------------------------------------------------- pipeline


@dataclass(frozen=True)
class TraceRow:
    index: int
    n: int
    m: int
    d: Fraction
    outcome: str
    f: int | None = None

    def as_dict(self) -> dict[str, Any]:
        return {"t": self.index, "n": self.n, "m": self.m, "d": str(self.d), "outcome": self.outcome, "f": self.f}


@dataclass
class RecursionTrace:
    rows: list[TraceRow] = field(default_factory=list)
    verdict: str = ""
    audits: list[dict[str, Any]] = field(default_factory=list)

    def check_inequalities(self, k: int, ell: int) -> list[str]:
        """Violations of ``d' >= d/c3`` and ``m' <= c1 m / d^c2`` between dense steps."""
        c3 = 4 * k - 4
        base = STEP_CONSTANT * k * ell**2
        bad = []
        for cur, nxt in zip(self.rows, self.rows[1:]):
            if cur.outcome != "dense":
                continue
            if nxt.d < cur.d / c3:
                bad.append(f"t={cur.index}: d fell from {cur.d} to {nxt.d}")
            # m' <= c1 m / d^c2  <=>  m'^(k-1) d <= base m^(k-1)
            if Fraction(nxt.m) ** (k - 1) * cur.d > base * Fraction(cur.m) ** (k - 1):
                bad.append(f"t={cur.index}: m fell from {cur.m} only to {nxt.m}")
        return bad

    def as_dict(self) -> dict[str, Any]:
        return {"rows": [r.as_dict() for r in self.rows], "verdict": self.verdict, "steps": self.audits}


@dataclass(frozen=True)
class DriverBudget:
    max_iterations: int = 64
    search_nodes: int = 200_000
    grid_cap: int = DEFAULT_GRID_CAP
    embed_budget: int = 200_000
    seed: int = 0


@dataclass(frozen=True)
class Found:
    """A verified embedding of the pattern in the original host."""

    embedding: Embedding
    method: str
    trace: RecursionTrace
    kind = "found"


@dataclass(frozen=True)
class DensityCertificate:
    """Where the recursion stopped, and why.

    Not a proof of avoidance unless ``avoidance_proved`` is set, which only
    happens when the exact search finished on the whole host (or the star test
    applies).
    """

    trace: RecursionTrace
    final: EdgeOrderedGraph
    final_ids: tuple[int, ...]
    avoidance_proved: bool
    kind = "certificate"


DriverOutcome = Union[Found, DensityCertificate]


def _star_shortcut(g: EdgeOrderedGraph, pattern: ForbiddenForest) -> Embedding | None:
    h = pattern.graph
    centre = pattern.left[0]
    leaves = [y for y, _ in h.adjacency[centre]]
    for x in range(g.n):
        inc = g.adjacency[x]
        if len(inc) < len(leaves):
            continue
        mapping = [0] * h.n
        mapping[centre] = x
        for y, (z, _) in zip(leaves, inc):
            mapping[y] = z
        rest = [v for v in range(h.n) if v != centre and v not in leaves]
        used = {mapping[centre], *(mapping[y] for y in leaves)}
        free = [z for z in range(g.n) if z not in used]
        if len(free) < len(rest):
            continue
        for v, z in zip(rest, free):
            mapping[v] = z
        return Embedding(tuple(mapping))
    return None


def _search(g: EdgeOrderedGraph, h: EdgeOrderedGraph, nodes: int) -> tuple[Embedding | None, bool]:
    """(embedding, decided) from a bounded exact search."""
    try:
        return contains(g, h, budget=nodes), True
    except BudgetExceeded:
        return None, False


def find_or_certify(g: EdgeOrderedGraph, pattern: ForbiddenForest, budget: DriverBudget = DriverBudget()) -> DriverOutcome:
    """Look for the pattern in ``g``, narrowing ``g`` with increment steps.

    Every round first runs the bounded exact search on the current subgraph, then
    applies one increment step. Stops with a certificate once ``m_t < k``, when a
    step no longer shrinks the graph, or after ``max_iterations`` rounds.
    """
    h = pattern.graph
    trace = RecursionTrace()
    if pattern.is_star:
        emb = _star_shortcut(g, pattern)
        if emb is not None:
            trace.verdict = "star shortcut"
            return _found(g, h, emb, "star", trace)
        trace.verdict = "star absent: max degree below star size"
        return DensityCertificate(trace, g, tuple(range(g.n)), True)

    cur = normalize_labels(g)
    ids = tuple(range(g.n))
    avoids = proved = False
    for t in range(budget.max_iterations):
        d = average_degree(cur) if cur.n else Fraction(0)
        if not avoids and cur.m:
            emb, decided = _search(cur, h, budget.search_nodes)
            if emb is not None:
                trace.rows.append(TraceRow(t, cur.n, cur.m, d, "search"))
                trace.verdict = "found by search"
                return _found(g, h, emb.compose(ids), "search", trace)
            if decided:
                avoids = True
                proved = t == 0
        if cur.m < pattern.k:
            trace.rows.append(TraceRow(t, cur.n, cur.m, d, "host"))
            trace.verdict = "m < k"
            return DensityCertificate(trace, cur, ids, proved)
        try:
            out = increment_step(
                cur, pattern, seed=budget.seed, grid_cap=budget.grid_cap, embed_budget=budget.embed_budget
            )
        except IncrementDiagnostic as exc:
            trace.audits.append(exc.audit.to_dict())
            if avoids:
                raise
            emb, decided = _search(cur, h, 50 * budget.search_nodes)
            if emb is None:
                raise
            trace.rows.append(TraceRow(t, cur.n, cur.m, d, "search", exc.audit.f))
            trace.verdict = "found by search after diagnostic"
            return _found(g, h, emb.compose(ids), "search", trace)
        trace.audits.append(out.audit.to_dict())
        if isinstance(out, FoundEmbedding):
            trace.rows.append(TraceRow(t, cur.n, cur.m, d, "embedding", out.audit.f))
            trace.verdict = "found by nice embedding"
            return _found(g, h, out.embedding.compose(ids), "nice", trace)
        if isinstance(out, HostReturned):
            trace.rows.append(TraceRow(t, cur.n, cur.m, d, "host"))
            trace.verdict = out.reason
            return DensityCertificate(trace, cur, ids, proved)
        trace.rows.append(TraceRow(t, cur.n, cur.m, d, "dense", out.audit.f))
        nxt, sub_ids = out.subgraph.compact()
        if nxt.m == cur.m and nxt.n == cur.n:
            trace.rows.append(TraceRow(t + 1, nxt.n, nxt.m, average_degree(nxt), "stalled"))
            trace.verdict = "fixed point"
            return DensityCertificate(trace, nxt, tuple(ids[i] for i in sub_ids), proved)
        cur, ids = nxt, tuple(ids[i] for i in sub_ids)
    raise BudgetExceeded(f"recursion did not settle within {budget.max_iterations} iterations")


def _found(g: EdgeOrderedGraph, h: EdgeOrderedGraph, emb: Embedding, method: str, trace: RecursionTrace) -> Found:
    if not verify_embedding(g, h, emb):
        raise AssertionError(f"{method} produced an invalid embedding {emb}")
    return Found(emb, method, trace)
