"""Edge-ordered graphs: the core value type, the EOG text format and isomorphism.

An edge-ordered graph is a simple graph on vertices ``0..n-1`` whose edges carry
pairwise distinct integer labels; only the relative order of the labels matters.
"""

from __future__ import annotations

import re
from bisect import bisect_left
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Sequence

Edge = tuple[int, int, int]


class GraphError(ValueError):
    """Invalid edge-ordered graph data (parse errors carry a line number)."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


def _check_edges(n: int, edges: Iterable[Edge]) -> list[Edge]:
    if n < 0:
        raise GraphError(f"vertex count must be non-negative, got {n}")
    pairs: set[tuple[int, int]] = set()
    labels: set[int] = set()
    out = []
    for u, v, lab in edges:
        if not (0 <= u < n and 0 <= v < n):
            raise GraphError(f"vertex out of range in edge ({u}, {v})")
        if u == v:
            raise GraphError(f"self-loop at vertex {u}")
        a, b = (u, v) if u < v else (v, u)
        if (a, b) in pairs:
            raise GraphError(f"duplicate edge ({a}, {b})")
        if lab in labels:
            raise GraphError(f"duplicate label {lab}")
        pairs.add((a, b))
        labels.add(lab)
        out.append((a, b, int(lab)))
    out.sort(key=lambda e: e[2])
    return out


@dataclass(frozen=True)
class EdgeOrderedGraph:
    """Immutable edge-ordered simple graph.

    Edges are stored as ``(u, v, label)`` with ``u < v``, sorted by label, so two
    graphs compare equal exactly when they have the same vertex count, edges and
    labels.
    """

    n: int
    edges: tuple[Edge, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "edges", tuple(_check_edges(self.n, self.edges)))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]]) -> EdgeOrderedGraph:
        return cls(n, tuple((int(u), int(v), int(lab)) for u, v, lab in edges))

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def labels(self) -> tuple[int, ...]:
        return tuple(e[2] for e in self.edges)

    @cached_property
    def adjacency(self) -> tuple[tuple[tuple[int, int], ...], ...]:
        """Per vertex, ``(neighbour, label)`` pairs sorted by label."""
        adj: list[list[tuple[int, int]]] = [[] for _ in range(self.n)]
        for u, v, lab in self.edges:
            adj[u].append((v, lab))
            adj[v].append((u, lab))
        return tuple(tuple(a) for a in adj)

    @cached_property
    def edge_labels(self) -> Mapping[tuple[int, int], int]:
        table = {}
        for u, v, lab in self.edges:
            table[(u, v)] = lab
            table[(v, u)] = lab
        return table

    def label(self, u: int, v: int) -> int | None:
        return self.edge_labels.get((u, v))

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def incident_labels(self, v: int) -> list[int]:
        return [lab for _, lab in self.adjacency[v]]

    def average_degree(self) -> Fraction:
        return average_degree(self)

    def rank(self, label: int) -> int:
        """0-based position of ``label`` in the sorted label sequence."""
        i = bisect_left(self.labels, label)
        if i == len(self.labels) or self.labels[i] != label:
            raise KeyError(label)
        return i

    def is_normalized(self) -> bool:
        return self.labels == tuple(range(1, self.m + 1))

    def with_edges(self, edges: Iterable[Edge]) -> EdgeOrderedGraph:
        """Graph on the same vertex set with the given edges."""
        return EdgeOrderedGraph(self.n, tuple(edges))

    def __str__(self) -> str:
        return serialize(self)


@dataclass(frozen=True)
class Embedding:
    """Vertex map from a pattern into a host; ``mapping[i]`` is the image of pattern vertex ``i``."""

    mapping: tuple[int, ...]

    def __getitem__(self, v: int) -> int:
        return self.mapping[v]

    def __len__(self) -> int:
        return len(self.mapping)

    def __iter__(self) -> Iterator[int]:
        return iter(self.mapping)

    def as_dict(self) -> dict[int, int]:
        return dict(enumerate(self.mapping))

    def compose(self, outer: Sequence[int]) -> Embedding:
        """Embedding obtained by following this map with ``outer`` (e.g. subgraph ids to host ids)."""
        return Embedding(tuple(outer[x] for x in self.mapping))


@dataclass(frozen=True)
class Subgraph:
    """Edge subset of a host together with an explicit vertex set.

    Used for the pieces cut out of a host (G*, label slices). Average degree is
    taken over ``vertices``, which may include vertices with no edge here.
    """

    vertices: frozenset[int]
    edges: tuple[Edge, ...] = field(default=())

    @property
    def m(self) -> int:
        return len(self.edges)

    def average_degree(self) -> Fraction:
        if not self.vertices:
            return Fraction(0)
        return Fraction(2 * len(self.edges), len(self.vertices))

    def compact(self) -> tuple[EdgeOrderedGraph, tuple[int, ...]]:
        """Relabel vertices to ``0..|V|-1`` and labels to ``1..m``.

        Returns the graph and the original id of every new vertex.
        """
        ids = tuple(sorted(self.vertices))
        index = {v: i for i, v in enumerate(ids)}
        edges = sorted(self.edges, key=lambda e: e[2])
        g = EdgeOrderedGraph(
            len(ids), tuple((index[u], index[v], r) for r, (u, v, _) in enumerate(edges, 1))
        )
        return g, ids


def average_degree(g: EdgeOrderedGraph) -> Fraction:
    if g.n == 0:
        raise GraphError("average degree undefined on the empty vertex set")
    return Fraction(2 * g.m, g.n)


# ---------------------------------------------------------------- EOG text


def parse(text: str) -> EdgeOrderedGraph:
    """Read the EOG format: a header ``n m`` then ``m`` lines ``u v label``."""
    rows: list[tuple[int, list[int]]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            nums = [int(tok) for tok in line.split()]
        except ValueError:
            raise GraphError(f"malformed line {raw.strip()!r}", lineno) from None
        rows.append((lineno, nums))
    if not rows:
        raise GraphError("missing header line 'n m'")
    lineno, header = rows[0]
    if len(header) != 2 or header[0] < 0 or header[1] < 0:
        raise GraphError("header must be two non-negative integers 'n m'", lineno)
    n, m = header
    header_line = lineno

    pairs: set[tuple[int, int]] = set()
    labels: set[int] = set()
    edges = []
    for lineno, nums in rows[1:]:
        if len(nums) != 3:
            raise GraphError("edge line must be 'u v label'", lineno)
        u, v, lab = nums
        if not (0 <= u < n and 0 <= v < n):
            raise GraphError(f"vertex out of range in edge ({u}, {v})", lineno)
        if u == v:
            raise GraphError(f"self-loop at vertex {u}", lineno)
        key = (min(u, v), max(u, v))
        if key in pairs:
            raise GraphError(f"duplicate edge {key}", lineno)
        if lab in labels:
            raise GraphError(f"duplicate label {lab}", lineno)
        pairs.add(key)
        labels.add(lab)
        edges.append((u, v, lab))
    if len(edges) != m:
        raise GraphError(f"header announces {m} edges, found {len(edges)}", header_line)
    return EdgeOrderedGraph(n, tuple(edges))


def serialize(g: EdgeOrderedGraph) -> str:
    lines = [f"{g.n} {g.m}"]
    lines.extend(f"{u} {v} {lab}" for u, v, lab in g.edges)
    return "\n".join(lines) + "\n"


_PATH_RE = re.compile(r"^P_?\{?(\d+)\}?\^\{?([\d,\s]+)\}?$")


def parse_path_notation(s: str) -> EdgeOrderedGraph:
    """Build the path named like ``P5^1342``: labels listed along the path.

    Digits are single labels; use commas (``P11^1,10,2,...``) once labels reach 10.
    ``P_5^{1342}`` is accepted too.
    """
    match = _PATH_RE.match(s.strip())
    if not match:
        raise GraphError(f"not a path name: {s!r}")
    k = int(match.group(1))
    body = match.group(2).replace(" ", "")
    labels = [int(x) for x in body.split(",") if x] if "," in body else [int(c) for c in body]
    if k < 2 or len(labels) != k - 1:
        raise GraphError(f"{s!r}: a {k}-vertex path needs {k - 1} labels, got {len(labels)}")
    if len(set(labels)) != len(labels):
        raise GraphError(f"{s!r}: repeated label")
    return EdgeOrderedGraph(k, tuple((i, i + 1, lab) for i, lab in enumerate(labels)))


def normalize_labels(g: EdgeOrderedGraph) -> EdgeOrderedGraph:
    """Replace labels by their ranks ``1..m``."""
    if g.is_normalized():
        return g
    return EdgeOrderedGraph(g.n, tuple((u, v, r) for r, (u, v, _) in enumerate(g.edges, 1)))


# ---------------------------------------------------------------- isomorphism


def _relabel_runs(g: EdgeOrderedGraph) -> Iterator[tuple[tuple[int, int], ...]]:
    """Every first-appearance relabelling of the edge sequence.

    Walking edges in label order, a vertex gets the next free id when first met.
    The only freedom is the orientation of an edge whose endpoints are both new,
    so each branch point doubles the runs.
    """
    seq = [(u, v) for u, v, _ in g.edges]

    def rec(i: int, ids: dict[int, int], acc: list[tuple[int, int]]):
        if i == len(seq):
            yield tuple(acc)
            return
        u, v = seq[i]
        if u in ids or v in ids:
            ids2 = dict(ids)
            for x in (u, v):
                if x not in ids2:
                    ids2[x] = len(ids2)
            a, b = ids2[u], ids2[v]
            acc.append((min(a, b), max(a, b)))
            yield from rec(i + 1, ids2, acc)
            acc.pop()
            return
        for first, second in ((u, v), (v, u)):
            ids2 = dict(ids)
            ids2[first] = len(ids2)
            ids2[second] = len(ids2)
            a, b = ids2[u], ids2[v]
            acc.append((min(a, b), max(a, b)))
            yield from rec(i + 1, ids2, acc)
            acc.pop()

    yield from rec(0, {}, [])


def canonical_form(g: EdgeOrderedGraph) -> tuple[int, tuple[tuple[int, int], ...]]:
    """Complete invariant for edge-ordered isomorphism: ``(n, relabelled edge sequence)``."""
    return g.n, min(_relabel_runs(g))


def canonical_key(g: EdgeOrderedGraph) -> str:
    n, seq = canonical_form(g)
    return f"{n}:" + ",".join(f"{a}-{b}" for a, b in seq)


def is_isomorphic(a: EdgeOrderedGraph, b: EdgeOrderedGraph) -> bool:
    """True iff some vertex bijection carries the edges of ``a`` onto those of ``b`` in order.

    An edge-ordered isomorphism must send the i-th edge to the i-th edge, so the
    search only branches on edge orientation.
    """
    if a.n != b.n or a.m != b.m:
        return False
    if sorted(map(a.degree, range(a.n))) != sorted(map(b.degree, range(b.n))):
        return False
    ea = [(u, v) for u, v, _ in a.edges]
    eb = [(u, v) for u, v, _ in b.edges]

    def extend(i: int, fwd: dict[int, int], back: dict[int, int]) -> bool:
        if i == len(ea):
            return True
        u, v = ea[i]
        x, y = eb[i]
        for p, q in ((x, y), (y, x)):
            if fwd.get(u, p) != p or fwd.get(v, q) != q:
                continue
            if back.get(p, u) != u or back.get(q, v) != v:
                continue
            f2 = {**fwd, u: p, v: q}
            b2 = {**back, p: u, q: v}
            if extend(i + 1, f2, b2):
                return True
        return False

    return extend(0, {}, {})


def complete_graph(n: int, labels: Sequence[int] | None = None) -> EdgeOrderedGraph:
    """K_n with edges in lexicographic order labelled ``labels`` (default ``1..C(n,2)``)."""
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    if labels is None:
        labels = range(1, len(pairs) + 1)
    return EdgeOrderedGraph(n, tuple((u, v, lab) for (u, v), lab in zip(pairs, labels, strict=True)))


def star(leaves: int, labels: Sequence[int] | None = None) -> EdgeOrderedGraph:
    labels = list(range(1, leaves + 1)) if labels is None else list(labels)
    return EdgeOrderedGraph(leaves + 1, tuple((0, i + 1, lab) for i, lab in enumerate(labels)))


def reverse_order(g: EdgeOrderedGraph) -> EdgeOrderedGraph:
    """Same graph with the edge order reversed."""
    return EdgeOrderedGraph(g.n, tuple((u, v, -lab) for u, v, lab in g.edges))


def is_equivalent(a: EdgeOrderedGraph, b: EdgeOrderedGraph) -> bool:
    """Isomorphic, or isomorphic after reversing the edge order of one side.

    Reversal maps avoiders of ``a`` to avoiders of its reverse, so equivalent
    patterns share an extremal function.
    """
    return is_isomorphic(a, b) or is_isomorphic(reverse_order(a), b)
