"""Forbidden edge-ordered forests: close vertices and order chromatic number 2.

A forest has order chromatic number 2 exactly when it has a proper 2-colouring
with one colour class made of close vertices. That class is the *left* side,
enumerated ``w_1..w_k`` so that all edges at ``w_i`` precede those at ``w_j``
for ``i < j``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .graph import EdgeOrderedGraph, GraphError


class NotOcn2(ValueError):
    """The forest has no close colour class, so its order chromatic number exceeds 2."""


def close_vertices(h: EdgeOrderedGraph) -> frozenset[int]:
    """Vertices whose incident edges are consecutive in the edge order."""
    out = set()
    for v in range(h.n):
        labels = h.incident_labels(v)
        if len(labels) <= 1:
            out.add(v)
            continue
        lo, hi = h.rank(labels[0]), h.rank(labels[-1])
        if hi - lo + 1 == len(labels):
            out.add(v)
    return frozenset(out)


def components(h: EdgeOrderedGraph) -> list[list[int]]:
    seen = [False] * h.n
    comps = []
    for s in range(h.n):
        if seen[s]:
            continue
        seen[s] = True
        stack, comp = [s], []
        while stack:
            x = stack.pop()
            comp.append(x)
            for y, _ in h.adjacency[x]:
                if not seen[y]:
                    seen[y] = True
                    stack.append(y)
        comps.append(sorted(comp))
    return comps


def is_forest(h: EdgeOrderedGraph) -> bool:
    return h.m == h.n - len(components(h))


def two_coloring(h: EdgeOrderedGraph, comp: list[int]) -> tuple[list[int], list[int]]:
    """Both colour classes of a connected bipartite piece; the first holds ``comp[0]``."""
    colour = {comp[0]: 0}
    stack = [comp[0]]
    while stack:
        x = stack.pop()
        for y, _ in h.adjacency[x]:
            if y not in colour:
                colour[y] = 1 - colour[x]
                stack.append(y)
            elif colour[y] == colour[x]:
                raise GraphError("graph is not bipartite")
    side0 = sorted(v for v in comp if colour[v] == 0)
    side1 = sorted(v for v in comp if colour[v] == 1)
    return side0, side1


@dataclass(frozen=True)
class Ocn2Witness:
    close_side: frozenset[int]
    other_side: frozenset[int]
    left_order: tuple[int, ...]

    @property
    def k(self) -> int:
        return len(self.close_side)

    def left_index(self) -> dict[int, int]:
        """Left vertex -> its 1-based position ``i`` in ``w_1..w_k``."""
        return {w: i for i, w in enumerate(self.left_order, 1)}


def order_left(h: EdgeOrderedGraph, side) -> tuple[int, ...]:
    """Sort close vertices by their label intervals; isolated ones go last by id."""
    touching = [v for v in side if h.degree(v) > 0]
    isolated = sorted(v for v in side if h.degree(v) == 0)
    touching.sort(key=lambda v: h.incident_labels(v)[0])
    return tuple(touching) + tuple(isolated)


def check_witness(h: EdgeOrderedGraph, w: Ocn2Witness) -> list[str]:
    """Problems with ``w`` as a witness for ``h`` (empty list when valid)."""
    problems = []
    left, right = w.close_side, w.other_side
    if left & right or (left | right) != frozenset(range(h.n)):
        problems.append("sides do not partition the vertex set")
    for u, v, _ in h.edges:
        if (u in left) == (v in left):
            problems.append(f"edge ({u}, {v}) inside one side")
    close = close_vertices(h)
    if not left <= close:
        problems.append(f"non-close left vertices {sorted(left - close)}")
    if sorted(w.left_order) != sorted(left):
        problems.append("left order is not a permutation of the close side")
    seen_isolated = False
    for a, b in zip(w.left_order, w.left_order[1:]):
        la, lb = h.incident_labels(a), h.incident_labels(b)
        if not la:
            seen_isolated = True
        if seen_isolated and lb:
            problems.append("isolated left vertex placed before an edge-touching one")
        if la and lb and la[-1] >= lb[0]:
            problems.append(f"labels at {a} do not all precede labels at {b}")
    return problems


def ocn2_witness(h: EdgeOrderedGraph) -> Ocn2Witness | None:
    """A close colour class of ``h`` if one exists, else None.

    Per component, the all-close side is chosen; when both sides qualify the
    smaller wins, then the side holding the lowest vertex id. Isolated vertices
    join the close side.
    """
    if h.m == 0:
        raise GraphError("pattern must have at least one edge")
    if not is_forest(h):
        raise GraphError("pattern is not a forest")
    close = close_vertices(h)
    left: set[int] = set()
    right: set[int] = set()
    for comp in components(h):
        if len(comp) == 1:
            left.add(comp[0])
            continue
        a, b = two_coloring(h, comp)
        ok_a = all(v in close for v in a)
        ok_b = all(v in close for v in b)
        if not (ok_a or ok_b):
            return None
        if ok_a and ok_b:
            pick_a = len(a) <= len(b)
        else:
            pick_a = ok_a
        chosen, other = (a, b) if pick_a else (b, a)
        left.update(chosen)
        right.update(other)
    return Ocn2Witness(frozenset(left), frozenset(right), order_left(h, left))


@dataclass(frozen=True)
class ForbiddenForest:
    """A forest certified to have order chromatic number 2, with its left order."""

    graph: EdgeOrderedGraph
    witness: Ocn2Witness

    @property
    def k(self) -> int:
        return self.witness.k

    @property
    def ell(self) -> int:
        return self.graph.n

    @property
    def is_star(self) -> bool:
        """Single left vertex: one edge-ordering up to isomorphism, linear extremal function."""
        return self.k == 1

    @property
    def left(self) -> tuple[int, ...]:
        return self.witness.left_order

    @property
    def right(self) -> frozenset[int]:
        return self.witness.other_side

    def is_left(self, v: int) -> bool:
        return v in self.witness.close_side


def certify(h: EdgeOrderedGraph) -> ForbiddenForest:
    w = ocn2_witness(h)
    if w is None:
        raise NotOcn2("no proper 2-colouring with an all-close side; order chromatic number > 2")
    return ForbiddenForest(h, w)


# Named paths used as fixtures throughout the tests and the CLI examples.
NAMED_PATHS = ("P3^12", "P5^1234", "P5^1342", "P5^4213", "P5^3142", "P6^14523", "P6^15423")
