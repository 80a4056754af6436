"""Random generators and brute-force references shared by the tests."""

from __future__ import annotations

import random
from itertools import combinations, product

import networkx as nx
from hypothesis import strategies as st

from eoturan.graph import EdgeOrderedGraph, complete_graph, parse_path_notation
from eoturan.oracle import contains
from eoturan.pattern import NAMED_PATHS, certify, ocn2_witness


def random_graph(rng: random.Random, n: int, m: int | None = None, spread: int = 3) -> EdgeOrderedGraph:
    pairs = list(combinations(range(n), 2))
    if m is None:
        m = rng.randint(0, len(pairs))
    chosen = rng.sample(pairs, min(m, len(pairs)))
    labels = rng.sample(range(-spread * len(chosen), spread * len(chosen) + 1), len(chosen))
    return EdgeOrderedGraph(n, tuple((u, v, lab) for (u, v), lab in zip(chosen, labels)))


def relabel_randomly(rng: random.Random, g: EdgeOrderedGraph) -> EdgeOrderedGraph:
    """Same edges, labels a uniformly random permutation of 1..m."""
    labels = list(range(1, g.m + 1))
    rng.shuffle(labels)
    return EdgeOrderedGraph(g.n, tuple((u, v, lab) for (u, v, _), lab in zip(g.edges, labels)))


def permute_vertices(rng: random.Random, g: EdgeOrderedGraph) -> EdgeOrderedGraph:
    perm = list(range(g.n))
    rng.shuffle(perm)
    return EdgeOrderedGraph(g.n, tuple((perm[u], perm[v], lab) for u, v, lab in g.edges))


def unlabeled_forests(max_n: int):
    """One representative per isomorphism class of forests on 1..max_n vertices."""
    trees = {n: [sorted(t.edges()) for t in nx.nonisomorphic_trees(n)] if n > 1 else [[]] for n in range(1, max_n + 1)}

    def partitions(n, largest):
        if n == 0:
            yield []
            return
        for size in range(min(n, largest), 0, -1):
            for rest in partitions(n - size, size):
                yield [size, *rest]

    for n in range(1, max_n + 1):
        for parts in partitions(n, n):
            groups = {}
            for s in parts:
                groups[s] = groups.get(s, 0) + 1
            choices = []
            for s, c in groups.items():
                # multisets of c tree shapes of size s
                idx = range(len(trees[s]))
                choices.append([(s, combo) for combo in _multisets(idx, c)])
            for pick in product(*choices):
                edges, offset = [], 0
                for s, combo in pick:
                    for t in combo:
                        edges.extend((u + offset, v + offset) for u, v in trees[s][t])
                        offset += s
                yield n, edges


def _multisets(items, c):
    items = list(items)
    if c == 0:
        yield ()
        return
    for i, x in enumerate(items):
        for rest in _multisets(items[i:], c - 1):
            yield (x, *rest)


def is_close_brute(g: EdgeOrderedGraph, v: int) -> bool:
    ranks = sorted(g.rank(lab) for lab in g.incident_labels(v))
    return not ranks or ranks[-1] - ranks[0] + 1 == len(ranks)


def ocn2_brute(g: EdgeOrderedGraph) -> int | None:
    """Smallest all-close colour class over every proper 2-colouring, or None."""
    graph = nx.Graph()
    graph.add_nodes_from(range(g.n))
    graph.add_edges_from((u, v) for u, v, _ in g.edges)
    comps = [sorted(c) for c in nx.connected_components(graph)]
    sides = []
    for comp in comps:
        colour = nx.bipartite.color(graph.subgraph(comp))
        sides.append(([v for v in comp if colour[v] == 0], [v for v in comp if colour[v] == 1]))
    best = None
    # isolated vertices always sit on the close side
    options = [(0,) if len(comp) == 1 else (0, 1) for comp in comps]
    for pick in product(*options):
        close = [v for (a, b), p in zip(sides, pick) for v in (a, b)[p]]
        if all(is_close_brute(g, v) for v in close):
            best = len(close) if best is None else min(best, len(close))
    return best


def ocn2_patterns(rng: random.Random, ks=(2, 3), max_n: int = 6, tries: int = 200):
    """Random certified forests with the requested k (at least one edge)."""
    out = []
    forests = [(n, e) for n, e in unlabeled_forests(max_n) if e]
    for _ in range(tries):
        n, edges = rng.choice(forests)
        labels = rng.sample(range(1, len(edges) + 1), len(edges))
        h = permute_vertices(rng, EdgeOrderedGraph(n, tuple((u, v, lab) for (u, v), lab in zip(edges, labels))))
        w = ocn2_witness(h)
        if w is not None and w.k in ks:
            out.append(certify(h))
    return out


def avoiding_hosts(rng: random.Random, pattern: EdgeOrderedGraph, count: int, n_range=(4, 8), max_m: int = 12, min_m: int = 1):
    """Random hosts that the oracle proves avoid ``pattern``."""
    out = []
    while len(out) < count:
        n = rng.randint(*n_range)
        m = rng.randint(min_m, min(max_m, n * (n - 1) // 2))
        g = random_graph(rng, n, m)
        if contains(g, pattern) is None:
            out.append(g)
    return out


def named(s: str) -> EdgeOrderedGraph:
    return parse_path_notation(s)


FIXTURES = {s: named(s) for s in NAMED_PATHS}


@st.composite
def eo_graphs(draw, max_n: int = 7, min_n: int = 0, min_m: int = 0):
    n = draw(st.integers(min_n, max_n))
    pairs = list(combinations(range(n), 2))
    if len(pairs) < min_m:
        n = max_n
        pairs = list(combinations(range(n), 2))
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True, min_size=min(min_m, len(pairs)), max_size=len(pairs))) if pairs else []
    labels = draw(st.lists(st.integers(-50, 50), unique=True, min_size=len(chosen), max_size=len(chosen)))
    return EdgeOrderedGraph(n, tuple((u, v, lab) for (u, v), lab in zip(chosen, labels)))


def labelled_complete(n: int, rng: random.Random | None = None) -> EdgeOrderedGraph:
    if rng is None:
        return complete_graph(n)
    labels = list(range(1, n * (n - 1) // 2 + 1))
    rng.shuffle(labels)
    return complete_graph(n, labels)


def engineered_host(rng: random.Random, forest, slack: int = 0, side: int | None = None):
    """Complete bipartite host whose even grid gives every vertex weight N/k.

    Edge ``(a, b)`` gets class ``(a + b) mod k`` and a label drawn from that
    class's window, so each vertex has exactly ``N/k`` edges per class and
    ``W_t = 2N^2/k``; ``N = k(2 ell (u+1) + slack)`` meets ``2 ell (u+1) n``.
    """
    from eoturan.weights import Grid

    k, ell, u = forest.k, forest.ell, forest.graph.m
    N = k * (2 * ell * (u + 1) + slack) if side is None else side
    per = N * N // k
    windows = [list(range(j * per + 1, (j + 1) * per + 1)) for j in range(k)]
    for w in windows:
        rng.shuffle(w)
    perm = list(range(2 * N))
    rng.shuffle(perm)
    edges = []
    for a in range(N):
        for b in range(N):
            edges.append((perm[a], perm[N + b], windows[(a + b) % k].pop()))
    g = EdgeOrderedGraph(2 * N, tuple(edges))
    return g, Grid(tuple(j * per for j in range(k + 1)))


# criterion number -> list of (check, passed, detail); printed by conftest
ACCEPTANCE: dict[int, list[tuple[str, bool, str]]] = {}


def record(criterion: int, check: str, passed: bool, detail: str = "") -> bool:
    ACCEPTANCE.setdefault(criterion, []).append((check, passed, detail))
    print(f"[criterion {criterion}] {'PASS' if passed else 'FAIL'} {check} {detail}".rstrip())
    return passed
