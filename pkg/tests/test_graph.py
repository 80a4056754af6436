from fractions import Fraction
import random

import pytest
from hypothesis import given, settings

from eoturan.graph import (
    EdgeOrderedGraph,
    GraphError,
    average_degree,
    canonical_key,
    complete_graph,
    is_equivalent,
    is_isomorphic,
    normalize_labels,
    parse,
    parse_path_notation,
    reverse_order,
    serialize,
)
from helpers import eo_graphs, permute_vertices


def test_parse_basic():
    g = parse("3 2\n0 1 5\n1 2 9")
    assert (g.n, g.m) == (3, 2)
    assert set(g.labels) == {5, 9}


def test_parse_comments_and_blank_lines():
    g = parse("# header next\n3 1  # one edge\n\n2 0 7\n")
    assert g.edges == ((0, 2, 7),)


@pytest.mark.parametrize(
    "text, fragment, line",
    [
        ("2 1\n0 1 1\n0 1 2", "duplicate edge", 3),
        ("2 2\n0 1 1\n1 0 2", "duplicate edge", 3),
        ("3 2\n0 1 1\n1 2 1", "duplicate label", 3),
        ("3 1\n1 1 4", "self-loop", 2),
        ("3 1\n0 3 4", "out of range", 2),
        ("3 1\n0 x 4", "malformed", 2),
        ("3 2\n0 1 4", "announces 2 edges", 1),
        ("3 1\n0 1", "u v label", 2),
        ("", "missing header", None),
    ],
)
def test_parse_errors_carry_line_numbers(text, fragment, line):
    with pytest.raises(GraphError) as info:
        parse(text)
    assert fragment in str(info.value)
    assert info.value.line == line


def test_parse_p5_1342_file_form():
    assert parse("5 4\n0 1 1\n1 2 3\n2 3 4\n3 4 2") == parse_path_notation("P5^1342")


@pytest.mark.parametrize("name", ["P5^1342", "P_5^{1342}", "P5^1,3,4,2"])
def test_path_notation_spellings(name):
    g = parse_path_notation(name)
    assert g.n == 5
    assert [g.label(i, i + 1) for i in range(4)] == [1, 3, 4, 2]


def test_path_notation_short_and_long():
    assert parse_path_notation("P3^12").edges == ((0, 1, 1), (1, 2, 2))
    g = parse_path_notation("P6^14523")
    assert g.m == 5 and [g.label(i, i + 1) for i in range(5)] == [1, 4, 5, 2, 3]


@pytest.mark.parametrize("bad", ["P5^1322", "P5^123", "Q5^1234", "P1^"])
def test_path_notation_errors(bad):
    with pytest.raises(GraphError):
        parse_path_notation(bad)


def test_normalize_examples():
    g = EdgeOrderedGraph(3, ((0, 1, 5), (1, 2, 9)))
    assert normalize_labels(g).edges == ((0, 1, 1), (1, 2, 2))
    h = EdgeOrderedGraph(4, ((0, 1, -3), (1, 2, 100), (2, 3, 7)))
    n = normalize_labels(h)
    assert [n.label(0, 1), n.label(1, 2), n.label(2, 3)] == [1, 3, 2]
    k4 = complete_graph(4)
    assert normalize_labels(k4) is k4


def test_isomorphism_examples():
    p = parse_path_notation
    assert is_isomorphic(p("P3^12"), p("P3^21"))
    assert not is_isomorphic(p("P5^1342"), p("P5^1234"))
    # reversed order, not an edge-order isomorphism
    assert not is_isomorphic(p("P5^1342"), p("P5^4213"))
    assert is_equivalent(p("P5^1342"), p("P5^4213"))
    assert reverse_order(p("P5^1342")) == EdgeOrderedGraph(5, ((0, 1, -1), (1, 2, -3), (2, 3, -4), (3, 4, -2)))


@pytest.mark.parametrize("n, edges, expected", [(4, "K4", Fraction(3)), (30, 30, Fraction(2)), (5, 4, Fraction(8, 5))])
def test_average_degree(n, edges, expected):
    if edges == "K4":
        g = complete_graph(4)
    else:
        rng = random.Random(n)
        pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
        g = EdgeOrderedGraph(n, tuple((u, v, i) for i, (u, v) in enumerate(rng.sample(pairs, edges))))
    assert average_degree(g) == expected


def test_average_degree_empty():
    with pytest.raises(GraphError):
        average_degree(EdgeOrderedGraph(0))


def test_constructor_validation():
    with pytest.raises(GraphError):
        EdgeOrderedGraph(2, ((0, 0, 1),))
    with pytest.raises(GraphError):
        EdgeOrderedGraph(-1)


@given(eo_graphs())
def test_round_trip(g):
    assert parse(serialize(g)) == g
    assert serialize(parse(serialize(g))) == serialize(g)


@given(eo_graphs())
def test_normalize_idempotent_and_isomorphic(g):
    n = normalize_labels(g)
    assert normalize_labels(n) == n
    assert sorted(n.labels) == list(range(1, g.m + 1))
    assert is_isomorphic(g, n)


@settings(max_examples=60)
@given(eo_graphs(max_n=6))
def test_canonical_key_detects_isomorphism(g):
    rng = random.Random(g.m)
    h = permute_vertices(rng, normalize_labels(g))
    assert is_isomorphic(g, h)
    assert canonical_key(g) == canonical_key(h)


@settings(max_examples=60)
@given(eo_graphs(max_n=5), eo_graphs(max_n=5), eo_graphs(max_n=5))
def test_isomorphism_is_equivalence(a, b, c):
    assert is_isomorphic(a, a)
    assert is_isomorphic(a, b) == is_isomorphic(b, a)
    assert is_isomorphic(a, b) == (canonical_key(a) == canonical_key(b))
    if is_isomorphic(a, b) and is_isomorphic(b, c):
        assert is_isomorphic(a, c)
