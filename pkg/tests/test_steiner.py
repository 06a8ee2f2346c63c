import math
import random
from fractions import Fraction
from itertools import combinations

import pytest

from stapkit.steiner import SteinerTable, dreyfus_wagner

from conftest import brute_steiner


def random_graph(rng, n, p):
    vs = [f"n{i}" for i in range(n)]
    edges = []
    for a, b in combinations(vs, 2):
        if rng.random() < p:
            edges.append((a, b, Fraction(rng.randint(1, 9), rng.choice([1, 2]))))
    return vs, edges


def test_two_terminals_is_shortest_path():
    edges = [("a", "s", 1), ("s", "b", 1), ("a", "b", 3)]
    t = dreyfus_wagner(edges, ["a", "b"])
    assert t.cost == 2 and t.edges == frozenset({0, 1})


def test_unreachable_is_infinite():
    assert math.isinf(dreyfus_wagner([("a", "b", 1), ("c", "d", 1)], ["a", "c"]).cost)


def test_unknown_terminal():
    with pytest.raises(ValueError):
        dreyfus_wagner([("a", "b", 1)], ["a", "z"], vertices="ab")


@pytest.mark.parametrize("seed", range(40))
def test_matches_brute_force(seed):
    rng = random.Random(seed)
    vs, edges = random_graph(rng, rng.randint(3, 9), 0.45)
    terms = rng.sample(vs, rng.randint(2, min(4, len(vs))))
    t = dreyfus_wagner(edges, terms, vertices=vs)
    want = brute_steiner(vs, edges, terms)
    assert t.cost == want
    if not math.isinf(want):
        assert sum(edges[i][2] for i in t.edges) == t.cost


def test_exclusive_table_avoids_other_terminals():
    # the cheap route from a to c runs through terminal b
    edges = [("a", "b", 1), ("b", "c", 1), ("a", "s", 3), ("s", "c", 3)]
    table = SteinerTable("abcs", edges, ["a", "b", "c"], exclusive=True)
    assert table.tree(("a", "c")).cost == 6
    assert table.tree(("a", "b", "c")).cost == 2
    plain = SteinerTable("abcs", edges, ["a", "b", "c"])
    assert plain.tree(("a", "c")).cost == 2
