import random
from fractions import Fraction

import networkx as nx
import pytest

from stapkit.greedy import local_greedy
from stapkit.hyperlinks import HyperLink, HyperTapInstance, build_gamma_restricted
from stapkit.instance import BudgetExceeded, InfeasibleInstance, complete, make_instance, root_tree
from stapkit.nwgreedy import NwState, uncovered_edges, greedy_nwstap
from stapkit.oracles import (
    OracleBudget,
    check_feasible_nwstap,
    check_feasible_stap,
    exact_hypertap,
    exact_kthin_maximizer,
    exact_min_ratio_pseudo_spider,
    exact_nwstap,
    exact_stap,
)
from stapkit.rooted import RootedTree

from conftest import nx_two_edge_connected, random_nwstap, random_stap


def test_feasibility_basic():
    inst = make_instance("ab", [("a", "b")], [("a", "b", 1)])
    assert not check_feasible_stap(inst, [])
    assert check_feasible_stap(inst, [0])


def _nx_tree_edges_ok(inst, F):
    g = nx.Graph()
    g.add_nodes_from(inst.vertices)
    edges = list(inst.tree_edges) + [(inst.links[i].u, inst.links[i].v) for i in set(F)]
    for i, (u, v) in enumerate(edges):
        g.add_edge(u, ("mid", i))
        g.add_edge(("mid", i), v)
    br = set(map(frozenset, nx.bridges(g)))
    return not any(frozenset((u, ("mid", i))) in br for i, (u, _) in enumerate(inst.tree_edges))


@pytest.mark.parametrize("seed", range(50))
def test_feasibility_matches_bridge_finding(seed):
    rng = random.Random(seed)
    inst = random_stap(seed)
    for _ in range(5):
        F = [i for i in range(len(inst.links)) if rng.random() < 0.5]
        assert check_feasible_stap(inst, F) == _nx_tree_edges_ok(inst, F)


def test_exact_stap_basic():
    inst = make_instance("ab", [("a", "b")], [("a", "b", 7)])
    assert exact_stap(inst) == (7, [0])
    bad = make_instance("abc", [("a", "b"), ("b", "c")], [("a", "b", 1)])
    with pytest.raises(InfeasibleInstance):
        exact_stap(bad)


def test_exact_stap_budget():
    inst = random_stap(5, max_links=18)
    with pytest.raises(BudgetExceeded):
        exact_stap(inst, OracleBudget(max_links=1))


def _brute_stap(inst):
    n = len(inst.links)
    best = None
    for mask in range(1 << n):
        F = [i for i in range(n) if mask >> i & 1]
        c = sum((inst.links[i].cost for i in F), Fraction(0))
        if (best is None or c < best) and check_feasible_stap(inst, F):
            best = c
    return best


@pytest.mark.parametrize("seed", range(25))
def test_exact_stap_matches_full_enumeration(seed):
    inst = random_stap(seed, max_terminals=5, max_steiner=2, max_links=11)
    cost, F = exact_stap(inst)
    assert cost == _brute_stap(inst)
    assert check_feasible_stap(inst, F)
    assert cost == sum(inst.links[i].cost for i in F)
    assert cost <= local_greedy(inst).link_cost


@pytest.mark.parametrize("seed", range(25))
def test_hypertap_agrees_with_stap(seed):
    inst = random_stap(seed, max_terminals=6)
    rt = root_tree(inst)
    H = build_gamma_restricted(complete(inst, rt), rt, len(inst.terminals))
    cost, chosen = exact_hypertap(H)
    assert cost == exact_stap(inst)[0]
    covered = set()
    for ln in chosen:
        covered |= H.coverage(ln)
    assert covered == set(range(len(inst.tree_edges)))


def test_hypertap_basic():
    rt = RootedTree("a", [], "a")
    assert exact_hypertap(HyperTapInstance(rt, (), 2)) == (0, [])
    rt = RootedTree("abc", [("a", "b"), ("b", "c")], "a")
    one = HyperLink(0, frozenset("ac"), Fraction(2))
    assert exact_hypertap(HyperTapInstance(rt, (one,), 2)) == (2, [one])
    with pytest.raises(InfeasibleInstance):
        exact_hypertap(HyperTapInstance(rt, (HyperLink(0, frozenset("ab"), Fraction(1)),), 2))


def test_kthin_oracle_basic():
    rt = RootedTree("ab", [("a", "b")], "a")
    assert exact_kthin_maximizer(1, HyperTapInstance(rt, (), 2), [], 1) == ([], 0)
    links = tuple(HyperLink(i, frozenset("ab"), Fraction(1)) for i in range(20))
    with pytest.raises(BudgetExceeded):
        exact_kthin_maximizer(1, HyperTapInstance(rt, links, 2), [], 1)


def test_kthin_oracle_unconstrained_when_k_large():
    from stapkit.uplinks import UpLink

    rt = RootedTree("abc", [("a", "b"), ("b", "c")], "a")
    ups = [UpLink("b", "a", Fraction(3), 0, (rt.edge_of["b"],)), UpLink("c", "b", Fraction(3), 1, (rt.edge_of["c"],))]
    links = (HyperLink(0, frozenset("ab"), Fraction(1)), HyperLink(1, frozenset("bc"), Fraction(1)),
             HyperLink(2, frozenset("abc"), Fraction(5)))
    H = HyperTapInstance(rt, links, 3)
    Z, val = exact_kthin_maximizer(1, H, ups, 3)
    assert [ln.id for ln in Z] == [0, 1] and val == 4


def test_nwstap_basic():
    hub = make_instance("abc", [("a", "b"), ("b", "c")], [("h", "a"), ("h", "b"), ("h", "c")],
                        steiner=["h"], variant="node", node_costs={"h": 4})
    assert exact_nwstap(hub) == (4, ["h"])
    free = make_instance("ab", [("a", "b")], [("a", "b")], variant="node")
    assert exact_nwstap(free) == (0, [])
    bad = make_instance("ab", [("a", "b")], [("h", "a")], steiner=["h"], variant="node", node_costs={"h": 1})
    with pytest.raises(InfeasibleInstance):
        exact_nwstap(bad)


@pytest.mark.parametrize("seed", range(25))
def test_nwstap_below_greedy(seed):
    inst = random_nwstap(seed)
    cost, S = exact_nwstap(inst)
    assert check_feasible_nwstap(inst, S) and nx_two_edge_connected(inst, S)
    assert cost <= greedy_nwstap(inst).cost


def test_spider_oracle_unique_and_symmetric():
    inst = make_instance("ab", [("a", "b")], [("s", "a"), ("s", "b")], steiner=["s"], variant="node", node_costs={"s": 3})
    rt = root_tree(inst)
    assert exact_min_ratio_pseudo_spider(NwState(U={0}), inst, rt) == ("s", frozenset("ab"), 3)
    sym = make_instance("abc", [("a", "b"), ("a", "c")], [("s", "a"), ("s", "b"), ("s", "c")],
                        steiner=["s"], variant="node", node_costs={"s": 2})
    rt_b = root_tree(sym, "b")
    rt_c = root_tree(sym, "c")
    r1 = exact_min_ratio_pseudo_spider(NwState(U=uncovered_edges(sym, rt_b, ())), sym, rt_b)[2]
    r2 = exact_min_ratio_pseudo_spider(NwState(U=uncovered_edges(sym, rt_c, ())), sym, rt_c)[2]
    assert r1 == r2 == 1


def test_spider_oracle_budget():
    inst = random_nwstap(1, max_terminals=6)
    rt = root_tree(inst)
    with pytest.raises(BudgetExceeded):
        exact_min_ratio_pseudo_spider(NwState(U=uncovered_edges(inst, rt, ())), inst, rt, OracleBudget(max_terminals=1))
