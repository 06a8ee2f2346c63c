import math
import random
from fractions import Fraction

import networkx as nx
import pytest

from stapkit.instance import InfeasibleInstance, InvalidInstance, make_instance, root_tree
from stapkit.nwgreedy import NwState, uncovered_edges, best_pseudo_spider, cov, greedy_nwstap, node_weighted_sssp
from stapkit.oracles import exact_min_ratio_pseudo_spider, exact_nwstap
from stapkit.rooted import RootedTree

from conftest import nx_two_edge_connected, random_nwstap, random_tree_edges


def _hub(cost=4):
    return make_instance("abc", [("a", "b"), ("b", "c")], [("h", "a"), ("h", "b"), ("h", "c")],
                         steiner=["h"], variant="node", node_costs={"h": cost})


def test_cov_small():
    rt = RootedTree("abc", [("a", "b"), ("b", "c")], "a")
    assert cov(rt, {"a"}) == frozenset()
    assert cov(rt, {"b", "c"}) == frozenset({rt.edge_of["c"]})


def test_sssp_small():
    inst = make_instance("ab", [("a", "b")], [("h", "a"), ("h", "m"), ("m", "b")], steiner=["h", "m"],
                         variant="node", node_costs={"h": 1, "m": 2})
    dist, pred = node_weighted_sssp(inst, "h")
    assert dist["a"] == 0 and dist["b"] == 2 and dist["h"] == 0
    assert pred["b"] == "m"


def _simple_path_oracle(inst, h, w):
    g = nx.Graph()
    g.add_nodes_from(inst.vertices)
    g.add_edges_from((ln.u, ln.v) for ln in inst.links)
    if w == h:
        return Fraction(0)
    best = None
    for path in nx.all_simple_paths(g, h, w):
        c = sum((inst.node_costs.get(x, Fraction(0)) for x in path[1:-1] if x not in inst.terminals), Fraction(0))
        if best is None or c < best:
            best = c
    return best


@pytest.mark.parametrize("seed", range(20))
def test_sssp_matches_simple_paths(seed):
    inst = random_nwstap(seed, max_terminals=4, max_steiner=5)
    for h in inst.steiner:
        dist, _ = node_weighted_sssp(inst, h)
        for w in inst.vertices:
            want = _simple_path_oracle(inst, h, w)
            assert dist.get(w) == want


def test_single_hub_spider():
    inst = make_instance("ab", [("a", "b")], [("s", "a"), ("s", "b")], steiner=["s"], variant="node", node_costs={"s": 3})
    rt = root_tree(inst)
    spider, ratio = best_pseudo_spider(NwState(U={0}), inst, rt)
    assert spider.head == "s" and spider.feet == frozenset("ab") and ratio == 3


def test_dominant_head_wins():
    inst = make_instance("ab", [("a", "b")], [("s", "a"), ("s", "b"), ("x", "a"), ("x", "b")],
                         steiner=["s", "x"], variant="node", node_costs={"s": 2, "x": 5})
    spider, _ = best_pseudo_spider(NwState(U={0}), inst, root_tree(inst))
    assert spider.head == "s"


def test_free_links_need_nothing():
    inst = make_instance("abc", [("a", "b"), ("b", "c")], [("a", "c"), ("h", "a")], steiner=["h"],
                         variant="node", node_costs={"h": 1})
    sol = greedy_nwstap(inst)
    assert sol.nodes == [] and sol.cost == 0 and sol.iterations == []


def test_hub_is_bought():
    sol = greedy_nwstap(_hub())
    assert sol.nodes == ["h"] and sol.cost == 4


def test_infeasible_detected_up_front():
    inst = make_instance("ab", [("a", "b")], [("h", "a")], steiner=["h"], variant="node", node_costs={"h": 1})
    with pytest.raises(InfeasibleInstance):
        greedy_nwstap(inst)


def test_edge_variant_rejected():
    with pytest.raises(InvalidInstance):
        greedy_nwstap(make_instance("ab", [("a", "b")], [("a", "b", 1)]))


def test_costed_links_are_subdivided():
    inst = make_instance("ab", [("a", "b")], [("a", "b", 3)], variant="node")
    sol = greedy_nwstap(inst)
    assert sol.cost == 3 and len(sol.nodes) == 1


@pytest.mark.parametrize("seed", range(40))
def test_random_feasible_and_bounded(seed):
    inst = random_nwstap(seed, max_terminals=6, max_steiner=7)
    sol = greedy_nwstap(inst)
    assert nx_two_edge_connected(inst, sol.nodes)
    assert len(sol.iterations) <= len(inst.tree_edges)
    opt, _ = exact_nwstap(inst)
    assert opt <= sol.cost
    n = len(inst.tree_edges)
    assert float(sol.cost) <= 8 * (1 + math.log(n)) ** 2 * float(opt) + 1e-9


@pytest.mark.parametrize("seed", range(30))
def test_spider_step_factor(seed):
    inst = random_nwstap(seed, max_terminals=5, max_vertices=9)
    rt = root_tree(inst)
    rng = random.Random(seed)
    bought = set(rng.sample(inst.steiner, rng.randint(0, len(inst.steiner) // 2)))
    state = NwState(S=bought, U=uncovered_edges(inst, rt, bought))
    if not state.U:
        return
    _, ratio = best_pseudo_spider(state, inst, rt)
    _, _, best = exact_min_ratio_pseudo_spider(state, inst, rt)
    assert best <= ratio
    assert float(ratio) <= 2 * math.e / (math.e - 1) * float(best) + 1e-9


@pytest.mark.parametrize("seed", range(25))
def test_cov_submodular(seed):
    rng = random.Random(seed)
    names, edges = random_tree_edges(rng, rng.randint(2, 12))
    rt = RootedTree(names, edges, names[0])
    for _ in range(20):
        B = set(rng.sample(names, rng.randint(1, len(names))))
        A = set(rng.sample(sorted(B), rng.randint(1, len(B))))
        v = rng.choice(names)
        rest = [x for x in names if x not in B]
        if not rest:
            continue
        x = rng.choice(rest)
        gain_a = cov(rt, A | {v, x}) - cov(rt, A | {v})
        gain_b = cov(rt, B | {v, x}) - cov(rt, B | {v})
        assert gain_a >= gain_b
        assert cov(rt, A) <= cov(rt, B)
