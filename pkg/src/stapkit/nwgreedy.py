"""Greedy pseudo-spiders for node-weighted Steiner tree augmentation."""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from fractions import Fraction

from .graphs import bridges, induced_edges
from .instance import InfeasibleInstance, InvalidInstance, NODE, StapError, StapInstance, require_valid, root_tree, subdivide_links
from .rooted import RootedTree
from .submodular import sviridenko_max


@dataclass(frozen=True)
class PseudoSpider:
    head: str
    feet: frozenset
    legs: dict  # foot -> vertex path from the head
    cost: Fraction  # head plus every leg paid separately

    @property
    def nodes(self) -> frozenset:
        out = {self.head}
        for path in self.legs.values():
            out.update(path)
        return frozenset(out)


@dataclass
class NwState:
    S: set = field(default_factory=set)
    U: set = field(default_factory=set)  # uncovered tree edge ids
    log: list = field(default_factory=list)


def cov(rt: RootedTree, A) -> frozenset:
    return rt.cover(A)


def node_weighted_sssp(inst: StapInstance, h: str, costs=None):
    """Cheapest link paths from ``h``, paying for internal vertices only.

    Returns ``(dist, pred)`` for every reachable vertex; ``dist[w]`` excludes
    the cost of ``h`` and of ``w`` itself.  Terminals cost nothing.
    """
    if costs is None:
        costs = inst.node_costs
    adj = inst.adjacency()

    def price(v):
        return Fraction(0) if v in inst.terminals else costs.get(v, Fraction(0))

    reach = {h: Fraction(0)}  # includes the cost of the vertex itself
    pred: dict[str, str] = {}
    heap = [(Fraction(0), h)]
    done = set()
    while heap:
        d, x = heapq.heappop(heap)
        if x in done:
            continue
        done.add(x)
        for y, _ in sorted(adj[x]):
            nd = d + price(y)
            if y not in done and (y not in reach or nd < reach[y]):
                reach[y] = nd
                pred[y] = x
                heapq.heappush(heap, (nd, y))
    dist = {v: (d - price(v) if v != h else Fraction(0)) for v, d in reach.items()}
    return dist, pred


def _leg(pred, h, f):
    path = [f]
    while path[-1] != h:
        path.append(pred[path[-1]])
    return tuple(reversed(path))


def _prices(inst, state):
    return {v: (Fraction(0) if v in state.S else c) for v, c in inst.node_costs.items()}


def _budget_grid(leg_costs, total):
    positive = [c for c in leg_costs if c > 0]
    grid = [Fraction(0)]
    if positive:
        g = min(positive)
        while True:
            grid.append(g)
            if g >= total:
                break
            g *= 2
    return grid


def best_pseudo_spider(state: NwState, inst: StapInstance, rt: RootedTree, seed_size=3):
    """Approximately minimum ratio of cost to newly covered tree edges.

    Every Steiner head and anchor foot is tried; the other feet come from
    budgeted submodular maximization over a doubling grid of leg budgets.
    """
    if not state.U:
        raise StapError("nothing left to cover")
    prices = _prices(inst, state)
    U = frozenset(state.U)
    terms = sorted(inst.terminals)
    best, best_key = None, None
    for h in inst.steiner:
        dist, pred = node_weighted_sssp(inst, h, prices)
        feet = [t for t in terms if t in dist]
        if len(feet) < 2:
            continue
        if not U & cov(rt, feet):
            continue
        grid = _budget_grid([dist[t] for t in feet], sum(dist[t] for t in feet))
        for p in feet:
            items = [(t, dist[t]) for t in feet if t != p]

            def gain(P, p=p):
                return len(U & cov(rt, P | {p}))

            tried = set()
            for g in grid:
                if g < dist[p]:
                    continue
                P = sviridenko_max(items, gain, g - dist[p], seed_size)
                if P in tried:
                    continue
                tried.add(P)
                covered = gain(P)
                if covered == 0:
                    continue
                cost = prices[h] + dist[p] + sum(dist[t] for t in P)
                ratio = cost / covered
                allfeet = P | {p}
                key = (ratio, cost, h, tuple(sorted(allfeet)))
                if best_key is None or key < best_key:
                    best_key = key
                    best = PseudoSpider(h, frozenset(allfeet), {t: _leg(pred, h, t) for t in sorted(allfeet)}, cost)
    if best is None:
        raise InfeasibleInstance("no pseudo-spider covers an uncovered tree edge")
    return best, best_key[0]


@dataclass
class NwIteration:
    head: str
    feet: list[str]
    ratio: Fraction
    spider_cost: Fraction
    paid: Fraction
    newly_covered: int


@dataclass
class NwSolution:
    nodes: list[str]
    cost: Fraction
    iterations: list[NwIteration]
    pruned: list[str]


def uncovered_edges(inst, rt, S):
    """Tree edges that are still bridges once the nodes in ``S`` are bought."""
    keep = set(inst.terminals) | set(S)
    edges = induced_edges(inst, keep)
    br = bridges(keep, edges)
    n = len(inst.tree_edges)
    return {i for i in br if i < n}


def greedy_nwstap(inst: StapInstance, seed_size=3, root=None) -> NwSolution:
    from .oracles import check_feasible_nwstap

    require_valid(inst)
    if inst.variant != NODE:
        raise InvalidInstance("greedy_nwstap needs a node-weighted instance")
    if any(ln.cost for ln in inst.links):
        inst = subdivide_links(inst)
    rt = root_tree(inst, root)
    if uncovered_edges(inst, rt, inst.steiner):
        raise InfeasibleInstance("some tree edge stays a bridge even with every Steiner node")
    state = NwState(U=uncovered_edges(inst, rt, ()))
    limit = len(inst.tree_edges)
    while state.U:
        if len(state.log) >= limit:
            raise StapError("iteration bound exceeded")
        spider, ratio = best_pseudo_spider(state, inst, rt, seed_size)
        new = [v for v in sorted(spider.nodes) if v not in inst.terminals and v not in state.S]
        paid = sum((inst.node_costs[v] for v in new), Fraction(0))
        state.S.update(new)
        before = len(state.U)
        state.U -= cov(rt, spider.feet)
        state.U &= uncovered_edges(inst, rt, state.S)
        state.log.append(NwIteration(spider.head, sorted(spider.feet), ratio, spider.cost, paid, before - len(state.U)))
        assert len(state.U) < before
    # drop purchased nodes that became redundant, most expensive first
    S = set(state.S)
    pruned = []
    for v in sorted(S, key=lambda v: (-inst.node_costs[v], v)):
        if not uncovered_edges(inst, rt, S - {v}):
            S.discard(v)
            pruned.append(v)
    if not check_feasible_nwstap(inst, S):
        raise StapError("greedy node set is not 2-edge-connected")
    return NwSolution(
        nodes=sorted(S),
        cost=sum((inst.node_costs[v] for v in S), Fraction(0)),
        iterations=state.log,
        pruned=pruned,
    )
