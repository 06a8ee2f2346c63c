"""Exact solvers and feasibility checks for small instances.

These are deliberately simple enumerations; the approximation code is
tested against them.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .graphs import bridges, induced_edges, two_edge_connected
from .instance import BudgetExceeded, InfeasibleInstance, InvalidInstance, NODE, StapInstance, subdivide_links


@dataclass(frozen=True)
class OracleBudget:
    max_vertices: int = 15  # Steiner nodes for the node-weighted oracle
    max_links: int = 20
    max_subsets: int = 14  # hyper-links for the k-thin maximizer
    max_terminals: int = 10  # feet for the spider oracle
    max_edges: int = 20  # tree edges for the hyper-link set cover
    time_cap: float = 60.0


DEFAULT_BUDGET = OracleBudget()


class _Clock:
    def __init__(self, cap):
        self.stop = time.monotonic() + cap

    def check(self):
        if time.monotonic() > self.stop:
            raise BudgetExceeded("oracle time cap reached")


def check_feasible_stap(inst: StapInstance, F) -> bool:
    """True iff every tree edge has its two sides joined without it."""
    chosen = [inst.links[i] for i in set(F)]
    n = len(inst.tree_edges)
    for skip in range(n):
        parent = {v: v for v in inst.vertices}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for i, (a, b) in enumerate(inst.tree_edges):
            if i != skip:
                parent[find(a)] = find(b)
        for ln in chosen:
            parent[find(ln.u)] = find(ln.v)
        a, b = inst.tree_edges[skip]
        if find(a) != find(b):
            return False
    return True


def check_feasible_nwstap(inst: StapInstance, S) -> bool:
    """True iff the graph induced on terminals plus ``S`` is 2-edge-connected."""
    keep = set(inst.terminals) | set(S)
    if not keep <= set(inst.vertices):
        return False
    return two_edge_connected(keep, induced_edges(inst, keep))


def nw_coverable(inst: StapInstance) -> bool:
    """True iff buying every Steiner node leaves no tree edge as a bridge.

    Some subset is then 2-edge-connected: dropping every node that sits
    behind a link bridge keeps the tree edges covered.
    """
    n = len(inst.tree_edges)
    br = bridges(inst.vertices, induced_edges(inst, inst.vertices))
    return not any(i < n for i in br)


def _budget(budget):
    return DEFAULT_BUDGET if budget is None else budget


def exact_stap(inst: StapInstance, budget: OracleBudget | None = None):
    """Minimum-cost feasible link set as ``(cost, sorted link indices)``.

    Branches on the links leaving the side of some uncovered tree edge,
    cheapest first, and prunes on the incumbent cost.
    """
    budget = _budget(budget)
    if len(inst.links) > budget.max_links:
        raise BudgetExceeded(f"{len(inst.links)} links exceed the limit of {budget.max_links}")
    clock = _Clock(budget.time_cap)
    if not check_feasible_stap(inst, range(len(inst.links))):
        raise InfeasibleInstance("even all links together leave a tree edge uncovered")
    n = len(inst.tree_edges)
    order = sorted(range(len(inst.links)), key=lambda i: (inst.links[i].cost, i))
    free = [i for i in order if inst.links[i].cost == 0]
    best_cost, best_set = None, None

    def violated(chosen):
        edges = [tuple(e) for e in inst.tree_edges] + [(inst.links[i].u, inst.links[i].v) for i in chosen]
        for i in sorted(bridges(inst.vertices, edges)):
            if i < n:
                return i
        return None

    def side(chosen, e):
        adj = {v: [] for v in inst.vertices}
        for i, (a, b) in enumerate(inst.tree_edges):
            if i != e:
                adj[a].append(b)
                adj[b].append(a)
        for i in chosen:
            ln = inst.links[i]
            adj[ln.u].append(ln.v)
            adj[ln.v].append(ln.u)
        start = inst.tree_edges[e][0]
        seen = {start}
        stack = [start]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return seen

    def search(chosen, cost, banned):
        nonlocal best_cost, best_set
        clock.check()
        e = violated(chosen)
        if e is None:
            if best_cost is None or cost < best_cost:
                best_cost, best_set = cost, sorted(chosen)
            return
        comp = side(chosen, e)
        cands = [i for i in order if i not in banned and i not in chosen
                 and (inst.links[i].u in comp) != (inst.links[i].v in comp)]
        local_ban = set(banned)
        for i in cands:
            c = cost + inst.links[i].cost
            if best_cost is not None and c >= best_cost:
                break
            search(chosen | {i}, c, frozenset(local_ban))
            local_ban.add(i)

    search(frozenset(free), Fraction(0), frozenset())
    if best_cost is None:
        raise InfeasibleInstance("no feasible link set")
    return best_cost, best_set


def exact_nwstap(inst: StapInstance, budget: OracleBudget | None = None):
    """Cheapest Steiner node set making terminals 2-edge-connected."""
    budget = _budget(budget)
    if inst.variant != NODE:
        raise InvalidInstance("exact_nwstap needs a node-weighted instance")
    if any(ln.cost for ln in inst.links):
        inst = subdivide_links(inst)
    steiner = list(inst.steiner)
    if len(steiner) > budget.max_vertices:
        raise BudgetExceeded(f"{len(steiner)} Steiner nodes exceed the limit of {budget.max_vertices}")
    clock = _Clock(budget.time_cap)
    if not nw_coverable(inst):
        raise InfeasibleInstance("terminals are not 2-edge-connected even with every Steiner node")
    subsets = []
    for r in range(len(steiner) + 1):
        for S in combinations(steiner, r):
            subsets.append((sum((inst.node_costs[v] for v in S), Fraction(0)), r, S))
    subsets.sort()
    for cost, _, S in subsets:
        clock.check()
        if check_feasible_nwstap(inst, S):
            return cost, sorted(S)
    raise InfeasibleInstance("no feasible node set")  # unreachable


def exact_hypertap(H, budget: OracleBudget | None = None, edges=None):
    """Cheapest hyper-link family covering every tree edge (or ``edges``).

    Dynamic program over bitmasks of tree edges; returns ``(cost, links)``.
    """
    budget = _budget(budget)
    rt = H.rt
    target = sorted(set(range(len(rt.edges))) if edges is None else set(edges))
    if len(target) > budget.max_edges:
        raise BudgetExceeded(f"{len(target)} tree edges exceed the limit of {budget.max_edges}")
    bit = {e: 1 << i for i, e in enumerate(target)}
    full = (1 << len(target)) - 1
    masks = []
    for ln in H.links:
        m = 0
        for e in H.coverage(ln):
            m |= bit.get(e, 0)
        if m:
            masks.append((m, ln))
    best = {0: (Fraction(0), ())}
    # relax in order of increasing cost; every state is reached once per link
    frontier = [0]
    while frontier:
        nxt = []
        for s in frontier:
            cost, used = best[s]
            for m, ln in masks:
                t = s | m
                if t == s:
                    continue
                c = cost + ln.cost
                cur = best.get(t)
                if cur is None or c < cur[0]:
                    best[t] = (c, used + (ln,))
                    nxt.append(t)
        frontier = sorted(set(nxt))
    if full not in best:
        raise InfeasibleInstance("hyper-links do not cover every tree edge")
    cost, used = best[full]
    return cost, sorted(used, key=lambda ln: ln.id)


def exact_kthin_maximizer(rho, H, U, k: int, budget: OracleBudget | None = None, links=None):
    """Best ``rho * c(drop) - c(Z)`` over k-thin ``Z`` by full enumeration.

    Ties go to fewer links, then to smaller ids.  Returns ``(Z, slack)``.
    """
    budget = _budget(budget)
    rho = Fraction(rho)
    pool = sorted(H.links if links is None else links, key=lambda ln: ln.id)
    if len(pool) > budget.max_subsets:
        raise BudgetExceeded(f"{len(pool)} hyper-links exceed the limit of {budget.max_subsets}")
    ups = list(getattr(U, "uplinks", U))
    rt = H.rt
    eidx = {e: i for i, e in enumerate(range(len(rt.edges)))}
    cov_mask = []
    touched = []
    for ln in pool:
        m = 0
        for e in H.coverage(ln):
            m |= 1 << eidx[e]
        cov_mask.append(m)
        touched.append(rt.edge_vertices(H.coverage(ln)))
    up_masks = []
    for u in ups:
        m = 0
        for e in u.path:
            m |= 1 << eidx[e]
        up_masks.append((m, u.cost))
    drop_cache: dict[int, Fraction] = {}

    def dropped(mask):
        got = drop_cache.get(mask)
        if got is None:
            got = drop_cache[mask] = sum((c for m, c in up_masks if m & ~mask == 0), Fraction(0))
        return got

    load: dict[str, int] = {}
    best = [Fraction(0), ()]

    def walk(i, chosen, mask, cost):
        val = rho * dropped(mask) - cost
        key = (-val, len(chosen), chosen)
        if key < (-best[0], len(best[1]), best[1]):
            best[0], best[1] = val, chosen
        for j in range(i, len(pool)):
            vs = touched[j]
            if any(load.get(v, 0) >= k for v in vs):
                continue
            for v in vs:
                load[v] = load.get(v, 0) + 1
            walk(j + 1, chosen + (pool[j].id,), mask | cov_mask[j], cost + pool[j].cost)
            for v in vs:
                load[v] -= 1

    walk(0, (), 0, Fraction(0))
    by_id = {ln.id: ln for ln in pool}
    return [by_id[i] for i in best[1]], best[0]


def _bellman_ford_node(inst, h, prices):
    price = {v: (Fraction(0) if v in inst.terminals else prices.get(v, Fraction(0))) for v in inst.vertices}
    D = {h: Fraction(0)}
    arcs = []
    for ln in inst.links:
        arcs.append((ln.u, ln.v))
        arcs.append((ln.v, ln.u))
    for _ in range(len(inst.vertices)):
        changed = False
        for x, y in arcs:
            if x in D and y != h:
                nd = D[x] + price[y]
                if y not in D or nd < D[y]:
                    D[y] = nd
                    changed = True
        if not changed:
            break
    return {v: (d - price[v] if v != h else Fraction(0)) for v, d in D.items()}


def exact_min_ratio_pseudo_spider(state, inst: StapInstance, rt, budget: OracleBudget | None = None):
    """Minimum cost per newly covered edge over every head and foot set.

    Returns ``(head, feet, ratio)``; legs are exact node-weighted shortest
    paths and are paid for separately.
    """
    budget = _budget(budget)
    terms = sorted(inst.terminals)
    if len(terms) > budget.max_terminals:
        raise BudgetExceeded(f"{len(terms)} terminals exceed the limit of {budget.max_terminals}")
    prices = {v: (Fraction(0) if v in state.S else c) for v, c in inst.node_costs.items()}
    U = frozenset(state.U)
    best = None
    for h in inst.steiner:
        dist = _bellman_ford_node(inst, h, prices)
        feet = [t for t in terms if t in dist]
        for r in range(2, len(feet) + 1):
            for P in combinations(feet, r):
                covered = len(U & rt.cover(P))
                if not covered:
                    continue
                cost = prices.get(h, Fraction(0)) + sum(dist[t] for t in P)
                key = (cost / covered, cost, h, P)
                if best is None or key < best:
                    best = key
    if best is None:
        raise InfeasibleInstance("no pseudo-spider covers an uncovered tree edge")
    ratio, _, h, P = best
    return h, frozenset(P), ratio
