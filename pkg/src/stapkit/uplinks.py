"""Up-link starting solution: optimal vertical cover, then exactly-once shortening."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

from .instance import InfeasibleInstance, StapError, StapInstance
from .rooted import RootedTree


@dataclass(frozen=True)
class UpLink:
    bottom: str
    top: str
    cost: Fraction
    link: int  # index into the completed instance's links
    path: tuple[int, ...]  # tree edge ids from bottom to top

    def key(self):
        return (self.bottom, self.top)


@dataclass(frozen=True)
class UpLinkSolution:
    uplinks: tuple[UpLink, ...]

    @property
    def total_cost(self) -> Fraction:
        return sum((u.cost for u in self.uplinks), Fraction(0))

    def multiplicity(self) -> Counter:
        mult = Counter()
        for u in self.uplinks:
            mult.update(u.path)
        return mult


def enumerate_uplinks(inst: StapInstance, rt: RootedTree) -> list[UpLink]:
    """Cheapest link for every ancestor-descendant terminal pair."""
    best: dict[tuple[str, str], UpLink] = {}
    for i, ln in enumerate(inst.links):
        a, b = ln.u, ln.v
        if a not in rt.depth or b not in rt.depth or a == b:
            continue
        if rt.is_ancestor(a, b):
            top, bottom = a, b
        elif rt.is_ancestor(b, a):
            top, bottom = b, a
        else:
            continue
        cur = best.get((bottom, top))
        if cur is None or ln.cost < cur.cost:
            best[(bottom, top)] = UpLink(bottom, top, ln.cost, i, tuple(rt.vertical_edges(bottom, top)))
    return [best[k] for k in sorted(best)]


def _uncoverable_edge(uplinks, rt):
    covered = set()
    for u in uplinks:
        covered.update(u.path)
    for v in rt.vertices:
        if v != rt.root and rt.edge_of[v] not in covered:
            return v, rt.parent[v]
    return None


def optimal_uplink_solution(uplinks, rt: RootedTree) -> UpLinkSolution:
    """Minimum-cost set of up-links covering every tree edge.

    ``f[v, a]`` is the cheapest way to cover the subtree below ``v`` and the
    vertical path from ``v`` up to its ancestor ``a``.  The path above ``v``
    is reached either by one up-link starting at ``v`` or by delegating the
    reach to a single child.
    """
    up_from: dict[str, dict[str, UpLink]] = {}
    for u in uplinks:
        cur = up_from.setdefault(u.bottom, {}).get(u.top)
        if cur is None or u.cost < cur.cost:
            up_from[u.bottom][u.top] = u
    inf = math.inf
    f: dict[tuple[str, str], object] = {}
    how: dict[tuple[str, str], object] = {}
    for v in rt.postorder:
        kids = rt.children[v]
        base = sum((f[c, v] for c in kids), Fraction(0))
        f[v, v] = base
        how[v, v] = None
        ancestors = []
        a = v
        while a != rt.root:
            a = rt.parent[a]
            ancestors.append(a)
        # cheapest up-link from v reaching at or above each ancestor
        reach = {}
        best = None
        mine = up_from.get(v, {})
        for a in reversed(ancestors):
            cand = mine.get(a)
            if cand is not None and (best is None or cand.cost < best.cost):
                best = cand
            reach[a] = best
        for a in ancestors:
            val, choice = inf, None
            if base != inf:
                if reach[a] is not None:
                    val, choice = reach[a].cost + base, reach[a]
                for c in kids:
                    alt = f[c, a] - f[c, v] + base
                    if alt < val:
                        val, choice = alt, c
            f[v, a] = val
            how[v, a] = choice
    if f[rt.root, rt.root] == inf:
        bad = _uncoverable_edge(uplinks, rt)
        raise InfeasibleInstance(f"tree edge {bad[0]}-{bad[1]} cannot be covered by any link")
    chosen = []
    stack = [(rt.root, rt.root)]
    while stack:
        v, a = stack.pop()
        choice = how[v, a]
        for c in rt.children[v]:
            stack.append((c, a) if c == choice else (c, v))
        if isinstance(choice, UpLink):
            chosen.append(choice)
    chosen.sort(key=UpLink.key)
    return UpLinkSolution(tuple(chosen))


def shorten_exact_cover(sol: UpLinkSolution, rt: RootedTree, uplinks) -> UpLinkSolution:
    """Truncate overlapping up-links to shadows so each edge is covered once.

    Edges are swept top-down; at an edge covered m > 1 times, all but one
    covering up-link are cut back to end just below that edge.
    """
    table = {u.key(): u for u in uplinks}
    cur = sorted(sol.uplinks, key=lambda u: (rt.depth[u.top], u.bottom))
    for x in rt.preorder:
        if x == rt.root:
            continue
        px = rt.parent[x]
        idx = [i for i, u in enumerate(cur) if rt.is_ancestor(x, u.bottom) and rt.depth[u.top] < rt.depth[x]]
        if len(idx) <= 1:
            continue
        idx.sort(key=lambda i: (rt.depth[cur[i].top], -cur[i].cost, cur[i].bottom))
        assert all(cur[i].top == px for i in idx[1:]), "edges above were already exact"
        trimmed = []
        for i in idx[1:]:
            u = cur[i]
            if u.bottom == x:
                continue
            short = table.get((u.bottom, x))
            if short is None or short.cost > u.cost:
                raise StapError(f"link set is not shadow-complete: no shadow {u.bottom}-{x}")
            trimmed.append(short)
        drop = set(idx[1:])
        cur = [u for i, u in enumerate(cur) if i not in drop] + trimmed
    cur.sort(key=UpLink.key)
    return UpLinkSolution(tuple(cur))


def initial_uplink_solution(inst: StapInstance, rt: RootedTree) -> UpLinkSolution:
    ups = enumerate_uplinks(inst, rt)
    return shorten_exact_cover(optimal_uplink_solution(ups, rt), rt, ups)
