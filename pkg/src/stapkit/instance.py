"""Problem representation for (node-weighted) Steiner tree augmentation.

An instance is a graph whose vertices are terminals and Steiner nodes, a tree
spanning exactly the terminals, and a list of links (non-tree edges).  Links
produced by the completion transforms remember where they came from so that a
solution on the completed instance can be expanded back to input links.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable, Mapping

EDGE = "edge"
NODE = "node"


class StapError(Exception):
    """Base class for all errors raised by stapkit."""


class InvalidInstance(StapError):
    pass


class InfeasibleInstance(StapError):
    pass


class BudgetExceeded(StapError):
    pass


def to_cost(value) -> Fraction:
    """Exact cost from an int, Fraction, or decimal/rational string."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        return Fraction(str(value))
    return Fraction(value)


@dataclass(frozen=True)
class Link:
    u: str
    v: str
    cost: Fraction
    origin: str = "input"  # input | metric | shadow
    via: tuple[int, ...] = ()  # metric links: input link indices along the path
    parent: int | None = None  # shadow links: index of the shadowed link

    @property
    def ends(self) -> frozenset:
        return frozenset((self.u, self.v))


@dataclass(frozen=True)
class StapInstance:
    vertices: tuple[str, ...]
    terminals: frozenset
    tree_edges: tuple[tuple[str, str], ...]
    links: tuple[Link, ...]
    variant: str = EDGE
    node_costs: Mapping[str, Fraction] = field(default_factory=dict)
    # subdivision node id -> index of the original costed link
    subdivision: Mapping[str, int] = field(default_factory=dict)

    @property
    def steiner(self) -> tuple[str, ...]:
        return tuple(v for v in self.vertices if v not in self.terminals)

    def link_cost_map(self) -> dict[frozenset, tuple[Fraction, int]]:
        """Cheapest link per endpoint pair as (cost, link index)."""
        best: dict[frozenset, tuple[Fraction, int]] = {}
        for i, ln in enumerate(self.links):
            key = ln.ends
            if key not in best or ln.cost < best[key][0]:
                best[key] = (ln.cost, i)
        return best

    def adjacency(self, indices: Iterable[int] | None = None) -> dict[str, list[tuple[str, int]]]:
        """Link adjacency lists ``v -> [(w, link index)]`` over the given links."""
        adj: dict[str, list[tuple[str, int]]] = {v: [] for v in self.vertices}
        if indices is None:
            indices = range(len(self.links))
        for i in indices:
            ln = self.links[i]
            adj[ln.u].append((ln.v, i))
            adj[ln.v].append((ln.u, i))
        return adj


def make_instance(terminals, tree_edges, links, steiner=(), variant=EDGE, node_costs=None) -> StapInstance:
    """Convenience constructor.

    ``links`` holds ``(u, v)`` or ``(u, v, cost)`` tuples; duplicate endpoint
    pairs collapse to the cheapest.
    """
    terminals = [str(t) for t in terminals]
    steiner = [str(s) for s in steiner]
    seen = set()
    vertices = []
    for v in terminals + steiner:
        if v not in seen:
            seen.add(v)
            vertices.append(v)
    for ln in links:
        for v in map(str, ln[:2]):
            if v not in seen:
                seen.add(v)
                vertices.append(v)
    best: dict[frozenset, Link] = {}
    order = []
    for ln in links:
        u, v = str(ln[0]), str(ln[1])
        cost = to_cost(ln[2]) if len(ln) > 2 and ln[2] is not None else Fraction(0)
        key = frozenset((u, v))
        if key not in best:
            order.append(key)
            best[key] = Link(u, v, cost)
        elif cost < best[key].cost:
            best[key] = Link(u, v, cost)
    costs = {str(k): to_cost(c) for k, c in (node_costs or {}).items()}
    return StapInstance(
        vertices=tuple(vertices),
        terminals=frozenset(terminals),
        tree_edges=tuple((str(a), str(b)) for a, b in tree_edges),
        links=tuple(best[k] for k in order),
        variant=variant,
        node_costs=costs,
    )


@dataclass
class ValidationReport:
    ok: bool
    violations: list[str]


def validate(inst: StapInstance) -> ValidationReport:
    found: list[str] = []
    vset = set(inst.vertices)
    if len(vset) != len(inst.vertices):
        found.append("duplicate vertex ids")
    if not inst.terminals:
        found.append("no terminals")
    if not inst.terminals <= vset:
        found.append("terminal not among vertices")
    for a, b in inst.tree_edges:
        if a not in inst.terminals or b not in inst.terminals:
            found.append(f"tree edge {a}-{b} touches a non-terminal")
        if a == b:
            found.append(f"tree edge {a}-{b} is a loop")
    if len(inst.tree_edges) != len(inst.terminals) - 1:
        found.append("tree_edges count is not |R|-1")
    # union-find over the terminals
    parent = {t: t for t in inst.terminals}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    acyclic = True
    for a, b in inst.tree_edges:
        if a not in parent or b not in parent:
            continue
        ra, rb = find(a), find(b)
        if ra == rb:
            acyclic = False
        else:
            parent[ra] = rb
    if not acyclic:
        found.append("tree_edges not acyclic")
    if len({find(t) for t in parent}) > 1:
        found.append("tree_edges not connected")
    for ln in inst.links:
        if ln.u not in vset or ln.v not in vset:
            found.append(f"link {ln.u}-{ln.v} has an unknown endpoint")
        if ln.u == ln.v:
            found.append(f"link {ln.u}-{ln.v} is a loop")
        if ln.cost < 0:
            found.append("negative link cost")
    if inst.variant == NODE:
        for v in inst.steiner:
            if v not in inst.node_costs:
                found.append(f"steiner node {v} has no cost")
        for v, c in inst.node_costs.items():
            if c < 0:
                found.append("negative node cost")
            if v in inst.terminals:
                found.append(f"terminal {v} carries a node cost")
    elif inst.variant != EDGE:
        found.append(f"unknown variant {inst.variant!r}")
    return ValidationReport(ok=not found, violations=found)


def require_valid(inst: StapInstance) -> None:
    report = validate(inst)
    if not report.ok:
        raise InvalidInstance("; ".join(report.violations))


def root_tree(inst: StapInstance, r: str | None = None):
    from .rooted import RootedTree

    if r is None:
        r = min(inst.terminals)
    if r not in inst.terminals:
        raise InvalidInstance(f"root {r!r} is not a terminal")
    return RootedTree(inst.terminals, inst.tree_edges, r)


# -- completion transforms ---------------------------------------------------


def _dijkstra(adj, links, source):
    dist = {source: Fraction(0)}
    pred: dict[str, tuple[str, int]] = {}
    heap = [(Fraction(0), source)]
    done = set()
    while heap:
        d, x = heapq.heappop(heap)
        if x in done:
            continue
        done.add(x)
        for y, i in adj[x]:
            nd = d + links[i].cost
            if y not in done and (y not in dist or nd < dist[y]):
                dist[y] = nd
                pred[y] = (x, i)
                heapq.heappush(heap, (nd, y))
    return dist, pred


def metric_completion(inst: StapInstance) -> StapInstance:
    """Add a direct link for every terminal pair at its shortest-path distance.

    Distances are taken over the input links only, so repeated application
    is a no-op.  A link is added only when it is strictly cheaper than every
    existing link between the same pair.
    """
    if inst.variant != EDGE:
        raise InvalidInstance("metric completion needs an edge-weighted instance")
    base = [i for i, ln in enumerate(inst.links) if ln.origin == "input"]
    adj = inst.adjacency(base)
    best = inst.link_cost_map()
    added: list[Link] = []
    terms = sorted(inst.terminals)
    for a_i, a in enumerate(terms):
        dist, pred = _dijkstra(adj, inst.links, a)
        for b in terms[a_i + 1:]:
            if b not in dist:
                continue
            key = frozenset((a, b))
            if key in best and best[key][0] <= dist[b]:
                continue
            via = []
            x = b
            while x != a:
                x, i = pred[x]
                via.append(i)
            via.reverse()
            added.append(Link(a, b, dist[b], origin="metric", via=tuple(via)))
    return replace(inst, links=inst.links + tuple(added))


def shadow_completion(inst: StapInstance, rt) -> StapInstance:
    """Add every shadow of every terminal-terminal link at the link's cost."""
    best = {key: c for key, (c, _) in inst.link_cost_map().items()}
    added: list[Link] = []
    n0 = len(inst.links)
    for i, ln in enumerate(inst.links):
        if ln.u not in inst.terminals or ln.v not in inst.terminals:
            continue
        path = rt.path_vertices(ln.u, ln.v)
        for x in range(len(path)):
            for y in range(x + 1, len(path)):
                key = frozenset((path[x], path[y]))
                if key == ln.ends:
                    continue
                if key in best and best[key] <= ln.cost:
                    continue
                best[key] = ln.cost
                added.append(Link(path[x], path[y], ln.cost, origin="shadow", parent=i))
    # keep only the final (cheapest) shadow for each pair
    final: dict[frozenset, Link] = {}
    for ln in added:
        final[ln.ends] = ln
    kept = [ln for ln in added if final[ln.ends] is ln]
    assert all(ln.parent < n0 for ln in kept)
    return replace(inst, links=inst.links + tuple(kept))


def complete(inst: StapInstance, rt) -> StapInstance:
    return shadow_completion(metric_completion(inst), rt)


def expand_link(inst: StapInstance, index: int) -> list[int]:
    """Input link indices realizing link ``index`` (a multiset, as a list)."""
    ln = inst.links[index]
    if ln.origin == "input":
        return [index]
    if ln.origin == "metric":
        return list(ln.via)
    return expand_link(inst, ln.parent)


def expand_solution(inst: StapInstance, indices: Iterable[int]) -> list[int]:
    out: list[int] = []
    for i in indices:
        out.extend(expand_link(inst, i))
    return out


def subdivide_links(inst: StapInstance) -> StapInstance:
    """Replace each positive-cost link by a path through a new Steiner node."""
    if inst.variant != NODE:
        raise InvalidInstance("subdivision applies to node-weighted instances")
    taken = set(inst.vertices)
    vertices = list(inst.vertices)
    costs = dict(inst.node_costs)
    back = dict(inst.subdivision)
    links: list[Link] = []
    for i, ln in enumerate(inst.links):
        if ln.cost == 0:
            links.append(ln)
            continue
        m = f"sub{i}"
        while m in taken:
            m += "_"
        taken.add(m)
        vertices.append(m)
        costs[m] = ln.cost
        back[m] = i
        links.append(Link(ln.u, m, Fraction(0)))
        links.append(Link(m, ln.v, Fraction(0)))
    return replace(inst, vertices=tuple(vertices), links=tuple(links), node_costs=costs, subdivision=back)
