"""Hyper-links: terminal subsets joined by a cheapest Steiner component."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb, isinf

from .instance import BudgetExceeded, EDGE, InvalidInstance, StapInstance
from .io import ParseError, fmt_cost
from .rooted import RootedTree
from .steiner import SteinerTable


@dataclass(frozen=True)
class HyperLink:
    id: int
    terminals: frozenset
    cost: Fraction
    realization: frozenset = frozenset()  # link indices of the completed instance


@dataclass
class HyperTapInstance:
    rt: RootedTree
    links: tuple[HyperLink, ...]
    gamma: int
    _cover: dict = field(default_factory=dict, repr=False)

    def coverage(self, link: HyperLink) -> frozenset:
        got = self._cover.get(link.terminals)
        if got is None:
            got = self._cover[link.terminals] = coverage(self.rt, link)
        return got


def apex(rt: RootedTree, link) -> str:
    terms = link.terminals if isinstance(link, HyperLink) else link
    if not terms:
        raise ValueError("apex of an empty hyper-link")
    return rt.lca_many(sorted(terms))


def coverage(rt: RootedTree, link) -> frozenset:
    terms = link.terminals if isinstance(link, HyperLink) else link
    if not terms:
        raise ValueError("coverage of an empty hyper-link")
    return rt.cover(terms)


def touched_vertices(rt: RootedTree, link) -> frozenset:
    return rt.edge_vertices(coverage(rt, link))


def is_k_thin(rt: RootedTree, links, k: int) -> bool:
    """Every tree vertex lies in the coverage of at most ``k`` of ``links``."""
    load = Counter()
    for ln in links:
        load.update(touched_vertices(rt, ln))
    return all(n <= k for n in load.values())


def build_gamma_restricted(inst: StapInstance, rt: RootedTree, gamma: int, max_subsets: int = 200_000) -> HyperTapInstance:
    """One hyper-link per terminal subset of size 2..gamma that can be joined.

    The joining tree for a subset may not pass through terminals outside it.
    """
    if inst.variant != EDGE:
        raise InvalidInstance("hyper-links are built for edge-weighted instances")
    if gamma < 2:
        raise ValueError("gamma must be at least 2")
    terms = sorted(inst.terminals)
    gamma = min(gamma, len(terms))
    count = sum(comb(len(terms), i) for i in range(2, gamma + 1))
    if count > max_subsets:
        raise BudgetExceeded(
            f"gamma={gamma} needs {count} terminal subsets (limit {max_subsets}); use a smaller gamma"
        )
    edges = [(ln.u, ln.v, ln.cost) for ln in inst.links]
    table = SteinerTable(inst.vertices, edges, terms, max_size=gamma, exclusive=True)
    out = []
    for size in range(2, gamma + 1):
        for subset in combinations(terms, size):
            tree = table.tree(subset)
            if isinf(tree.cost):
                continue
            out.append(HyperLink(len(out), frozenset(subset), tree.cost, tree.edges))
    return HyperTapInstance(rt, tuple(out), gamma)


def format_hypertap(inst: StapInstance, H: HyperTapInstance) -> str:
    lines = ["hypertap 1", f"root {H.rt.root}"]
    for a, b in H.rt.edges:
        lines.append(f"tree {a} {b}")
    for ln in H.links:
        lines.append(f"hyperlink {fmt_cost(ln.cost)} " + " ".join(sorted(ln.terminals)))
        for i in sorted(ln.realization):
            e = inst.links[i]
            lines.append(f"realization {e.u} {e.v} {fmt_cost(e.cost)}")
    return "\n".join(lines) + "\n"


def parse_hypertap(text: str) -> HyperTapInstance:
    root, tree, links = None, [], []
    for lineno, raw in enumerate(text.splitlines(), 1):
        tok = raw.split("#", 1)[0].split()
        if not tok:
            continue
        if tok[0] == "hypertap":
            continue
        if tok[0] == "root" and len(tok) == 2:
            root = tok[1]
        elif tok[0] == "tree" and len(tok) == 3:
            tree.append((tok[1], tok[2]))
        elif tok[0] == "hyperlink" and len(tok) >= 4:
            links.append(HyperLink(len(links), frozenset(tok[2:]), Fraction(tok[1])))
        elif tok[0] == "realization":
            continue
        else:
            raise ParseError(f"line {lineno}: unknown directive {raw.strip()!r}")
    verts = {x for e in tree for x in e} or ({root} if root else set())
    if root is None:
        raise ParseError("hypertap dump has no root line")
    rt = RootedTree(verts, tree, root)
    gamma = max((len(ln.terminals) for ln in links), default=2)
    return HyperTapInstance(rt, tuple(links), gamma)
