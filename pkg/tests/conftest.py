import math
import random
from fractions import Fraction
from itertools import combinations

import networkx as nx
import pytest

from stapkit.generate import GenSpec, generate
from stapkit.instance import make_instance

FAMILIES = ("random-tree", "star", "caterpillar", "path")


def random_stap(seed, max_terminals=8, max_steiner=3, max_links=18, density=0.4):
    rng = random.Random(seed)
    spec = GenSpec(
        family=rng.choice(FAMILIES),
        terminals=rng.randint(2, max_terminals),
        steiner=rng.randint(0, max_steiner),
        density=density,
        costs=rng.choice(("uniform-int", "uniform-rational")),
        seed=seed,
        max_links=max_links,
    )
    return generate(spec)


def random_nwstap(seed, max_terminals=6, max_vertices=None, max_steiner=6, density=0.35):
    rng = random.Random(seed)
    r = rng.randint(2, max_terminals)
    top = max_steiner if max_vertices is None else max(1, min(max_steiner, max_vertices - r))
    spec = GenSpec(
        family=rng.choice(FAMILIES),
        terminals=r,
        steiner=rng.randint(1, top),
        density=density,
        costs=rng.choice(("uniform-int", "uniform-rational")),
        seed=seed,
        variant="node",
    )
    return generate(spec)


def random_tree_edges(rng, n):
    names = [f"v{i}" for i in range(n)]
    return names, [(names[rng.randrange(i)], names[i]) for i in range(1, n)]


@pytest.fixture
def path3():
    """Terminals a-b-c in a path with one Steiner node s."""
    return make_instance("abc", [("a", "b"), ("b", "c")], [("a", "s", 1), ("s", "c", 2), ("b", "c", 5)], steiner=["s"])



def brute_steiner(vertices, edges, terminals):
    """Minimum over Steiner-node subsets of the MST of the induced subgraph."""
    others = [v for v in vertices if v not in terminals]
    best = math.inf
    for r in range(len(others) + 1):
        for extra in combinations(others, r):
            keep = set(terminals) | set(extra)
            parent = {v: v for v in keep}

            def find(x):
                while parent[x] != x:
                    x = parent[x]
                return x

            total, joined = Fraction(0), 0
            for u, v, c in sorted((e for e in edges if e[0] in keep and e[1] in keep), key=lambda e: e[2]):
                ru, rv = find(u), find(v)
                if ru != rv:
                    parent[ru] = rv
                    total += c
                    joined += 1
            if joined == len(keep) - 1 and total < best:
                best = total
    return best


def nx_two_edge_connected(inst, S):
    """Independent check: subdivide every edge so parallels survive, then look for bridges."""
    keep = set(inst.terminals) | set(S)
    edges = list(inst.tree_edges) + [(ln.u, ln.v) for ln in inst.links if ln.u in keep and ln.v in keep]
    g = nx.Graph()
    g.add_nodes_from(keep)
    for i, (u, v) in enumerate(edges):
        g.add_edge(u, ("mid", i))
        g.add_edge(("mid", i), v)
    return nx.is_connected(g) and not nx.has_bridges(g)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
