import random
from collections import deque

import pytest

from stapkit.rooted import RootedTree

from conftest import random_tree_edges


def test_path_depths():
    rt = RootedTree("abc", [("a", "b"), ("b", "c")], "a")
    assert rt.depth == {"a": 0, "b": 1, "c": 2}
    assert rt.lca("b", "c") == "b"
    assert rt.lca("c", "c") == "c"
    assert rt.tree_path("a", "a") == []
    ab, bc = rt.edge_of["b"], rt.edge_of["c"]
    assert rt.tree_path("a", "c") == [ab, bc]


def test_star_depths():
    rt = RootedTree("sxyz", [("s", "x"), ("s", "y"), ("s", "z")], "s")
    assert all(rt.depth[v] == 1 for v in "xyz")


def test_unknown_vertex():
    rt = RootedTree("ab", [("a", "b")], "a")
    with pytest.raises(KeyError):
        rt.lca("a", "q")


def _naive_lca(rt, a, b):
    up = set()
    x = a
    while True:
        up.add(x)
        if x == rt.root:
            break
        x = rt.parent[x]
    x = b
    while x not in up:
        x = rt.parent[x]
    return x


def _bfs_len(edges, a, b):
    adj = {}
    for u, v in edges:
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)
    dist = {a: 0}
    q = deque([a])
    while q:
        x = q.popleft()
        for y in adj.get(x, []):
            if y not in dist:
                dist[y] = dist[x] + 1
                q.append(y)
    return dist[b]


def _prune_cover(edges, keep):
    edges = set(map(frozenset, edges))
    while True:
        deg = {}
        for e in edges:
            for x in e:
                deg[x] = deg.get(x, 0) + 1
        leaves = {x for x, d in deg.items() if d == 1 and x not in keep}
        if not leaves:
            return edges
        edges = {e for e in edges if not e & leaves}


@pytest.mark.parametrize("seed", range(30))
def test_random_tree_services(seed):
    rng = random.Random(seed)
    names, edges = random_tree_edges(rng, rng.randint(1, 14))
    root = rng.choice(names)
    rt = RootedTree(names, edges, root)
    assert {frozenset((v, rt.parent[v])) for v in names if v != root} == set(map(frozenset, edges))
    for _ in range(20):
        a, b = rng.choice(names), rng.choice(names)
        c = rt.lca(a, b)
        assert c == _naive_lca(rt, a, b)
        path = rt.tree_path(a, b)
        assert len(path) == rt.depth[a] + rt.depth[b] - 2 * rt.depth[c] == _bfs_len(edges, a, b)
        assert list(reversed(rt.tree_path(b, a))) == path
        A = rng.sample(names, rng.randint(1, len(names)))
        got = {frozenset(rt.edges[e]) for e in rt.cover(A)}
        want = _prune_cover(edges, set(A)) if len(A) > 1 else set()
        assert got == want
