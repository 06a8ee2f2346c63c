"""Rooted view of the tree to augment.

Tree edges are identified by their index in ``StapInstance.tree_edges``;
internally every edge is also keyed by its lower (child) endpoint.
"""

from __future__ import annotations

from .instance import InvalidInstance


class RootedTree:
    def __init__(self, vertices, edges, root):
        vertices = sorted(vertices)
        if root not in vertices:
            raise InvalidInstance(f"root {root!r} is not a tree vertex")
        self.root = root
        self.edges = tuple(tuple(e) for e in edges)
        nbrs = {v: [] for v in vertices}
        for i, (a, b) in enumerate(self.edges):
            nbrs[a].append((b, i))
            nbrs[b].append((a, i))
        self.parent: dict[str, str] = {}
        self.depth = {root: 0}
        self.children: dict[str, list[str]] = {v: [] for v in vertices}
        self.edge_of: dict[str, int] = {}  # child vertex -> edge id
        self.child_of: dict[int, str] = {}  # edge id -> child vertex
        self.preorder: list[str] = []
        self.tin: dict[str, int] = {}
        self.tout: dict[str, int] = {}
        stack = [(root, False)]
        clock = 0
        while stack:
            v, leaving = stack.pop()
            if leaving:
                self.tout[v] = clock
                continue
            self.tin[v] = clock
            clock += 1
            self.preorder.append(v)
            stack.append((v, True))
            kids = sorted((w, i) for w, i in nbrs[v] if w != self.parent.get(v))
            for w, i in kids:
                if w in self.depth:
                    raise InvalidInstance("tree_edges not acyclic")
                self.parent[w] = v
                self.depth[w] = self.depth[v] + 1
                self.edge_of[w] = i
                self.child_of[i] = w
                self.children[v].append(w)
            for w, _ in reversed(kids):
                stack.append((w, False))
        if len(self.preorder) != len(vertices):
            raise InvalidInstance("tree_edges not connected")
        self.vertices = tuple(self.preorder)
        levels = max(1, max(self.depth.values()).bit_length())
        self._up = [{v: self.parent.get(v, v) for v in self.vertices}]
        for _ in range(levels - 1):
            prev = self._up[-1]
            self._up.append({v: prev[prev[v]] for v in self.vertices})

    @property
    def postorder(self) -> list[str]:
        return list(reversed(self.preorder))

    def is_ancestor(self, a, b) -> bool:
        """True iff ``a`` is an ancestor of ``b`` (a vertex is its own ancestor)."""
        return self.tin[a] <= self.tin[b] and self.tout[b] <= self.tout[a]

    def lca(self, a, b):
        if a not in self.depth or b not in self.depth:
            raise KeyError(f"unknown vertex {a if a not in self.depth else b!r}")
        if self.is_ancestor(a, b):
            return a
        if self.is_ancestor(b, a):
            return b
        for table in reversed(self._up):
            if not self.is_ancestor(table[a], b):
                a = table[a]
        return self.parent[a]

    def lca_many(self, vertices):
        it = iter(vertices)
        try:
            acc = next(it)
        except StopIteration:
            raise ValueError("lca of an empty vertex set") from None
        for v in it:
            acc = self.lca(acc, v)
        return acc

    def path_vertices(self, a, b) -> list[str]:
        c = self.lca(a, b)
        up = [a]
        while up[-1] != c:
            up.append(self.parent[up[-1]])
        down = [b]
        while down[-1] != c:
            down.append(self.parent[down[-1]])
        return up + down[-2::-1]

    def tree_path(self, a, b) -> list[int]:
        """Edge ids of the a-b tree path, in order from a to b."""
        verts = self.path_vertices(a, b)
        out = []
        for x, y in zip(verts, verts[1:]):
            out.append(self.edge_of[x] if self.parent.get(x) == y else self.edge_of[y])
        return out

    def vertical_edges(self, bottom, top) -> list[int]:
        out = []
        v = bottom
        while v != top:
            out.append(self.edge_of[v])
            v = self.parent[v]
        return out

    def subtree(self, v) -> list[str]:
        lo, hi = self.tin[v], self.tout[v]
        return [w for w in self.vertices if lo <= self.tin[w] < hi]

    def cover(self, terminals) -> frozenset:
        """Edges of the minimal subtree spanning ``terminals``."""
        terminals = list(terminals)
        if len(terminals) <= 1:
            return frozenset()
        top = self.lca_many(terminals)
        out = set()
        for a in terminals:
            while a != top:
                e = self.edge_of[a]
                if e in out:
                    break
                out.add(e)
                a = self.parent[a]
        return frozenset(out)

    def edge_vertices(self, edges) -> frozenset:
        out = set()
        for e in edges:
            out.update(self.edges[e])
        return frozenset(out)
