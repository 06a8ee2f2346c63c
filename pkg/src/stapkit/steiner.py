"""Exact Steiner trees by the Dreyfus-Wagner subset dynamic program."""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations


@dataclass(frozen=True)
class SteinerTree:
    cost: Fraction | float
    edges: frozenset  # indices into the edge list handed to the solver


class SteinerTable:
    """Optimal trees for every terminal subset up to a given size.

    ``edges`` is a list of ``(u, v, cost)``.  If ``exclusive`` is set, a
    terminal may only appear in the tree for a subset that contains it,
    except as the free endpoint of a partial tree.
    """

    def __init__(self, vertices, edges, terminals, max_size=None, exclusive=False):
        self.vertices = sorted(set(vertices))
        self.edges = list(edges)
        self.terminals = list(terminals)
        missing = [t for t in self.terminals if t not in set(self.vertices)]
        if missing:
            raise ValueError(f"terminals not in graph: {missing}")
        p = len(self.terminals)
        self.max_size = p if max_size is None else min(max_size, p)
        self.exclusive = exclusive
        self._bit = {t: 1 << i for i, t in enumerate(self.terminals)}
        self._adj = {v: [] for v in self.vertices}
        for i, (u, v, c) in enumerate(self.edges):
            self._adj[u].append((v, c, i))
            self._adj[v].append((u, c, i))
        self.dp: dict[int, dict] = {}
        self.bp: dict[int, dict] = {}
        for size in range(1, self.max_size + 1):
            for combo in combinations(range(p), size):
                mask = 0
                for i in combo:
                    mask |= 1 << i
                self._fill(mask)

    def _internal_ok(self, v, mask) -> bool:
        if not self.exclusive:
            return True
        bit = self._bit.get(v)
        return bit is None or bool(bit & mask)

    def _fill(self, mask):
        dp, bp = {}, {}
        if mask & (mask - 1) == 0:
            t = self.terminals[mask.bit_length() - 1]
            dp[t] = Fraction(0)
            bp[t] = ("base",)
        else:
            low = mask & -mask
            rest = mask ^ low
            for v in self.vertices:
                if not self._internal_ok(v, mask):
                    continue
                best = None
                # submasks A of mask that contain the lowest bit, A != mask
                sub = rest
                while True:
                    a = sub | low
                    if a != mask:
                        b = mask ^ a
                        ca = self.dp[a].get(v)
                        cb = self.dp[b].get(v)
                        if ca is not None and cb is not None:
                            val = ca + cb
                            if best is None or val < best:
                                best = val
                                bp[v] = ("merge", a, b)
                    if sub == 0:
                        break
                    sub = (sub - 1) & rest
                if best is not None:
                    dp[v] = best
        heap = [(c, v) for v, c in dp.items()]
        heapq.heapify(heap)
        done = set()
        while heap:
            d, x = heapq.heappop(heap)
            if x in done or d != dp[x]:
                continue
            done.add(x)
            if not self._internal_ok(x, mask):
                continue
            for y, c, i in self._adj[x]:
                nd = d + c
                if y not in done and (y not in dp or nd < dp[y]):
                    dp[y] = nd
                    bp[y] = ("edge", x, i)
                    heapq.heappush(heap, (nd, y))
        self.dp[mask] = dp
        self.bp[mask] = bp

    def mask_of(self, subset) -> int:
        m = 0
        for t in subset:
            m |= self._bit[t]
        return m

    def tree(self, subset) -> SteinerTree:
        mask = self.mask_of(subset)
        if mask not in self.dp:
            raise ValueError("subset larger than the table's max_size")
        anchor = self.terminals[mask.bit_length() - 1]
        cost = self.dp[mask].get(anchor)
        if cost is None:
            return SteinerTree(math.inf, frozenset())
        out: set[int] = set()
        stack = [(mask, anchor)]
        while stack:
            m, v = stack.pop()
            step = self.bp[m][v]
            if step[0] == "merge":
                stack.append((step[1], v))
                stack.append((step[2], v))
            elif step[0] == "edge":
                out.add(step[2])
                stack.append((m, step[1]))
        return SteinerTree(cost, frozenset(out))


def dreyfus_wagner(edges, terminals, vertices=None) -> SteinerTree:
    """Minimum-cost tree connecting ``terminals`` in the graph ``edges``.

    Returns infinite cost when the terminals are not mutually reachable.
    """
    terminals = list(dict.fromkeys(terminals))
    if vertices is None:
        vertices = {x for u, v, _ in edges for x in (u, v)} | set(terminals)
    vs = set(vertices)
    for t in terminals:
        if t not in vs:
            raise ValueError(f"terminal {t!r} not in graph")
    if len(terminals) <= 1:
        return SteinerTree(Fraction(0), frozenset())
    edges = [(u, v, Fraction(c)) for u, v, c in edges]
    return SteinerTable(vertices, edges, terminals).tree(terminals)
