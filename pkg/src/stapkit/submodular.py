"""Budgeted maximization of a monotone submodular set function."""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations


def sviridenko_max(items, f, budget, seed_size=3) -> frozenset:
    """Partial enumeration plus density greedy under a knapsack constraint.

    ``items`` is a sequence of ``(id, cost)`` and ``f`` maps a frozenset of
    ids to a number with ``f(frozenset()) == 0``.  Every feasible set of
    fewer than ``seed_size`` items is a candidate; every feasible seed of
    exactly ``seed_size`` items is extended greedily by marginal value per
    unit cost, skipping items that no longer fit.
    """
    budget = Fraction(budget)
    cost = {}
    for i, c in items:
        if c <= budget:
            cost[i] = Fraction(c)
    ids = sorted(cost)
    cache: dict[frozenset, object] = {}

    def value(s):
        got = cache.get(s)
        if got is None:
            got = cache[s] = f(s)
        return got

    best = frozenset()
    best_val = value(best)

    def consider(s):
        nonlocal best, best_val
        v = value(s)
        if v > best_val or (v == best_val and sum(cost[i] for i in s) < sum(cost[i] for i in best)):
            best, best_val = s, v

    top = min(seed_size, len(ids))
    for r in range(1, top + 1):
        for seed in combinations(ids, r):
            spent = sum(cost[i] for i in seed)
            if spent > budget:
                continue
            chosen = frozenset(seed)
            consider(chosen)
            if r < seed_size:
                continue
            rest = [i for i in ids if i not in chosen]
            cur = value(chosen)
            while rest:
                pick, pick_key = None, None
                for i in rest:
                    gain = value(chosen | {i}) - cur
                    if gain <= 0:
                        key = (0, Fraction(0))
                    elif cost[i] == 0:
                        key = (1, Fraction(gain))
                    else:
                        key = (0, Fraction(gain) / cost[i])
                    if pick_key is None or key > pick_key:
                        pick, pick_key = i, key
                if pick_key == (0, 0):
                    break
                rest.remove(pick)
                if spent + cost[pick] <= budget:
                    chosen = chosen | {pick}
                    spent += cost[pick]
                    cur = value(chosen)
            consider(chosen)
    return best
