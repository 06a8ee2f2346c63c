"""Local greedy for edge-weighted Steiner tree augmentation.

Start from an up-link cover in which every tree edge is covered exactly once,
then repeatedly buy the k-thin set of hyper-links with the best cost per unit
of up-link cost it makes redundant.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass, field
from fractions import Fraction

from .hyperlinks import HyperLink, HyperTapInstance, build_gamma_restricted
from .instance import EDGE, InvalidInstance, StapError, StapInstance, complete, expand_solution, require_valid, root_tree, to_cost
from .uplinks import UpLink, UpLinkSolution, enumerate_uplinks, optimal_uplink_solution, shorten_exact_cover

LN2 = math.log(2)
DEFAULT_RHO_TOLERANCE = Fraction(1, 10**9)


@dataclass(frozen=True)
class GreedyParams:
    epsilon: Fraction
    epsilon_prime: float
    gamma_theory: int
    k_theory: int
    gamma: int
    k: int
    rho_tolerance: Fraction = DEFAULT_RHO_TOLERANCE

    @property
    def gamma_capped(self) -> bool:
        return self.gamma < self.gamma_theory

    @property
    def k_capped(self) -> bool:
        return self.k < self.k_theory

    @property
    def theory_faithful(self) -> bool:
        return not (self.gamma_capped or self.k_capped)


def epsilon_to_params(epsilon, gamma_max=4, k_max=3, theory=False, gamma=None, k=None,
                      rho_tolerance=DEFAULT_RHO_TOLERANCE) -> GreedyParams:
    """Derive (gamma, k) from epsilon.

    Without ``theory`` the values are capped at ``gamma_max``/``k_max``;
    explicit ``gamma``/``k`` override both.
    """
    eps = to_cost(epsilon)
    if eps <= 0:
        raise ValueError("epsilon must be positive")
    half = float(eps) / 2
    eps_prime = half / (1 + LN2 + half)
    gamma_theory = 2 ** math.ceil(1 / eps_prime)
    k_theory = math.ceil(Fraction(4) / eps)
    if gamma is None:
        gamma = gamma_theory if theory else min(gamma_theory, gamma_max)
    if k is None:
        k = k_theory if theory else min(k_theory, k_max)
    if gamma < 2 or k < 1:
        raise ValueError("need gamma >= 2 and k >= 1")
    return GreedyParams(eps, eps_prime, gamma_theory, k_theory, int(gamma), int(k), to_cost(rho_tolerance))


def _covered(H: HyperTapInstance, Z) -> set:
    out = set()
    for ln in Z:
        out |= H.coverage(ln)
    return out


def drop_set(U, Z, H: HyperTapInstance) -> list[UpLink]:
    """Up-links whose whole path lies inside the combined coverage of ``Z``."""
    ups = U.uplinks if isinstance(U, UpLinkSolution) else U
    cov = _covered(H, Z)
    return [u for u in ups if cov.issuperset(u.path)]


def slack(rho, Z, U, H: HyperTapInstance) -> Fraction:
    rho = to_cost(rho)
    dropped = sum((u.cost for u in drop_set(U, Z, H)), Fraction(0))
    return rho * dropped - sum((ln.cost for ln in Z), Fraction(0))


def _relevant_links(H, links, U_edges, dominate):
    """Drop hyper-links that can never help a slack maximizer."""
    best: dict[frozenset, HyperLink] = {}
    for ln in links:
        cov = H.coverage(ln)
        if not cov & U_edges:
            continue
        cur = best.get(cov)
        if cur is None or (ln.cost, ln.id) < (cur.cost, cur.id):
            best[cov] = ln
    kept = sorted(best.values(), key=lambda ln: ln.id)
    if not dominate:
        return kept
    useful = {ln.id: H.coverage(ln) & U_edges for ln in kept}

    def beats(o, ln):
        mine, theirs = useful[ln.id], useful[o.id]
        if o.id == ln.id or not theirs >= mine or o.cost > ln.cost:
            return False
        return theirs != mine or o.cost < ln.cost or o.id < ln.id

    return [ln for ln in kept if not any(beats(o, ln) for o in kept)]


def best_kthin_for_rho(rho, H: HyperTapInstance, U, k: int, links=None):
    """Maximize ``rho * c(drop_U(Z)) - c(Z)`` over k-thin ``Z``.

    Returns ``(Z, slack)``.  ``U`` must have pairwise edge-disjoint paths.
    """
    rho = to_cost(rho)
    rt = H.rt
    ups = list(U.uplinks if isinstance(U, UpLinkSolution) else U)
    through: dict[str, UpLink] = {}
    for u in ups:
        for e in u.path:
            c = rt.child_of[e]
            if c in through:
                raise StapError("up-link paths are not pairwise disjoint")
            through[c] = u
    U_edges = frozenset(rt.edge_of[c] for c in through)
    n_edges = len(rt.vertices) - 1
    # a minimal maximizer has at most |E(T)| members, so thinness is then void
    counting = k < n_edges
    pool = _relevant_links(H, H.links if links is None else links, U_edges, dominate=not counting)
    verts = {ln.id: tuple(sorted(rt.edge_vertices(H.coverage(ln)))) for ln in pool}
    by_apex: dict[str, list[HyperLink]] = {}
    for ln in pool:
        top = rt.lca_many(sorted(ln.terminals))
        by_apex.setdefault(top, []).append(ln)
    tin, tout = rt.tin, rt.tout

    def restrict(profile, c):
        lo, hi = tin[c], tout[c]
        return tuple(p for p in profile if lo <= tin[p[0]] < hi)

    memo: dict = {}
    NEG = None

    def better(a, b):
        # (value, cost, Z); larger value, then smaller cost
        if b is NEG:
            return a is not NEG
        if a is NEG:
            return False
        return a[0] > b[0] or (a[0] == b[0] and a[1] < b[1])

    def solve(v, profile, plus):
        key = (v, profile, plus)
        if key in memo:
            return memo[key]
        states = {profile: (Fraction(0), ())}
        for ln in by_apex.get(v, ()):
            grown = dict(states)
            for prof, (cost, Z) in states.items():
                cnt = dict(prof)
                ok = True
                for w in verts[ln.id]:
                    n = cnt.get(w, 0) + 1
                    if counting:
                        if n > k:
                            ok = False
                            break
                        cnt[w] = n
                    else:
                        cnt[w] = 1
                if not ok:
                    continue
                nk = tuple(sorted(cnt.items()))
                nc = cost + ln.cost
                if nk not in grown or nc < grown[nk][0]:
                    grown[nk] = (nc, Z + (ln.id,))
            states = grown
        u_here = through.get(v)
        best = NEG
        for prof, (cost, Z) in states.items():
            total, spent, chosen = -cost, cost, Z
            for c in rt.children[v]:
                sigma = restrict(prof, c)
                covered = any(w == c for w, _ in sigma)
                u = through.get(c)
                if u is None:
                    r = solve(c, sigma, False)
                elif u.top == v:
                    r = solve(c, sigma, False)
                    if covered:
                        r_plus = solve(c, sigma, True)
                        if r_plus is not NEG:
                            r_plus = (r_plus[0] + rho * u.cost, r_plus[1], r_plus[2])
                            if better(r_plus, r):
                                r = r_plus
                else:
                    assert u is u_here
                    if plus:
                        r = solve(c, sigma, True) if covered else NEG
                    else:
                        r = solve(c, sigma, False)
                if r is NEG:
                    total = None
                    break
                total += r[0]
                spent += r[1]
                chosen = chosen + r[2]
            if total is None:
                continue
            cand = (total, spent, chosen)
            if better(cand, best):
                best = cand
        memo[key] = best
        return best

    limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(limit, 4 * len(rt.vertices) + 1000))
    try:
        value, _, ids = solve(rt.root, (), False)
    finally:
        sys.setrecursionlimit(limit)
    by_id = {ln.id: ln for ln in pool}
    Z = sorted((by_id[i] for i in set(ids)), key=lambda ln: ln.id)
    return Z, value


def _ratio(Z, dropped):
    cz = sum((ln.cost for ln in Z), Fraction(0))
    cd = sum((u.cost for u in dropped), Fraction(0))
    return cz / cd


def min_ratio_kthin(H: HyperTapInstance, U, k: int, rho_tolerance=DEFAULT_RHO_TOLERANCE):
    """k-thin ``Z`` with (near-)minimum ``c(Z) / c(drop_U(Z))`` and nonempty drop.

    Parametric search on the slack maximizer: each improving maximizer has a
    strictly smaller ratio, and the search stops once no positive slack
    remains (exact) or the ratio improves by less than ``rho_tolerance``.
    """
    ups = list(U.uplinks if isinstance(U, UpLinkSolution) else U)
    if not ups:
        raise StapError("no up-links left to drop")
    pair = {ln.terminals: ln for ln in H.links if len(ln.terminals) == 2}
    fallback = {}
    for u in ups:
        ln = pair.get(frozenset((u.bottom, u.top)))
        if ln is None or ln.cost > u.cost:
            raise StapError(f"no hyper-link {u.bottom}-{u.top} at most as expensive as its up-link")
        fallback[u.key()] = ln
    for u in ups:
        if u.cost == 0:
            # zero-cost drop: take it immediately
            return [fallback[u.key()]], Fraction(0)
    best_Z, rho = None, None
    for u in ups:
        Z = [fallback[u.key()]]
        r = _ratio(Z, drop_set(ups, Z, H))
        if rho is None or r < rho:
            best_Z, rho = Z, r
    while rho > 0:
        Z, value = best_kthin_for_rho(rho, H, ups, k)
        if value <= 0:
            break
        dropped = drop_set(ups, Z, H)
        assert dropped, "positive slack needs a nonempty drop"
        r = _ratio(Z, dropped)
        assert r < rho
        done = rho - r < rho_tolerance
        best_Z, rho = Z, r
        if done:
            break
    return best_Z, rho


@dataclass
class IterationRecord:
    chosen: list[frozenset]
    cost: Fraction
    ratio: Fraction
    dropped_cost: Fraction
    dropped: list[tuple[str, str]]


@dataclass
class StapSolution:
    cost: Fraction  # sum of accepted hyper-link costs
    hyperlinks: list[HyperLink]
    links: list[int]  # input link indices of the expanded solution
    link_cost: Fraction  # cost of the expanded input link set
    initial_uplinks: UpLinkSolution
    params: GreedyParams
    root: str
    iterations: list[IterationRecord] = field(default_factory=list)

    @property
    def initial_cost(self) -> Fraction:
        return self.initial_uplinks.total_cost


def local_greedy(inst: StapInstance, epsilon=1, gamma=None, k=None, theory=False, root=None,
                 gamma_max=4, k_max=3, max_subsets=200_000, rho_tolerance=DEFAULT_RHO_TOLERANCE) -> StapSolution:
    from .oracles import check_feasible_stap

    require_valid(inst)
    if inst.variant != EDGE:
        raise InvalidInstance("local greedy needs an edge-weighted instance")
    params = epsilon_to_params(epsilon, gamma_max, k_max, theory, gamma, k, rho_tolerance)
    rt = root_tree(inst, root)
    comp = complete(inst, rt)
    ups = enumerate_uplinks(comp, rt)
    start = shorten_exact_cover(optimal_uplink_solution(ups, rt), rt, ups)
    H = build_gamma_restricted(comp, rt, params.gamma, max_subsets)
    U = list(start.uplinks)
    F: dict[int, HyperLink] = {}
    log = []
    while U:
        Z, ratio = min_ratio_kthin(H, U, params.k, params.rho_tolerance)
        dropped = drop_set(U, Z, H)
        if not dropped:
            raise StapError("greedy step dropped nothing")
        for ln in Z:
            F[ln.id] = ln
        gone = {id(u) for u in dropped}
        U = [u for u in U if id(u) not in gone]
        log.append(IterationRecord(
            chosen=[ln.terminals for ln in Z],
            cost=sum((ln.cost for ln in Z), Fraction(0)),
            ratio=ratio,
            dropped_cost=sum((u.cost for u in dropped), Fraction(0)),
            dropped=[u.key() for u in dropped],
        ))
    chosen = sorted(F.values(), key=lambda ln: ln.id)
    used = set()
    for ln in chosen:
        used.update(ln.realization)
    links = sorted(set(expand_solution(comp, sorted(used))))
    if not check_feasible_stap(inst, links):
        raise StapError("expanded greedy solution is infeasible")
    return StapSolution(
        cost=sum((ln.cost for ln in chosen), Fraction(0)),
        hyperlinks=chosen,
        links=links,
        link_cost=sum((inst.links[i].cost for i in links), Fraction(0)),
        initial_uplinks=start,
        params=params,
        root=rt.root,
        iterations=log,
    )
