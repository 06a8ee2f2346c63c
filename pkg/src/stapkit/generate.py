"""Seeded random instance families."""

from __future__ import annotations

import random
from dataclasses import dataclass, replace
from fractions import Fraction
from itertools import combinations

from .instance import EDGE, NODE, StapError, StapInstance, make_instance

FAMILIES = ("random-tree", "star", "caterpillar", "path")
COSTS = ("uniform-int", "uniform-rational")


@dataclass(frozen=True)
class GenSpec:
    family: str = "random-tree"
    terminals: int = 6
    steiner: int = 2
    density: float = 0.3  # fraction of vertex pairs that get a link
    costs: str = "uniform-int"
    seed: int = 0
    variant: str = EDGE
    max_cost: int = 10
    max_links: int | None = None
    retries: int = 200

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        if self.costs not in COSTS:
            raise ValueError(f"unknown cost distribution {self.costs!r}")
        if self.variant not in (EDGE, NODE):
            raise ValueError(f"unknown variant {self.variant!r}")
        if self.terminals < 2:
            raise ValueError("need at least two terminals")
        if self.steiner < 0 or not 0 <= self.density <= 1 or self.max_cost < 1:
            raise ValueError("bad steiner count, density or max_cost")


def _tree(family, names, rng):
    n = len(names)
    if family == "path":
        return [(names[i], names[i + 1]) for i in range(n - 1)]
    if family == "star":
        return [(names[0], names[i]) for i in range(1, n)]
    if family == "caterpillar":
        spine = max(1, (n + 1) // 2)
        edges = [(names[i], names[i + 1]) for i in range(spine - 1)]
        edges += [(names[rng.randrange(spine)], names[i]) for i in range(spine, n)]
        return edges
    return [(names[rng.randrange(i)], names[i]) for i in range(1, n)]


def _cost(spec, rng):
    if spec.costs == "uniform-int":
        return Fraction(rng.randint(1, spec.max_cost))
    den = rng.randint(1, 4)
    return Fraction(rng.randint(1, spec.max_cost * den), den)


def _feasible(inst):
    from .oracles import check_feasible_stap, nw_coverable

    if inst.variant == NODE:
        return nw_coverable(inst)
    return check_feasible_stap(inst, range(len(inst.links)))


def generate(spec: GenSpec) -> StapInstance:
    """Deterministic feasible instance for ``spec``; relinks until feasible."""
    rng = random.Random(spec.seed)
    terms = [f"t{i}" for i in range(spec.terminals)]
    steiner = [f"s{i}" for i in range(spec.steiner)]
    tree = _tree(spec.family, terms, rng)
    pairs = list(combinations(terms + steiner, 2))
    if spec.variant == NODE and steiner:
        # free terminal-terminal links would settle most edges for nothing
        pairs = [p for p in pairs if p[0] in steiner or p[1] in steiner]
    want = max(1, round(spec.density * len(pairs)))
    if spec.max_links is not None:
        want = min(want, spec.max_links)
    node_costs = {s: _cost(spec, rng) for s in steiner} if spec.variant == NODE else {}
    for _ in range(spec.retries):
        picked = rng.sample(pairs, want)
        if spec.variant == NODE:
            links = [(a, b) for a, b in picked]
        else:
            links = [(a, b, _cost(spec, rng)) for a, b in picked]
        inst = make_instance(terms, tree, links, steiner=steiner, variant=spec.variant, node_costs=node_costs)
        if _feasible(inst):
            return inst
        # densify slowly so sparse specs still terminate
        if spec.max_links is None or want < spec.max_links:
            want = min(want + 1, len(pairs))
    raise StapError(f"no feasible instance after {spec.retries} tries; raise the density")


def with_seed(spec: GenSpec, seed: int) -> GenSpec:
    return replace(spec, seed=seed)
