"""Line-oriented instance files.

::

    stap 1 edge
    terminal a
    steiner s [cost]
    tree a b
    link a s [cost]

``#`` starts a comment.  Costs are decimals or ``p/q`` rationals.
"""

from __future__ import annotations

from fractions import Fraction
from pathlib import Path

from .instance import EDGE, NODE, StapError, StapInstance, make_instance, subdivide_links, to_cost


class ParseError(StapError):
    pass


def fmt_cost(c: Fraction) -> str:
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _cost(token, lineno):
    try:
        return to_cost(token)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"line {lineno}: bad cost {token!r}") from None


def parse_instance(text: str, subdivide: bool = True) -> StapInstance:
    """Parse instance text.

    In node-weighted mode, links that carry a cost are subdivided unless
    ``subdivide`` is false.
    """
    variant = None
    terminals, steiner, tree, links = [], [], [], []
    node_costs = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        head = tok[0]
        if variant is None:
            if head != "stap" or len(tok) != 3:
                raise ParseError(f"line {lineno}: expected header 'stap <version> <edge|node>'")
            if tok[1] != "1":
                raise ParseError(f"line {lineno}: unsupported version {tok[1]}")
            if tok[2] not in (EDGE, NODE):
                raise ParseError(f"line {lineno}: unknown variant {tok[2]!r}")
            variant = tok[2]
            continue
        if head == "terminal" and len(tok) == 2:
            terminals.append(tok[1])
        elif head == "steiner" and len(tok) in (2, 3):
            steiner.append(tok[1])
            if variant == NODE:
                if len(tok) != 3:
                    raise ParseError(f"line {lineno}: node-weighted steiner node needs a cost")
                node_costs[tok[1]] = _cost(tok[2], lineno)
            elif len(tok) == 3:
                raise ParseError(f"line {lineno}: steiner cost given in edge-weighted mode")
        elif head == "tree" and len(tok) == 3:
            tree.append((tok[1], tok[2]))
        elif head == "link" and len(tok) in (3, 4):
            if variant == EDGE and len(tok) != 4:
                raise ParseError(f"line {lineno}: edge-weighted link needs a cost")
            cost = _cost(tok[3], lineno) if len(tok) == 4 else Fraction(0)
            links.append((tok[1], tok[2], cost))
        else:
            raise ParseError(f"line {lineno}: unknown directive {line!r}")
    if variant is None:
        raise ParseError("empty instance")
    known = set(terminals) | set(steiner)
    for u, v, _ in links:
        for x in (u, v):
            if x not in known:
                raise ParseError(f"link endpoint {x!r} was never declared")
    inst = make_instance(terminals, tree, links, steiner=steiner, variant=variant, node_costs=node_costs)
    if variant == NODE and subdivide and any(ln.cost for ln in inst.links):
        inst = subdivide_links(inst)
    return inst


def read_instance(path, subdivide: bool = True) -> StapInstance:
    return parse_instance(Path(path).read_text(encoding="utf-8"), subdivide=subdivide)


def format_instance(inst: StapInstance) -> str:
    out = [f"stap 1 {inst.variant}"]
    for v in inst.vertices:
        if v in inst.terminals:
            out.append(f"terminal {v}")
    for v in inst.vertices:
        if v not in inst.terminals:
            if inst.variant == NODE:
                out.append(f"steiner {v} {fmt_cost(inst.node_costs[v])}")
            else:
                out.append(f"steiner {v}")
    for a, b in inst.tree_edges:
        out.append(f"tree {a} {b}")
    for ln in inst.links:
        if inst.variant == EDGE or ln.cost:
            out.append(f"link {ln.u} {ln.v} {fmt_cost(ln.cost)}")
        else:
            out.append(f"link {ln.u} {ln.v}")
    return "\n".join(out) + "\n"
