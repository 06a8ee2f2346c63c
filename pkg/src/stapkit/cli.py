"""Command line entry point: ``stapkit <command> ...``."""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

from .instance import EDGE, NODE, StapError, root_tree, validate
from .io import fmt_cost, format_instance, parse_instance, read_instance

CLI_GAMMA_MAX = 3


def _num(c):
    return fmt_cost(c) if isinstance(c, Fraction) else c


def _emit(report: dict, out):
    text = json.dumps(report, indent=2, sort_keys=True, default=_num)
    if out in (None, "-"):
        print(text)
    else:
        Path(out).write_text(text + "\n", encoding="utf-8")


def _int_or_theory(value):
    if value == "theory":
        return value
    try:
        n = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError("expected an integer or 'theory'") from None
    return n


def _stats(inst):
    return {
        "variant": inst.variant,
        "terminals": len(inst.terminals),
        "steiner": len(inst.steiner),
        "tree_edges": len(inst.tree_edges),
        "links": len(inst.links),
    }


def cmd_solve_stap(args):
    from .greedy import epsilon_to_params, local_greedy
    from .hyperlinks import build_gamma_restricted, format_hypertap
    from .instance import complete
    from .oracles import exact_stap
    from .uplinks import initial_uplink_solution

    inst = read_instance(args.file)
    theory = args.theory
    gamma = None if args.gamma in (None, "theory") else args.gamma
    k = None if args.k in (None, "theory") else args.k
    params = epsilon_to_params(args.epsilon, gamma_max=CLI_GAMMA_MAX, theory=theory)
    if args.gamma == "theory":
        gamma = params.gamma_theory
    if args.k == "theory":
        k = params.k_theory
    sol = local_greedy(inst, args.epsilon, gamma=gamma, k=k, theory=theory, root=args.root,
                       gamma_max=CLI_GAMMA_MAX)
    if args.dump_uplinks or args.dump_hyperlinks:
        rt = root_tree(inst, args.root)
        comp = complete(inst, rt)
        if args.dump_uplinks:
            lines = [f"uplink {u.bottom} {u.top} {fmt_cost(u.cost)}" for u in initial_uplink_solution(comp, rt).uplinks]
            Path(args.dump_uplinks).write_text("\n".join(lines) + "\n", encoding="utf-8")
        if args.dump_hyperlinks:
            H = build_gamma_restricted(comp, rt, sol.params.gamma)
            Path(args.dump_hyperlinks).write_text(format_hypertap(comp, H), encoding="utf-8")
    p = sol.params
    report = {
        "instance": _stats(inst),
        "params": {
            "epsilon": p.epsilon, "epsilon_prime": p.epsilon_prime, "gamma": p.gamma, "k": p.k,
            "gamma_theory": p.gamma_theory, "k_theory": p.k_theory,
            "mode": "theory-faithful" if p.theory_faithful else "capped",
        },
        "root": sol.root,
        "initial_uplink_cost": sol.initial_cost,
        "iterations": [
            {"chosen": [sorted(c) for c in it.chosen], "cost": it.cost, "ratio": it.ratio,
             "dropped": [list(d) for d in it.dropped], "dropped_cost": it.dropped_cost}
            for it in sol.iterations
        ],
        "hyperlink_cost": sol.cost,
        "cost": sol.link_cost,
        "links": [[inst.links[i].u, inst.links[i].v, inst.links[i].cost] for i in sol.links],
    }
    if args.oracle:
        opt, _ = exact_stap(inst)
        report["oracle_cost"] = opt
        report["ratio"] = float(sol.link_cost / opt) if opt else None
    _emit(report, args.json)
    return 0


def cmd_solve_nwstap(args):
    from .nwgreedy import greedy_nwstap
    from .oracles import exact_nwstap

    inst = read_instance(args.file)
    sol = greedy_nwstap(inst, root=args.root)
    report = {
        "instance": _stats(inst),
        "iterations": [
            {"head": it.head, "feet": it.feet, "ratio": it.ratio, "spider_cost": it.spider_cost,
             "paid": it.paid, "newly_covered": it.newly_covered}
            for it in sol.iterations
        ],
        "pruned": sol.pruned,
        "nodes": sol.nodes,
        "cost": sol.cost,
    }
    if args.oracle:
        opt, _ = exact_nwstap(inst)
        report["oracle_cost"] = opt
        report["ratio"] = float(sol.cost / opt) if opt else None
    _emit(report, args.json)
    return 0


def cmd_oracle(args):
    from . import oracles
    from .instance import complete

    text = Path(args.file).read_text(encoding="utf-8")
    if args.problem == "stap":
        inst = parse_instance(text)
        cost, links = oracles.exact_stap(inst)
        report = {"cost": cost, "links": [[inst.links[i].u, inst.links[i].v, inst.links[i].cost] for i in links]}
    elif args.problem == "nwstap":
        inst = parse_instance(text)
        cost, nodes = oracles.exact_nwstap(inst)
        report = {"cost": cost, "nodes": nodes}
    elif args.problem == "hypertap":
        from .hyperlinks import build_gamma_restricted, parse_hypertap

        if text.lstrip().startswith("hypertap"):
            H = parse_hypertap(text)
        else:
            inst = parse_instance(text)
            rt = root_tree(inst, args.root)
            H = build_gamma_restricted(complete(inst, rt), rt, args.gamma or len(inst.terminals))
        cost, chosen = oracles.exact_hypertap(H)
        report = {"cost": cost, "hyperlinks": [{"terminals": sorted(ln.terminals), "cost": ln.cost} for ln in chosen]}
    else:
        from .nwgreedy import NwState, uncovered_edges

        inst = parse_instance(text)
        rt = root_tree(inst, args.root)
        state = NwState(U=uncovered_edges(inst, rt, ()))
        if state.U:
            head, feet, ratio = oracles.exact_min_ratio_pseudo_spider(state, inst, rt)
            report = {"head": head, "feet": sorted(feet), "ratio": ratio, "uncovered": len(state.U)}
        else:
            report = {"head": None, "feet": [], "ratio": None, "uncovered": 0}
    _emit(report, args.json)
    return 0


def cmd_gen(args):
    from .generate import GenSpec, generate

    seed = int(os.environ.get("STAPKIT_SEED", args.seed))
    spec = GenSpec(family=args.family, terminals=args.terminals, steiner=args.steiner, density=args.density,
                   costs=args.costs, seed=seed, variant=args.variant, max_cost=args.max_cost,
                   max_links=args.max_links)
    text = format_instance(generate(spec))
    if args.out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(args.out).write_text(text, encoding="utf-8")
    return 0


def cmd_bench(args):
    from .bench import bench

    report = bench(args.files, algorithms=args.algorithm or None, oracle=args.oracle,
                   epsilon=args.epsilon, jobs=args.jobs)
    if args.csv:
        Path(args.csv).write_text(report.to_csv(), encoding="utf-8")
    if args.json:
        Path(args.json).write_text(report.to_json() + "\n", encoding="utf-8")
    if not args.csv and not args.json:
        sys.stdout.write(report.to_csv())
    for msg in report.failures:
        print(f"FAIL {msg}", file=sys.stderr)
    return 1 if report.failures else 0


def cmd_validate(args):
    inst = read_instance(args.file, subdivide=False)
    rep = validate(inst)
    if rep.ok:
        print("ok")
        return 0
    for v in rep.violations:
        print(v)
    return 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="stapkit", description="Steiner tree augmentation solvers and oracles.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve-stap", help="approximate an edge-weighted instance")
    p.add_argument("file")
    p.add_argument("--epsilon", type=Fraction, default=Fraction(1))
    p.add_argument("--gamma", type=_int_or_theory)
    p.add_argument("--k", type=_int_or_theory)
    p.add_argument("--theory", action="store_true", help="lift the caps on gamma and k")
    p.add_argument("--root")
    p.add_argument("--json", metavar="OUT", help="write the report here instead of stdout")
    p.add_argument("--oracle", action="store_true", help="also solve exactly and report the ratio")
    p.add_argument("--dump-uplinks", metavar="OUT")
    p.add_argument("--dump-hyperlinks", metavar="OUT")
    p.set_defaults(run=cmd_solve_stap)

    p = sub.add_parser("solve-nwstap", help="approximate a node-weighted instance")
    p.add_argument("file")
    p.add_argument("--root")
    p.add_argument("--json", metavar="OUT")
    p.add_argument("--oracle", action="store_true")
    p.set_defaults(run=cmd_solve_nwstap)

    p = sub.add_parser("oracle", help="exact solvers for small instances")
    p.add_argument("problem", choices=("stap", "nwstap", "hypertap", "spider"))
    p.add_argument("file")
    p.add_argument("--gamma", type=int)
    p.add_argument("--root")
    p.add_argument("--json", metavar="OUT")
    p.set_defaults(run=cmd_oracle)

    p = sub.add_parser("gen", help="generate a random feasible instance")
    p.add_argument("--family", default="random-tree", choices=("random-tree", "star", "caterpillar", "path"))
    p.add_argument("--terminals", type=int, default=6)
    p.add_argument("--steiner", type=int, default=2)
    p.add_argument("--density", type=float, default=0.3)
    p.add_argument("--costs", default="uniform-int", choices=("uniform-int", "uniform-rational"))
    p.add_argument("--variant", default=EDGE, choices=(EDGE, NODE))
    p.add_argument("--max-cost", type=int, default=10)
    p.add_argument("--max-links", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", "-o")
    p.set_defaults(run=cmd_gen)

    p = sub.add_parser("bench", help="run solvers over instance files")
    p.add_argument("files", nargs="*")
    p.add_argument("--algorithm", action="append", choices=("stap-greedy", "uplink", "nw-greedy"))
    p.add_argument("--oracle", action="store_true")
    p.add_argument("--epsilon", type=Fraction, default=Fraction(1))
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--csv", metavar="OUT")
    p.add_argument("--json", metavar="OUT")
    p.set_defaults(run=cmd_bench)

    p = sub.add_parser("validate", help="check an instance file")
    p.add_argument("file")
    p.set_defaults(run=cmd_validate)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.run(args)
    except (StapError, ValueError, OSError) as exc:
        print(f"stapkit: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
