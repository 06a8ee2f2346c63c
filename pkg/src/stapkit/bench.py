"""Batch runs over instance files with optional exact comparison."""

from __future__ import annotations

import csv
import io
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction

from .instance import EDGE, StapError, StapInstance, root_tree, subdivide_links
from .io import fmt_cost, read_instance

CSV_VERSION = 1
CSV_COLUMNS = ("instance", "algorithm", "cost", "oracle_cost", "ratio", "iterations", "feasible", "wall_time")
ALGORITHMS = ("stap-greedy", "uplink", "nw-greedy")


@dataclass
class BenchRow:
    instance: str
    algorithm: str
    cost: str
    oracle_cost: str | None
    ratio: float | None
    iterations: int
    feasible: bool
    wall_time: float
    failures: list[str] = field(default_factory=list)


@dataclass
class BenchReport:
    rows: list[BenchRow]

    @property
    def failures(self) -> list[str]:
        return [f"{r.instance}/{r.algorithm}: {msg}" for r in self.rows for msg in r.failures]

    def summary(self) -> dict:
        out = {}
        for algo in sorted({r.algorithm for r in self.rows}):
            ratios = [r.ratio for r in self.rows if r.algorithm == algo and r.ratio is not None]
            out[algo] = {
                "rows": sum(r.algorithm == algo for r in self.rows),
                "with_oracle": len(ratios),
                "max_ratio": max(ratios) if ratios else None,
                "mean_ratio": sum(ratios) / len(ratios) if ratios else None,
            }
        return out

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for r in self.rows:
            w.writerow([r.instance, r.algorithm, r.cost, r.oracle_cost or "",
                        "" if r.ratio is None else f"{r.ratio:.12g}", r.iterations,
                        int(r.feasible), f"{r.wall_time:.6f}"])
        return buf.getvalue()

    def to_json(self, wall_time=True) -> str:
        rows = []
        for r in self.rows:
            d = asdict(r)
            if not wall_time:
                d.pop("wall_time")
            rows.append(d)
        return json.dumps({"version": CSV_VERSION, "rows": rows, "summary": self.summary(),
                           "failures": self.failures}, indent=2, sort_keys=True)


def _oracle_cost(inst: StapInstance, algorithm: str):
    from .instance import BudgetExceeded
    from .oracles import exact_nwstap, exact_stap

    try:
        if algorithm == "nw-greedy":
            return exact_nwstap(inst)[0]
        return exact_stap(inst)[0]
    except BudgetExceeded:
        return None


def run_one(name: str, inst: StapInstance, algorithm: str, oracle=False, epsilon=1) -> BenchRow:
    from .greedy import local_greedy
    from .nwgreedy import greedy_nwstap
    from .oracles import check_feasible_nwstap, check_feasible_stap

    failures = []
    t0 = time.perf_counter()
    if algorithm == "stap-greedy":
        sol = local_greedy(inst, epsilon)
        cost, iterations = sol.link_cost, len(sol.iterations)
        feasible = check_feasible_stap(inst, sol.links)
    elif algorithm == "uplink":
        from .instance import complete, expand_solution
        from .uplinks import initial_uplink_solution

        rt = root_tree(inst)
        comp = complete(inst, rt)
        ups = initial_uplink_solution(comp, rt)
        links = sorted(set(expand_solution(comp, [u.link for u in ups.uplinks])))
        cost, iterations = ups.total_cost, 0
        feasible = check_feasible_stap(inst, links)
    elif algorithm == "nw-greedy":
        if any(ln.cost for ln in inst.links):
            inst = subdivide_links(inst)
        sol = greedy_nwstap(inst)
        cost, iterations = sol.cost, len(sol.iterations)
        feasible = check_feasible_nwstap(inst, sol.nodes)
        if iterations > len(inst.tree_edges):
            failures.append("more iterations than tree edges")
    else:
        raise ValueError(f"unknown algorithm {algorithm!r}")
    wall = time.perf_counter() - t0
    if not feasible:
        failures.append("solution is infeasible")
    opt = _oracle_cost(inst, algorithm) if oracle else None
    ratio = None
    if opt is not None:
        if opt > 0:
            ratio = float(Fraction(cost) / opt)
            if ratio < 1 - 1e-12:
                failures.append(f"ratio {ratio} below 1")
            if algorithm in ("stap-greedy", "uplink") and Fraction(cost) > 2 * opt:
                failures.append(f"ratio {ratio} above 2")
            if algorithm == "nw-greedy":
                env = 8 * (1 + math.log(max(1, len(inst.tree_edges)))) ** 2
                if ratio > env:
                    failures.append(f"ratio {ratio} above {env}")
        elif cost != 0:
            failures.append("optimum is 0 but the solution costs more")
    return BenchRow(name, algorithm, fmt_cost(cost), None if opt is None else fmt_cost(opt),
                    ratio, iterations, feasible, wall, failures)


def _task(args):
    name, inst, algorithm, oracle, epsilon = args
    try:
        return run_one(name, inst, algorithm, oracle, epsilon)
    except StapError as exc:
        return BenchRow(name, algorithm, "", None, None, 0, False, 0.0, [f"error: {exc}"])


def bench(instances, algorithms=None, oracle=False, epsilon=1, jobs=1) -> BenchReport:
    """``instances`` holds paths or ``(name, StapInstance)`` pairs."""
    items = []
    for entry in instances:
        if isinstance(entry, tuple):
            items.append(entry)
        else:
            items.append((str(entry), read_instance(entry)))
    tasks = []
    for name, inst in items:
        algos = algorithms or (("stap-greedy",) if inst.variant == EDGE else ("nw-greedy",))
        for algo in algos:
            if (algo == "nw-greedy") != (inst.variant != EDGE):
                continue
            tasks.append((name, inst, algo, oracle, epsilon))
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_task, tasks))
    else:
        rows = [_task(t) for t in tasks]
    return BenchReport(rows)
