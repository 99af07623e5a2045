"""Benchmark harness: one CSV row per (instance, method, seed) and
per-method aggregate rows, with optional penalty-coefficient sweeps."""

from __future__ import annotations

import io
import json
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .anneal import AnnealConfig, solve_rwap_da
from .conflicts import build_conflict_sets, build_strong_groups
from .heuristic import RsConfig, rs_heur
from .instance import Instance
from .oracle import ENUMERATION_CAP, branch_and_bound, brute_force_ip
from .weights import beta_base

CSV_VERSION = "rwap-bench-v1"
CSV_COLUMNS = (
    "instance",
    "method",
    "seed",
    "rho",
    "granted",
    "links",
    "links_per_granted",
    "objective",
    "feasible",
    "repaired",
    "budget",
    "wall_time_s",
    "error",
)


@dataclass(frozen=True)
class BenchTask:
    label: str
    instance: Instance
    method: str
    seed: int
    iterations: int
    permutations: int
    node_limit: int | None
    rho_offset: int | None  # rho = beta + offset for the annealer


def worker_count() -> int:
    value = os.environ.get("RWAP_THREADS", "")
    try:
        return max(1, int(value))
    except ValueError:
        return 1


def _run_task(task: BenchTask) -> dict:
    row: dict = {c: "" for c in CSV_COLUMNS}
    row.update(instance=task.label, method=task.method, seed=task.seed)
    started = time.perf_counter()
    try:
        inst = task.instance
        conflicts = build_conflict_sets(inst)
        weights = beta_base(inst)
        alpha, beta = weights.alpha, weights.beta
        if task.method == "da":
            rho = beta + (task.rho_offset if task.rho_offset is not None else 100)
            config = AnnealConfig(iterations=task.iterations, seed=task.seed)
            report = solve_rwap_da(inst, conflicts, alpha, beta, rho, config)
            row["rho"] = rho
            row["budget"] = task.iterations
        elif task.method == "rs":
            report = rs_heur(inst, conflicts, RsConfig(task.permutations, task.seed), alpha, beta)
            row["budget"] = task.permutations
        elif task.method == "exact":
            report = brute_force_ip(inst, conflicts, alpha, beta, cap=ENUMERATION_CAP)
        elif task.method == "bnb":
            strong = build_strong_groups(inst)
            report = branch_and_bound(inst, strong, alpha, beta, task.node_limit, conflicts)
            row["budget"] = task.node_limit if task.node_limit is not None else ""
        else:
            raise ValueError(f"unknown method {task.method!r}")
        row["granted"] = report.f_beta
        row["links"] = report.f_alpha
        row["links_per_granted"] = round(report.f_alpha / report.f_beta, 3) if report.f_beta else ""
        row["objective"] = report.objective
        row["feasible"] = int(report.feasible)
        row["repaired"] = int(report.repaired)
    except Exception as exc:  # a failing row must not kill the run
        row["error"] = f"{type(exc).__name__}: {exc}".replace(",", ";")
    row["wall_time_s"] = round(time.perf_counter() - started, 3)
    return row


def run_bench(tasks: list[BenchTask]) -> list[dict]:
    """Execute all rows (parallel across tasks under RWAP_THREADS) and append
    per-(method, rho) aggregate rows; per-row results are independent of the
    worker count."""
    workers = worker_count()
    if workers == 1:
        rows = [_run_task(t) for t in tasks]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_run_task, tasks))
    aggregates: dict[tuple[str, object], list[dict]] = {}
    for row in rows:
        if row["error"]:
            continue
        aggregates.setdefault((row["method"], row["rho"]), []).append(row)
    agg_rows = []
    for (method, rho), group in sorted(aggregates.items(), key=lambda kv: (kv[0][0], str(kv[0][1]))):
        granted = [r["granted"] for r in group]
        lpg = [r["links_per_granted"] for r in group if r["links_per_granted"] != ""]
        agg = {c: "" for c in CSV_COLUMNS}
        agg.update(
            instance="AGGREGATE",
            method=method,
            rho=rho,
            granted=round(sum(granted) / len(granted), 2),
            links_per_granted=round(sum(lpg) / len(lpg), 2) if lpg else "",
            wall_time_s=round(sum(r["wall_time_s"] for r in group) / len(group), 3),
        )
        agg_rows.append(agg)
    return rows + agg_rows


def rows_to_csv(rows: list[dict]) -> str:
    out = io.StringIO()
    out.write(f"# {CSV_VERSION}: columns fixed, aggregates keyed by instance=AGGREGATE\n")
    out.write(",".join(CSV_COLUMNS) + "\n")
    for row in rows:
        out.write(",".join(str(row[c]) for c in CSV_COLUMNS) + "\n")
    return out.getvalue()


def rows_to_json(rows: list[dict]) -> str:
    return json.dumps(rows, indent=1)
