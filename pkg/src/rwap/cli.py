"""Command line entry point wiring all modules together."""

from __future__ import annotations

import argparse
import json
import sys

from . import bench as bench_mod
from .anneal import AnnealConfig, anneal, decode_result
from .conflicts import build_conflict_sets, build_strong_groups, count_constraints
from .gen import generate, synth_topology
from .heuristic import RsConfig, rs_heur
from .instance import Solution, load_instance, report_to_dict, save_instance, verify_feasible
from .ip import build_ip, export_lp
from .oracle import ENUMERATION_CAP, branch_and_bound, brute_force_ip
from .qubo import build_qubo, export_qubo, rho_base
from .reduce import MssGraph, mss_to_rwap
from .weights import beta_base, compute_omega


def _weights_for(instance, alpha, beta):
    if beta is not None:
        return alpha, beta
    w = beta_base(instance, alpha)
    return w.alpha, w.beta


def _cmd_gen(args) -> int:
    if args.topology.startswith("synth:"):
        nodes_s, deg_s = args.topology[len("synth:"):].split(",")
        topo = synth_topology(int(nodes_s), float(deg_s), seed=args.seed)
    else:
        # either a bare {nodes, links} document or a full instance file
        from .instance import Network

        with open(args.topology, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
        topo = Network(node_count=int(doc["nodes"]), links=tuple((int(t), int(h)) for t, h in doc["links"]))
    inst = generate(topo, args.wavelengths, args.requests, args.paths, args.seed)
    save_instance(inst, args.output)
    print(f"wrote {args.output}: {inst.n_vars} variables, {len(inst.requests)} requests")
    return 0


def _cmd_conflicts(args) -> int:
    inst = load_instance(args.instance)
    conflicts = build_conflict_sets(inst)
    strong = build_strong_groups(inst)
    counts = count_constraints(inst, conflicts, strong)
    data = {
        "c1": len(conflicts.c1),
        "c2": len(conflicts.c2),
        "c3": len(conflicts.c3),
        "c4": len(conflicts.c4),
        "variables": counts.variables,
        "base_constraints": counts.base_constraints,
        "strong_constraints": counts.strong_constraints,
        "base_cons_per_var": round(counts.base_ratio, 2),
        "strong_cons_per_var": round(counts.strong_ratio, 2),
        "strong_cons_per_var_counting_singleton_groups": round(counts.strong_ratio_all_nonempty, 2),
    }
    if args.format == "json":
        print(json.dumps(data, indent=1))
    else:
        for key, value in data.items():
            print(f"{key}: {value}")
    return 0


def _cmd_weights(args) -> int:
    inst = load_instance(args.instance)
    w = beta_base(inst, args.alpha)
    data = {"alpha": w.alpha, "m_value": w.m_value, "beta_base": w.beta_base}
    if args.tight:
        report = compute_omega(inst)
        data["omega_eq"] = str(report.omega_eq) if report.omega_eq is not None else None
        data["beta_tight"] = report.beta_tight
    if args.format == "json":
        print(json.dumps(data, indent=1))
    else:
        for key, value in data.items():
            print(f"{key}: {value}")
    return 0


def _cmd_export_lp(args) -> int:
    inst = load_instance(args.instance)
    alpha, beta = _weights_for(inst, args.alpha, args.beta)
    if args.model == "base":
        structure = build_conflict_sets(inst)
    else:
        structure = build_strong_groups(inst)
    model = build_ip(inst, structure, alpha, beta, kind=args.model)
    export_lp(model, args.output)
    print(f"wrote {args.output}: {len(model.var_names)} binaries, {len(model.constraints)} constraints")
    return 0


def _cmd_export_qubo(args) -> int:
    inst = load_instance(args.instance)
    alpha, beta = _weights_for(inst, args.alpha, args.beta)
    conflicts = build_conflict_sets(inst)
    rho = args.rho if args.rho is not None else beta + 100
    model = build_qubo(inst, conflicts, alpha, beta, rho)
    export_qubo(model, args.output)
    bound = rho_base(inst, alpha, beta)
    print(f"wrote {args.output}: n={model.n}, rho={rho} (separation bound {bound.rho})")
    return 0


def _cmd_solve(args) -> int:
    inst = load_instance(args.instance)
    conflicts = build_conflict_sets(inst)
    alpha, beta = _weights_for(inst, args.alpha, args.beta)
    if args.method == "da":
        rho = args.rho if args.rho is not None else beta + 100
        config = AnnealConfig(
            iterations=args.iterations,
            replicas=args.replicas,
            seed=args.seed,
            mode=args.mode,
        )
        result = anneal(build_qubo(inst, conflicts, alpha, beta, rho), config)
        report = decode_result(inst, conflicts, alpha, beta, result, config.iterations)
        if args.trace:
            with open(args.trace, "w", encoding="utf-8") as fh:
                fh.write("iteration,best_energy\n")
                for iteration, energy in result.trace:
                    fh.write(f"{iteration},{energy}\n")
    elif args.method == "rs":
        report = rs_heur(inst, conflicts, RsConfig(args.budget, args.seed), alpha, beta)
    elif args.method == "exact":
        report = brute_force_ip(inst, conflicts, alpha, beta, cap=ENUMERATION_CAP)
    elif args.method == "bnb":
        strong = build_strong_groups(inst)
        report = branch_and_bound(inst, strong, alpha, beta, args.node_limit, conflicts)
    else:
        raise SystemExit(f"unknown method {args.method!r}")
    payload = report_to_dict(report)
    text = json.dumps(payload, indent=1)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    print(text)
    return 0


def _cmd_verify(args) -> int:
    inst = load_instance(args.instance)
    with open(args.solution, "r", encoding="utf-8") as fh:
        payload = json.load(fh)
    solution = Solution.from_string(payload["bits"])
    conflicts = build_conflict_sets(inst)
    verdict = verify_feasible(inst, conflicts, solution)
    if verdict.feasible:
        print("feasible")
        return 0
    for violation in verdict.violations:
        print(f"violation {violation.kind}: {violation.detail}")
    return 1


def _cmd_reduce_mss(args) -> int:
    with open(args.graph, "r", encoding="utf-8") as fh:
        payload = json.load(fh)
    graph = MssGraph(
        node_count=int(payload["nodes"]),
        edges=tuple(tuple(sorted((int(u), int(v)))) for u, v in payload["edges"]),
    )
    inst = mss_to_rwap(graph)
    save_instance(inst, args.output)
    print(f"wrote {args.output}: {inst.n_vars} variables from {graph.node_count} graph nodes")
    return 0


def _cmd_bench(args) -> int:
    methods = args.methods.split(",")
    seeds = [int(s) for s in args.seeds.split(",")] if args.seeds else [0]
    sweep = [int(s) for s in args.rho_sweep.split(",")] if args.rho_sweep else [None]
    tasks = []
    for path in args.instances:
        inst = load_instance(path)
        for method in methods:
            offsets = sweep if method == "da" else [None]
            for offset in offsets:
                for seed in seeds:
                    tasks.append(
                        bench_mod.BenchTask(
                            label=path,
                            instance=inst,
                            method=method,
                            seed=seed,
                            iterations=args.iterations,
                            permutations=args.budget,
                            node_limit=args.node_limit,
                            rho_offset=offset,
                        )
                    )
    rows = bench_mod.run_bench(tasks)
    text = bench_mod.rows_to_csv(rows) if args.format == "csv" else bench_mod.rows_to_json(rows)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        print(text, end="")
    failures = [r for r in rows if r.get("error")]
    return 1 if failures else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rwap", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a random instance")
    p.add_argument("--topology", required=True, help="synth:<nodes>,<avg_out_degree> or an instance JSON file")
    p.add_argument("--wavelengths", type=int, required=True)
    p.add_argument("--requests", type=int, required=True)
    p.add_argument("--paths", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("conflicts", help="print conflict set sizes and cons/vars ratios")
    p.add_argument("instance")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=_cmd_conflicts)

    p = sub.add_parser("weights", help="print derived objective weights")
    p.add_argument("instance")
    p.add_argument("--alpha", type=int, default=1)
    p.add_argument("--tight", action="store_true", help="also enumerate the minimal integer weight")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=_cmd_weights)

    p = sub.add_parser("export-lp", help="write the model in LP format")
    p.add_argument("instance")
    p.add_argument("--model", choices=("base", "strong"), default="base")
    p.add_argument("--alpha", type=int, default=1)
    p.add_argument("--beta", type=int, default=None)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=_cmd_export_lp)

    p = sub.add_parser("export-qubo", help="write the quadratic model in sparse text format")
    p.add_argument("instance")
    p.add_argument("--alpha", type=int, default=1)
    p.add_argument("--beta", type=int, default=None)
    p.add_argument("--rho", type=int, default=None)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=_cmd_export_qubo)

    p = sub.add_parser("solve", help="solve an instance")
    p.add_argument("instance")
    p.add_argument("--method", choices=("da", "rs", "exact", "bnb"), required=True)
    p.add_argument("--alpha", type=int, default=1)
    p.add_argument("--beta", type=int, default=None)
    p.add_argument("--rho", type=int, default=None)
    p.add_argument("--iterations", type=int, default=20000)
    p.add_argument("--replicas", type=int, default=8)
    p.add_argument("--mode", choices=("tempering", "single"), default="tempering")
    p.add_argument("--budget", type=int, default=1000, help="permutations for the rs method")
    p.add_argument("--node-limit", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trace", default=None, help="write iteration,best_energy CSV (da only)")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("verify", help="check a solution file against an instance")
    p.add_argument("instance")
    p.add_argument("solution")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("reduce-mss", help="build an instance from a stable-set graph")
    p.add_argument("graph", help='JSON {"nodes": n, "edges": [[u, v], ...]}')
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=_cmd_reduce_mss)

    p = sub.add_parser("bench", help="run a method/seed grid and emit CSV or JSON")
    p.add_argument("instances", nargs="*")
    p.add_argument("--methods", default="da,rs")
    p.add_argument("--seeds", default="0")
    p.add_argument("--iterations", type=int, default=20000)
    p.add_argument("--budget", type=int, default=1000)
    p.add_argument("--node-limit", type=int, default=None)
    p.add_argument("--rho-sweep", default=None, help="comma list of offsets added to beta for the da method")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=_cmd_bench)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
