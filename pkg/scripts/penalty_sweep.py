#!/usr/bin/env python3
"""Penalty-coefficient sensitivity experiment.

Runs the annealer on one instance at a range of penalty offsets above the
grant weight and reports solution quality per coefficient, as a CSV on
stdout.  Useful for studying how penalty magnitude affects annealing
performance on a given instance family.

Example:
    python scripts/penalty_sweep.py --topology synth:19,1.5 --wavelengths 5 \
        --requests 40 --paths 2 --iterations 20000 --seeds 0,1,2
"""

import argparse
import sys
import time

from rwap.anneal import AnnealConfig, solve_rwap_da
from rwap.conflicts import build_conflict_sets
from rwap.gen import generate, synth_topology
from rwap.instance import load_instance
from rwap.qubo import build_qubo, rho_base
from rwap.weights import beta_base


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--instance", help="instance JSON (overrides the generator options)")
    parser.add_argument("--topology", default="synth:19,1.5")
    parser.add_argument("--wavelengths", type=int, default=5)
    parser.add_argument("--requests", type=int, default=40)
    parser.add_argument("--paths", type=int, default=2)
    parser.add_argument("--gen-seed", type=int, default=0)
    parser.add_argument("--offsets", default="100,300,1000,3000,10000")
    parser.add_argument("--iterations", type=int, default=20000)
    parser.add_argument("--replicas", type=int, default=4)
    parser.add_argument("--seeds", default="0,1,2")
    args = parser.parse_args()

    if args.instance:
        inst = load_instance(args.instance)
    else:
        spec = args.topology.removeprefix("synth:")
        nodes, degree = spec.split(",")
        topo = synth_topology(int(nodes), float(degree), seed=args.gen_seed)
        inst = generate(topo, args.wavelengths, args.requests, args.paths, seed=args.gen_seed)
    conflicts = build_conflict_sets(inst)
    weights = beta_base(inst)
    separation = rho_base(inst, weights.alpha, weights.beta).rho
    print(f"# beta={weights.beta} separation_rho={separation} vars={inst.n_vars}", file=sys.stderr)
    print("rho_offset,rho,seed,granted,links,feasible,repaired,energy,wall_s")
    for offset in (int(o) for o in args.offsets.split(",")):
        rho = weights.beta + offset
        qubo = build_qubo(inst, conflicts, weights.alpha, weights.beta, rho)
        for seed in (int(s) for s in args.seeds.split(",")):
            config = AnnealConfig(iterations=args.iterations, replicas=args.replicas, seed=seed)
            started = time.perf_counter()
            report = solve_rwap_da(inst, conflicts, weights.alpha, weights.beta, rho, config, qubo=qubo)
            print(
                f"{offset},{rho},{seed},{report.f_beta},{report.f_alpha},"
                f"{int(report.feasible)},{int(report.repaired)},{report.energy},"
                f"{time.perf_counter() - started:.2f}"
            )
    return 0


if __name__ == "__main__":
    sys.exit(main())
