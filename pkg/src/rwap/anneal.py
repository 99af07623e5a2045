"""Annealing solver for the quadratic model.

The search differs from textbook simulated annealing in three ways.  Every
iteration evaluates the energy change of all single-bit flips and accepts one
candidate chosen uniformly at random among the flips passing the Metropolis
test (parallel trial).  When an iteration accepts nothing, an escape offset
is added before the next test and grows with every further rejection,
resetting to zero on the next accepted flip (dynamic offset).  In tempering
mode, replicas run at fixed temperatures from a geometric ladder and
periodically exchange their states between adjacent rungs (replica
exchange); in single mode each replica cools geometrically over iterations
and never exchanges.

Randomness is organised for reproducibility regardless of host parallelism:
every replica owns two substreams derived from (seed, replica), one for the
per-variable acceptance draws and one for the candidate choice, and each
exchange round draws from a stream derived from (seed, round).  Flip i is a
candidate iff u_i < exp(-max(0, delta_i - offset) / T), evaluated as
max(0, delta_i - offset) < -T * log(u_i) to avoid overflow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .conflicts import ConflictSets
from .instance import Instance, PROTECTION, Solution, SolveReport, WORKING, make_report, verify_feasible
from .qubo import QuboModel, build_qubo


@dataclass(frozen=True)
class AnnealConfig:
    iterations: int
    replicas: int = 8
    t_min: float = 1.0
    t_max: float | None = None  # defaults to rho at solve time
    offset_increment: float | None = None  # defaults to max(rho / 100, 1)
    exchange_interval: int = 100
    seed: int = 0
    mode: str = "tempering"  # or "single"

    def __post_init__(self) -> None:
        if self.iterations < 0:
            raise ValueError("iterations must be non-negative")
        if self.replicas < 1:
            raise ValueError("at least one replica is required")
        if self.exchange_interval < 1:
            raise ValueError("exchange_interval must be positive")
        if self.t_min <= 0:
            raise ValueError("temperatures must be positive")
        if self.t_max is not None and self.t_max < self.t_min:
            raise ValueError("t_max must be at least t_min")
        if self.mode not in ("tempering", "single"):
            raise ValueError(f"unknown mode {self.mode!r}")


@dataclass(frozen=True)
class AnnealResult:
    best_bits: tuple[int, ...]
    best_energy: int
    trace: tuple[tuple[int, int], ...]  # (iteration, best-so-far energy)
    accepted_flips: int
    offset_activations: int


def _replica_stream(seed: int, replica: int, purpose: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy=seed, spawn_key=(0, replica, purpose))))


def _exchange_stream(seed: int, round_index: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy=seed, spawn_key=(1, round_index))))


def _ladder(t_max: float, t_min: float, count: int) -> np.ndarray:
    if count == 1:
        return np.array([t_max])
    return np.geomspace(t_max, t_min, count)


def anneal(qubo: QuboModel, config: AnnealConfig) -> AnnealResult:
    n = qubo.n
    if n == 0:
        return AnnealResult(
            best_bits=(),
            best_energy=qubo.constant,
            trace=((0, qubo.constant),),
            accepted_flips=0,
            offset_activations=0,
        )
    reps = config.replicas
    iters = config.iterations
    t_max = float(qubo.rho) if config.t_max is None else config.t_max
    t_max = max(t_max, config.t_min)
    increment = max(qubo.rho / 100.0, 1.0) if config.offset_increment is None else config.offset_increment

    lin = np.array(qubo.linear, dtype=np.int64)
    indptr, indices, data = qubo.adjacency()
    qi, qj, qv = qubo.pair_arrays()

    state = np.zeros((reps, n), dtype=np.int8)
    # all-zero start: delta_i = linear_i; kept in float64 (exact for these
    # magnitudes) so the acceptance comparison avoids per-iteration upcasts
    delta = np.repeat(lin[None, :], reps, axis=0).astype(np.float64)
    energy = np.full(reps, qubo.constant, dtype=np.int64)
    offset = np.zeros(reps)

    if config.mode == "tempering":
        temps = _ladder(t_max, config.t_min, reps)
        schedule = None
    else:
        temps = None
        if iters <= 1:
            schedule = np.full(max(iters, 1), t_max)
        else:
            schedule = np.geomspace(t_max, config.t_min, iters)

    flip_streams = [_replica_stream(config.seed, r, 0) for r in range(reps)]
    choice_streams = [_replica_stream(config.seed, r, 1) for r in range(reps)]

    block = max(8, min(256, 1_500_000 // max(n * reps, 1)))
    thresholds = np.empty((block, reps, n))  # iteration-major: contiguous slices
    choices = np.empty((block, reps))
    gate = np.empty((reps, n))
    candidates = np.empty((reps, n), dtype=bool)
    csum = np.empty((reps, n), dtype=np.int64)

    best_energy = int(qubo.constant)
    best_bits = state[0].copy()
    trace: list[tuple[int, int]] = [(0, best_energy)]
    accepted = 0
    activations = 0
    exchange_round = 0

    for t in range(iters):
        bt = t % block
        if bt == 0:
            with np.errstate(divide="ignore"):
                for r in range(reps):
                    u = flip_streams[r].random((block, n))
                    np.log(u, out=u)
                    thresholds[:, r, :] = u
                    choices[:, r] = choice_streams[r].random(block)
            np.negative(thresholds, out=thresholds)
            if temps is not None:
                thresholds *= temps[None, :, None]
        if schedule is not None:
            np.multiply(thresholds[bt], schedule[t], out=gate)
            np.add(gate, offset[:, None], out=gate)
        else:
            np.add(thresholds[bt], offset[:, None], out=gate)
        np.less(delta, gate, out=candidates)
        np.cumsum(candidates, axis=1, dtype=np.int64, out=csum)

        flipped_any = False
        for r in range(reps):
            m = int(csum[r, -1])
            if m == 0:
                offset[r] += increment
                activations += 1
                continue
            rank = min(int(choices[bt, r] * m), m - 1)
            pick = int(np.searchsorted(csum[r], rank + 1))
            energy[r] += int(delta[r, pick])
            lo, hi = indptr[pick], indptr[pick + 1]
            nb = indices[lo:hi]
            sign = 1 - 2 * int(state[r, pick])
            delta[r, nb] += (1 - 2 * state[r, nb].astype(np.int64)) * data[lo:hi] * sign
            delta[r, pick] = -delta[r, pick]
            state[r, pick] ^= 1
            offset[r] = 0.0
            accepted += 1
            flipped_any = True

        if flipped_any:
            r_min = int(energy.argmin())
            if energy[r_min] < best_energy:
                best_energy = int(energy[r_min])
                best_bits = state[r_min].copy()
                trace.append((t + 1, best_energy))

        if temps is not None and reps > 1 and (t + 1) % config.exchange_interval == 0:
            draws = _exchange_stream(config.seed, exchange_round).random(reps - 1)
            exchange_round += 1
            for k in range(reps - 1):
                arg = (1.0 / temps[k] - 1.0 / temps[k + 1]) * float(energy[k] - energy[k + 1])
                if arg >= 0 or draws[k] < math.exp(arg):
                    state[[k, k + 1]] = state[[k + 1, k]]
                    delta[[k, k + 1]] = delta[[k + 1, k]]
                    energy[[k, k + 1]] = energy[[k + 1, k]]

        if __debug__ and (t + 1) % 1024 == 0:
            s64 = state.astype(np.int64)
            full = qubo.constant + s64 @ lin
            if qv.size:
                full += (s64[:, qi] * s64[:, qj]) @ qv
            assert (full == energy).all(), "incremental energy bookkeeping diverged"

    return AnnealResult(
        best_bits=tuple(int(b) for b in best_bits),
        best_energy=best_energy,
        trace=tuple(trace),
        accepted_flips=accepted,
        offset_activations=activations,
    )


def _clearing_damage(instance: Instance, alpha: int, beta: int, index: int) -> int:
    """Objective increase caused by clearing a set bit."""
    _, kind, _ = instance.var_info(index)
    length = instance.lightpath_at(index).length
    return beta - alpha * length if kind == WORKING else -alpha * length


def repair(instance: Instance, conflict_sets: ConflictSets, bits: list[int], alpha: int, beta: int) -> bool:
    """Greedily clear bits involved in violations, cheapest damage first.

    Returns True when anything was cleared.  Terminates because every pass
    clears one set bit and the all-zero vector is feasible.
    """
    changed = False
    while True:
        verdict = verify_feasible(instance, conflict_sets, bits)
        if verdict.feasible:
            return changed
        involved: set[int] = set()
        for violation in verdict.violations:
            if violation.kind in ("eq2", "eq3"):
                rid = violation.detail[0]
                req = instance.requests[rid]
                for kind, count in ((WORKING, len(req.working)), (PROTECTION, len(req.protection))):
                    for local in range(count):
                        involved.add(instance.var_of(rid, kind, local))
            elif violation.kind == "c1":
                r, w, p = violation.detail
                involved.add(instance.var_of(r, WORKING, w))
                involved.add(instance.var_of(r, PROTECTION, p))
            elif violation.kind == "c2":
                r1, r2, w, p = violation.detail
                involved.add(instance.var_of(r1, WORKING, w))
                involved.add(instance.var_of(r2, PROTECTION, p))
            elif violation.kind == "c3":
                r1, r2, w1, w2 = violation.detail
                involved.add(instance.var_of(r1, WORKING, w1))
                involved.add(instance.var_of(r2, WORKING, w2))
            else:
                r1, r2, p1, p2 = violation.detail
                involved.add(instance.var_of(r1, PROTECTION, p1))
                involved.add(instance.var_of(r2, PROTECTION, p2))
        set_bits = [i for i in sorted(involved) if bits[i]]
        target = min(set_bits, key=lambda i: (_clearing_damage(instance, alpha, beta, i), i))
        bits[target] = 0
        changed = True


def decode_result(
    instance: Instance,
    conflict_sets: ConflictSets,
    alpha: int,
    beta: int,
    result: AnnealResult,
    iterations: int,
) -> SolveReport:
    """Turn the best annealed state into a verified report, repairing and
    flagging it when the raw decode is infeasible."""
    bits = list(result.best_bits)
    repaired = repair(instance, conflict_sets, bits, alpha, beta)
    solution = Solution.from_array(bits)
    return make_report(
        instance,
        conflict_sets,
        solution,
        alpha,
        beta,
        method="da",
        repaired=repaired,
        energy=result.best_energy,
        iterations=iterations,
    )


def solve_rwap_da(
    instance: Instance,
    conflict_sets: ConflictSets,
    alpha: int,
    beta: int,
    rho: int,
    config: AnnealConfig,
    qubo: QuboModel | None = None,
) -> SolveReport:
    """Build the quadratic model, anneal it, decode and verify the result.

    With penalty coefficients below the separation bound the best state can
    decode to an infeasible assignment; in that case a repair sweep clears
    violating bits and the report is flagged."""
    if qubo is None:
        qubo = build_qubo(instance, conflict_sets, alpha, beta, rho)
    result = anneal(qubo, config)
    return decode_result(instance, conflict_sets, alpha, beta, result, config.iterations)
