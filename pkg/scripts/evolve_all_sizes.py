#!/usr/bin/env python3
"""Headline experiment: evolve maximally entangling circuits for 3-6 qubits.

For each system size this runs the genetic search with the default
configuration (H and CNOT families) at the circuit length known to suffice,
then prints the best circuit found, its score, and the theoretical ceiling.
The 4-qubit ceiling of 6.5 is unreachable; 5.5 is the known best for that
gate set and length.
"""
import argparse
import time

from entangler import GAConfig, evolve, format_circuit, max_entanglement_bound

# (qubits, circuit length, best score reachable with H+CNOT at that length)
EXPERIMENTS = [
    (3, 3, 1.5),
    (4, 5, 5.5),
    (5, 8, 17.5),
    (6, 13, 60.5),
]


def run(seed: int, generations: int, workers: int) -> None:
    for n, length, reachable in EXPERIMENTS:
        config = GAConfig(n=n, circuit_length=length, max_generations=generations,
                          target_fitness=reachable, rng_seed=seed)
        started = time.monotonic()
        result = evolve(config, workers=workers)
        elapsed = time.monotonic() - started
        bound = max_entanglement_bound(n)
        status = "hit" if result.reached(reachable) else "missed"
        print(f"n={n} L={length}: best {result.best_fitness:.6g} "
              f"(target {reachable}, ceiling {bound}) {status} after "
              f"{result.generations} generations, {result.evaluations} evaluations, {elapsed:.1f}s")
        print(f"  {format_circuit(result.best_circuit)}")


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--gens", type=int, default=500)
    parser.add_argument("--workers", type=int, default=1)
    args = parser.parse_args()
    run(args.seed, args.gens, args.workers)


if __name__ == "__main__":
    main()
