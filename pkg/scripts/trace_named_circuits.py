#!/usr/bin/env python3
"""Dump per-gate entanglement traces of the reference circuits to CSV.

One file per circuit with columns step, gate, total: the data behind the
step-by-step entanglement growth plots (GHZ ladders plus the evolved 4, 5,
and 6-qubit circuits).
"""
import argparse
import csv
from pathlib import Path

from entangler import entanglement_trace, named_circuit

CIRCUITS = [
    "circuit_ghz3", "circuit_ghz4", "circuit_ghz5", "circuit_ghz6",
    "circuit_4a", "circuit_5a", "circuit_6a",
]


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    parser.add_argument("--out-dir", default="traces")
    args = parser.parse_args()
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for name in CIRCUITS:
        circuit = named_circuit(name)
        path = out_dir / f"{name}.csv"
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["step", "gate", "total"])
            for step, value in entanglement_trace(circuit):
                gate = "" if step == 0 else str(circuit.gates[step - 1])
                writer.writerow([step, gate, f"{value:.12g}"])
        print(f"wrote {path}")


if __name__ == "__main__":
    main()
