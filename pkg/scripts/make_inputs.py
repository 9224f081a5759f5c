"""Write a set of example input files for the ``corrmap`` command line tool.

Usage: python scripts/make_inputs.py [OUTDIR]
"""
import json
import sys
from pathlib import Path

import numpy as np

from corrmap import serialize as ser
from corrmap.assignment import product_assignment
from corrmap.collision import CollisionConfig
from corrmap.rand import random_density, random_unitary
from corrmap.reveal import witness_assignment
from corrmap.tensor_core import DimSpec, proj, swap


def omega_example():
    """|00><00| + 0.1 (|01><10| + |10><01|), smallest eigenvalue -0.1."""
    omega = np.zeros((4, 4), dtype=complex)
    omega[0, 0] = 1.0
    omega[1, 2] = omega[2, 1] = 0.1
    return omega


def main(outdir="inputs"):
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(0)
    qubit = DimSpec(2, 2, 1)
    bell = np.zeros(4)
    bell[[0, 3]] = 1 / np.sqrt(2)
    cnot = np.eye(4)[[0, 1, 3, 2]]
    omega = omega_example()
    correlated, _ = witness_assignment(omega)

    files = {
        "product_assignment.json": ser.assignment_to_obj(product_assignment(random_density(2, rng), qubit)),
        "correlated_assignment.json": ser.assignment_to_obj(correlated, "basis"),
        "unitary4.json": ser.matrix_to_obj(random_unitary(4, rng)),
        "unitary8.json": ser.matrix_to_obj(random_unitary(8, rng)),
        "omega.json": ser.matrix_to_obj(omega),
        "bell_state.json": ser.matrix_to_obj(proj(bell)),
        "cnot.json": ser.matrix_to_obj(cnot),
        "local_unitary.json": ser.matrix_to_obj(np.kron(random_unitary(2, rng), random_unitary(2, rng))),
        "swap_collision.json": ser.config_to_obj(CollisionConfig(
            2, 2, 0.6 * swap(2), 1.0, proj([1, 0]), 20, proj([0, 1]))),
        "random_collision.json": ser.config_to_obj(CollisionConfig(
            2, 2, np.diag([1.0, -0.5, 0.5, -1.0]) + 0.3 * swap(2), 0.8,
            random_density(2, rng), 20, random_density(2, rng))),
    }
    files["scenario_reveal.json"] = {
        "kind": "reveal", "seed": 0, "samples": 0,
        "payload": {"omega": files["omega.json"], "d": 2},
    }
    for name, obj in files.items():
        ser.write_json(obj, out / name)
    print(json.dumps(sorted(files), indent=2))


if __name__ == "__main__":
    main(*sys.argv[1:])
