"""Relaxation of a qubit under repeated partial-swap collisions.

Prints the Frobenius distance to the ancilla state at each step next to the
closed form ``cos(theta)^(2n)`` decay, and the per-step hiding residual.

Usage: python scripts/collision_relaxation.py [--theta T] [--steps N]
"""
import argparse

import numpy as np

from corrmap.collision import CollisionConfig, collision_step, simulate, step_hiding_check
from corrmap.tensor_core import swap


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--theta", type=float, default=0.6)
    parser.add_argument("--steps", type=int, default=15)
    args = parser.parse_args()

    tau = np.diag([0.8, 0.2]).astype(complex)
    eta0 = np.diag([0.1, 0.9]).astype(complex)
    cfg = CollisionConfig(2, 2, args.theta * swap(2), 1.0, tau, args.steps, eta0)
    traj = simulate(cfg)
    dist = traj.distances(tau)

    print(f"{'n':>3} {'|eta_n - tau|':>14} {'closed form':>14} {'hiding':>10} {'min Choi':>10}")
    eta = eta0
    for n, d in enumerate(dist):
        closed = np.cos(args.theta) ** (2 * n) * dist[0]
        if n == 0:
            print(f"{n:>3} {d:>14.6e} {closed:>14.6e}")
            continue
        eta, chi = collision_step(eta, cfg, n - 1)
        hide = step_hiding_check(cfg, chi, n)
        print(f"{n:>3} {d:>14.6e} {closed:>14.6e} {hide:>10.1e} {traj.step_cp_mineigs[n - 1]:>10.2e}")


if __name__ == "__main__":
    main()
