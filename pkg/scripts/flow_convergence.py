"""RK4 error of the gradient flow along the stable curve (1, i) against the
exact e^-t solution, for a range of step sizes. Prints the observed order."""

import argparse

import numpy as np

from maslov_lab import dynamics


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--T", type=float, default=5.0)
    ap.add_argument("--steps", type=float, nargs="+", default=[0.2, 0.1, 0.05, 0.025, 0.0125])
    args = ap.parse_args()

    prev = None
    print(f"{'dt':>8} {'max error':>12} {'order':>6}")
    for dt in args.steps:
        traj = dynamics.integrate_flow("grad", [1, 0, 0, 1], args.T, dt)
        exact = np.exp(-traj.times)[:, None] * np.array([1, 0, 0, 1])
        err = np.max(np.abs(traj.states - exact))
        order = "" if prev is None else f"{np.log(prev[1] / err) / np.log(prev[0] / dt):6.2f}"
        print(f"{dt:8.4f} {err:12.3e} {order:>6}")
        prev = (dt, err)


if __name__ == "__main__":
    main()
