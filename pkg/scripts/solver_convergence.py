"""Grid-refinement study for the transfer-matrix eigenvalue at fixed eps.

Solves the bound-state problem at a sequence of doubled fast-scale grid
densities, prints the per-level eigenvalue and the observed convergence
order, and compares the Richardson-extrapolated value with the finest
solve.  The integrator is classical RK4, so the order should sit near 4.
"""

import argparse

from oscispec.asymptotics import compute_k2
from oscispec.config import load_config, parse_config
from oscispec.solver import convergence_study

CANONICAL = """\
mode = cos 1 poly 100 2
support = 0 1
eps = 0.1
"""


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--config", help="config file; omit for the built-in canonical potential")
    ap.add_argument("--eps", type=float, default=0.1)
    ap.add_argument("--base", type=int, default=40, help="coarsest points per fast period")
    ap.add_argument("--levels", type=int, default=4, help="number of grid doublings")
    args = ap.parse_args(argv)

    cfg = load_config(args.config) if args.config else parse_config(CANONICAL)
    V = cfg.build_potential()
    k2 = compute_k2(V).value

    steps = [args.eps / (args.base * 2**k) for k in range(args.levels)]
    study = convergence_study(V, args.eps, h_sequence=steps, k2_hint=k2)

    print(f"{'pts/period':>10} {'eigenvalue':>24} {'diff to previous':>18}")
    prev = None
    pts = args.base
    for lam in study.eigenvalues:
        diff = "" if prev is None else f"{abs(lam - prev):18.3e}"
        print(f"{pts:10d} {lam.real:24.16e} {diff}")
        prev = lam
        pts *= 2
    print(f"observed order: {study.observed_order:.3f}")
    print(f"extrapolated:   {study.extrapolated.real:.16e}")
    print(f"error estimate: {study.error_estimate:.3e}")


if __name__ == "__main__":
    main()
