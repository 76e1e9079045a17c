"""Convergence of the lattice dispersion relation toward hbar k^2 / (2m)."""

import argparse

from qgalilei.lattice import LatticeParams, dispersion_study, study_csv, taylor_error


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--k", type=float, default=1.0)
    ap.add_argument("--a0", type=float, default=0.3)
    ap.add_argument("--halvings", type=int, default=6)
    ap.add_argument("--mass", type=float, default=1.0)
    ap.add_argument("--hbar", type=float, default=1.0)
    args = ap.parse_args()

    spacings = [args.a0 / 2**j for j in range(args.halvings)]
    template = LatticeParams(mass=args.mass, hbar=args.hbar)
    rows = dispersion_study(spacings, args.k, template)
    print(study_csv(rows), end="")
    print()
    for r in rows:
        leading = taylor_error(args.k, r.a, args.mass, args.hbar)
        print(f"a={r.a:.6g} err/leading-term={r.abs_err / leading:.6f}")


if __name__ == "__main__":
    main()
