"""Weight A_n^2 of the Jaynes-Cummings-like component in the H1 pair
eigenstates, as a function of photon number.

    python scripts/a2_vs_n.py --g 0.1 --n-max 400 [-o a2.csv]
"""

import argparse
import sys

import numpy as np

from rabiahm.spectra import coefficient_arrays


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--omega", type=float, default=1.0)
    parser.add_argument("--g", type=float, default=0.1)
    parser.add_argument("--n-max", type=int, default=400)
    parser.add_argument("--points", type=int, default=2001, help="samples of continuous n")
    parser.add_argument("-o", "--output", default="-")
    args = parser.parse_args()

    # the closed form is smooth in n, so evaluate it on a continuous grid
    n = np.linspace(0.0, args.n_max, args.points)
    a2 = coefficient_arrays(n, args.omega, args.g)[4] ** 2
    fh = sys.stdout if args.output == "-" else open(args.output, "w")
    fh.write(f"# omega={args.omega!r} g={args.g!r}\nn,A2\n")
    for x, y in zip(n, a2):
        fh.write(f"{x:.6g},{y:.12g}\n")
    if fh is not sys.stdout:
        fh.close()


if __name__ == "__main__":
    main()
