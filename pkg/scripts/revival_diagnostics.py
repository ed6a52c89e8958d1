"""Envelope diagnostics for the coherent alpha=8 run: revival maxima of each
model, the JCM revival estimate 2 pi sqrt(<n>) / g, and a cutoff check.

    python scripts/revival_diagnostics.py [--n-max 250]
"""

import argparse
import math

import numpy as np

from rabiahm import features
from rabiahm.dynamics import TimeGrid, compare_models
from rabiahm.fock import coherent_state
from rabiahm.models import ModelParams, default_n_max_coherent


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--alpha", type=float, default=8.0)
    parser.add_argument("--g", type=float, default=0.1)
    parser.add_argument("--tmax", type=float, default=700.0)
    parser.add_argument("--steps", type=int, default=14000)
    parser.add_argument("--n-max", type=int, default=None, help="second cutoff for a convergence check")
    args = parser.parse_args()

    grid = TimeGrid(0.0, args.tmax, args.steps)
    estimate = 2 * math.pi * args.alpha / args.g
    print(f"revival estimate 2 pi sqrt(<n>) / g = {estimate:.1f}")
    runs = {}
    for n_max in filter(None, (default_n_max_coherent(args.alpha), args.n_max)):
        p = ModelParams(1.0, args.g, n_max)
        runs[n_max] = compare_models(coherent_state(args.alpha, n_max), p, grid, ("RH", "AHM1", "JCM"))
    base = next(iter(runs.values()))
    t = grid.times
    for tag, s in base.items():
        env = features.upper_envelope(t, s.p)
        peaks = features.revival_maxima(t, s.p)
        print(
            f"{tag}: revivals at {np.round(peaks, 1).tolist()}, envelope min {env.min():.3f} "
            f"at t={t[env.argmin()]:.1f}, longest quiet span {features.longest_quiet_span(t, s.p):.1f}"
        )
    if len(runs) == 2:
        other = list(runs.values())[1]
        for tag in base:
            print(f"{tag}: max |dP| between cutoffs {np.abs(base[tag].p - other[tag].p).max():.2e}")


if __name__ == "__main__":
    main()
