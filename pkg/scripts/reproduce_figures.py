"""Write the survival-probability datasets for every preset as CSV, plus a
feature summary, and optionally PNG plots (needs matplotlib).

    python scripts/reproduce_figures.py --out results/ [--plot]
"""

import argparse
from pathlib import Path

from rabiahm import features
from rabiahm.cli import figure_config, run_simulation, write_csv
from rabiahm.figures import PRESETS


def summarize(name, series):
    t = next(iter(series.values())).times
    rows = []
    for tag, s in series.items():
        revivals = features.revival_maxima(t, s.p)
        rows.append(
            f"{name},{tag},{features.dominant_frequency(t, s.p):.6f},{s.p.min():.6f},"
            f"{features.band_power(t, s.p, 1.8, 2.2):.6e},{len(revivals)},"
            f"{revivals[0] if len(revivals) else float('nan'):.2f},"
            f"{features.longest_quiet_span(t, s.p):.2f}"
        )
    return rows


def plot(name, series, path):
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, axes = plt.subplots(len(series), 1, sharex=True, figsize=(8, 2.2 * len(series)))
    for ax, (tag, s) in zip(axes, series.items()):
        ax.plot(s.times, s.p, lw=0.6)
        ax.set_ylabel(f"P {tag}")
        ax.set_ylim(-0.02, 1.02)
    axes[-1].set_xlabel("t")
    fig.suptitle(name)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", default="results")
    parser.add_argument("--plot", action="store_true")
    parser.add_argument("--only", nargs="*", choices=sorted(PRESETS))
    args = parser.parse_args()

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    summary = ["preset,model,dominant_freq,min_p,band_power_2w,revivals,first_revival,longest_quiet"]
    for name in args.only or sorted(PRESETS):
        config = figure_config(name, str(out / f"{name}.csv"))
        series = run_simulation(config)
        with open(config.output, "w", newline="") as fh:
            write_csv(fh, config, series)
        summary.extend(summarize(name, series))
        if args.plot:
            plot(name, series, out / f"{name}.png")
        print(f"wrote {config.output}")
    (out / "features.csv").write_text("\n".join(summary) + "\n")
    print("\n".join(summary))


if __name__ == "__main__":
    main()
