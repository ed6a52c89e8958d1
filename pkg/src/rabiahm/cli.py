"""Command-line front end.

    rabiahm simulate --omega 1 --g 0.1 --state number:6 --models rh,ahm1,jcm --tmax 100 --steps 4000
    rabiahm figure fig5 -o fig5.csv
    rabiahm spectrum --model h1 --n-max 60
    rabiahm verify

CSV output starts with a ``# key=value`` block holding the fully resolved
run configuration; passing that CSV back through ``--config`` reproduces the
run.  Exit codes: 0 success, 1 verification failure, 2 usage/config error.
"""

from __future__ import annotations

import argparse
import contextlib
import re
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import checks as checks_mod
from .dynamics import MODEL_TAGS, TimeGrid, compare_models
from .figures import PRESETS, StateSpec, parse_state_spec
from .models import DEFAULT_GUARD, ModelParams, build_h1_explicit, build_h2_explicit
from .spectra import dump_spectrum, full_eigenbasis, largest_pair_index

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

CONFIG_KEYS = ("omega", "nu", "g", "n_max", "guard", "state", "models", "tmin", "tmax", "steps")
DEFAULTS = {
    "omega": "1.0",
    "nu": "",
    "g": "0.1",
    "n_max": "auto",
    "guard": str(DEFAULT_GUARD),
    "state": "number:6",
    "models": "rh,ahm1,jcm",
    "tmin": "0",
    "tmax": "100",
    "steps": "4000",
}
_KV = re.compile(r"^\s*#?\s*([a-z_]+)\s*=\s*(.*?)\s*$")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    params: ModelParams
    state: StateSpec
    grid: TimeGrid
    models: tuple
    output: str = "-"

    def as_items(self):
        p = self.params
        return [
            ("omega", repr(p.omega)),
            ("nu", repr(p.nu)),
            ("g", repr(p.g)),
            ("n_max", str(p.n_max)),
            ("guard", str(p.guard)),
            ("state", str(self.state)),
            ("models", ",".join(m.lower() for m in self.models)),
            ("tmin", repr(self.grid.t_start)),
            ("tmax", repr(self.grid.t_end)),
            ("steps", str(self.grid.steps)),
        ]


def read_config_file(path) -> dict:
    """key=value lines; a leading ``#`` is allowed, so run CSVs are valid configs."""
    values = {}
    for line in Path(path).read_text().splitlines():
        m = _KV.match(line)
        if m and m.group(1) in CONFIG_KEYS:
            values[m.group(1)] = m.group(2)
    return values


def parse_models(text: str) -> tuple:
    tags = [t.strip().upper() for t in text.split(",") if t.strip()]
    if not tags:
        raise ConfigError("model set is empty; pass e.g. --models rh,ahm1,jcm")
    bad = [t for t in tags if t not in MODEL_TAGS]
    if bad:
        raise ConfigError(f"unknown model(s) {', '.join(bad)}; choose from {', '.join(MODEL_TAGS).lower()}")
    return tuple(t for t in MODEL_TAGS if t in tags)


def _number(raw, key, kind=float):
    try:
        return kind(raw)
    except ValueError:
        raise ConfigError(f"{key}={raw!r} is not a valid {kind.__name__}") from None


def resolve_config(args) -> RunConfig:
    merged = dict(DEFAULTS)
    if args.config:
        try:
            merged.update(read_config_file(args.config))
        except OSError as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from None
    for key in CONFIG_KEYS:
        flag = getattr(args, key, None)
        if flag is not None:
            merged[key] = str(flag)

    try:
        state = parse_state_spec(merged["state"])
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    n_max = state.default_n_max() if merged["n_max"] in ("", "auto") else _number(merged["n_max"], "n_max", int)
    omega = _number(merged["omega"], "omega")
    nu = omega if merged["nu"] in ("", "None") else _number(merged["nu"], "nu")
    try:
        params = ModelParams(
            omega=omega,
            g=_number(merged["g"], "g"),
            n_max=n_max,
            nu=nu,
            guard=_number(merged["guard"], "guard", int),
        )
        grid = TimeGrid(
            _number(merged["tmin"], "tmin"),
            _number(merged["tmax"], "tmax"),
            _number(merged["steps"], "steps", int),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    return RunConfig(params, state, grid, parse_models(merged["models"]), getattr(args, "output", "-"))


@contextlib.contextmanager
def _open_output(path):
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def write_csv(fh, config: RunConfig, series: dict) -> None:
    for key, value in config.as_items():
        fh.write(f"# {key}={value}\n")
    tags = [t for t in MODEL_TAGS if t in series]
    fh.write(",".join(["t"] + [f"P_{t}" for t in tags]) + "\n")
    columns = [config.grid.times] + [series[t].p for t in tags]
    for row in np.column_stack(columns):
        fh.write(",".join(f"{x:.12g}" for x in row) + "\n")


def run_simulation(config: RunConfig) -> dict:
    try:
        field = config.state.field(config.params.n_max)
        return compare_models(field, config.params, config.grid, config.models)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def cmd_simulate(args) -> int:
    config = resolve_config(args)
    series = run_simulation(config)
    with _open_output(config.output) as fh:
        write_csv(fh, config, series)
    return EXIT_OK


def figure_config(name: str, output: str = "-") -> RunConfig:
    preset = PRESETS[name]
    return RunConfig(preset.params(), preset.state, preset.grid, preset.models, output)


def cmd_figure(args) -> int:
    config = figure_config(args.name, args.output)
    series = run_simulation(config)
    with _open_output(config.output) as fh:
        write_csv(fh, config, series)
    return EXIT_OK


def spectrum_text(model: str, p: ModelParams) -> str:
    h = build_h1_explicit(p) if model == "H1" else build_h2_explicit(p)
    records = full_eigenbasis(model, p)
    header = (
        f"# model={model} omega={p.omega!r} g={p.g!r} n_max={p.n_max} guard={p.guard}\n"
        f"# records={len(records)} pairs=0..{largest_pair_index(p)}\n"
    )
    return header + dump_spectrum(records, h)


def _params_from_flags(args) -> ModelParams:
    try:
        return ModelParams(omega=args.omega, g=args.g, n_max=args.n_max, guard=args.guard)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def cmd_spectrum(args) -> int:
    text = spectrum_text(args.model.upper(), _params_from_flags(args))
    with _open_output(args.output) as fh:
        fh.write(text)
    return EXIT_OK


def cmd_verify(args) -> int:
    p = _params_from_flags(args)
    results = checks_mod.run_all(p)
    for c in results:
        print(c.line())
    failed = [c for c in results if not c.passed]
    print(f"SUMMARY checks={len(results)} failed={len(failed)}")
    return EXIT_FAIL if failed else EXIT_OK


def _add_param_flags(sp, defaults=True):
    d = (lambda v: v) if defaults else (lambda v: None)
    sp.add_argument("--omega", type=float, default=d(1.0), help="atomic frequency")
    sp.add_argument("--g", type=float, default=d(0.1), help="coupling constant")
    sp.add_argument("--n-max", dest="n_max", default=d(200), type=int if defaults else str,
                    help="Fock cutoff")
    sp.add_argument("--guard", type=int, default=d(DEFAULT_GUARD), help="guard-band width")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rabiahm", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="survival probabilities to CSV")
    sim.add_argument("--config", help="key=value file (a previous run's CSV works too)")
    _add_param_flags(sim, defaults=False)
    sim.add_argument("--nu", type=float, default=None, help="field frequency (default: omega)")
    sim.add_argument("--state", default=None, help="number:n or coherent:re,im")
    sim.add_argument("--models", default=None, help="comma list from rh,ahm1,ahm2,jcm")
    sim.add_argument("--tmin", type=float, default=None)
    sim.add_argument("--tmax", type=float, default=None)
    sim.add_argument("--steps", type=int, default=None)
    sim.add_argument("-o", "--output", default="-")
    sim.set_defaults(func=cmd_simulate)

    fig = sub.add_parser("figure", help="run a figure preset")
    fig.add_argument("name", choices=sorted(PRESETS))
    fig.add_argument("-o", "--output", default="-")
    fig.set_defaults(func=cmd_figure)

    spec = sub.add_parser("spectrum", help="closed-form eigenvalues with residuals")
    spec.add_argument("--model", choices=["h1", "h2", "H1", "H2"], default="h1")
    _add_param_flags(spec)
    spec.add_argument("-o", "--output", default="-")
    spec.set_defaults(func=cmd_spectrum)

    ver = sub.add_parser("verify", help="run the verification suite")
    _add_param_flags(ver)
    ver.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"rabiahm: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"rabiahm: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
