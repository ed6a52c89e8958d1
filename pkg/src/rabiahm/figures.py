"""Initial-state specs and the preset runs behind the survival-probability figures."""

from __future__ import annotations

from dataclasses import dataclass

from .dynamics import TimeGrid, compare_models
from .fock import FieldState, coherent_state, number_state
from .models import DEFAULT_GUARD, ModelParams, default_n_max_coherent, default_n_max_number


@dataclass(frozen=True)
class StateSpec:
    """``number:n`` or ``coherent:re[,im]``."""

    kind: str
    n: int = 0
    alpha: complex = 0j

    def default_n_max(self) -> int:
        if self.kind == "number":
            return default_n_max_number(self.n)
        return default_n_max_coherent(self.alpha)

    def field(self, n_max: int) -> FieldState:
        if self.kind == "number":
            return number_state(self.n, n_max)
        return coherent_state(self.alpha, n_max)

    def __str__(self):
        if self.kind == "number":
            return f"number:{self.n}"
        return f"coherent:{self.alpha.real!r},{self.alpha.imag!r}"


def parse_state_spec(text: str) -> StateSpec:
    kind, sep, rest = text.strip().partition(":")
    kind = kind.lower()
    if not sep or not rest:
        raise ValueError(f"state spec {text!r} must look like number:6 or coherent:2,0")
    if kind == "number":
        try:
            n = int(rest)
        except ValueError:
            raise ValueError(f"number state needs an integer photon number, got {rest!r}") from None
        if n < 0:
            raise ValueError("photon number must be non-negative")
        return StateSpec("number", n=n)
    if kind == "coherent":
        parts = rest.split(",")
        if len(parts) > 2:
            raise ValueError(f"coherent amplitude {rest!r} must be re or re,im")
        try:
            re = float(parts[0])
            im = float(parts[1]) if len(parts) == 2 else 0.0
        except ValueError:
            raise ValueError(f"coherent amplitude {rest!r} is not numeric") from None
        return StateSpec("coherent", alpha=complex(re, im))
    raise ValueError(f"unknown state kind {kind!r}; use number or coherent")


@dataclass(frozen=True)
class FigurePreset:
    name: str
    state: StateSpec
    grid: TimeGrid
    models: tuple = ("RH", "AHM1", "JCM")
    omega: float = 1.0
    g: float = 0.1

    def params(self) -> ModelParams:
        return ModelParams(self.omega, self.g, self.state.default_n_max(), guard=DEFAULT_GUARD)


PRESETS = {
    "fig2": FigurePreset("fig2", StateSpec("number", n=6), TimeGrid(0.0, 100.0, 4000)),
    "fig3": FigurePreset("fig3", StateSpec("number", n=100), TimeGrid(0.0, 40.0, 4000)),
    "fig4": FigurePreset("fig4", StateSpec("coherent", alpha=2 + 0j), TimeGrid(0.0, 100.0, 4000)),
    "fig5": FigurePreset("fig5", StateSpec("coherent", alpha=8 + 0j), TimeGrid(0.0, 700.0, 14000)),
}


def run_preset(name: str, models=None) -> dict:
    preset = PRESETS[name]
    p = preset.params()
    return compare_models(preset.state.field(p.n_max), p, preset.grid, models or preset.models)
