"""Rabi Hamiltonian, Jaynes-Cummings model and two exactly solvable
approximating Hamiltonians obtained by a unitary rotation."""

from .dynamics import (
    SurvivalSeries,
    TimeGrid,
    compare_models,
    propagate_survival,
    survival_ahm1_analytic,
    survival_ahm2_analytic,
    survival_jcm_analytic,
)
from .fock import FieldState, JointState, OperatorMatrix, coherent_state, number_state
from .models import (
    ModelParams,
    build_h1_explicit,
    build_h2_explicit,
    build_jc,
    build_rabi,
)
from .spectra import full_eigenbasis

__version__ = "0.1.0"

__all__ = [
    "FieldState",
    "JointState",
    "ModelParams",
    "OperatorMatrix",
    "SurvivalSeries",
    "TimeGrid",
    "build_h1_explicit",
    "build_h2_explicit",
    "build_jc",
    "build_rabi",
    "coherent_state",
    "compare_models",
    "full_eigenbasis",
    "number_state",
    "propagate_survival",
    "survival_ahm1_analytic",
    "survival_ahm2_analytic",
    "survival_jcm_analytic",
]
