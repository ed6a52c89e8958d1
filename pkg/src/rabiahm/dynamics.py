"""Excited-state survival probability P(t) = (1 + <sigma_z(t)>) / 2.

Four routes are available:

* ``propagate_survival`` - exact propagation under any dense Hermitian H by
  one diagonalization (H is time independent, so this is an exact
  integrator rather than a stepper);
* ``survival_jcm_analytic`` - resonant Jaynes-Cummings closed form;
* ``survival_ahm1_analytic`` - closed form for H1 built from the pair
  coefficients, the overlaps F-/F+ and the special-state corrections;
* ``survival_ahm2_analytic`` - spectral resolution in the closed-form H2
  eigenbasis.

All start from ``|up> (x) |f>``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import CutoffError, NotHermitianError, PropagationError
from .fock import HERMITIAN_TOL, FieldState, JointState, OperatorMatrix
from .models import ModelParams, build_jc, build_rabi
from .spectra import coefficient_arrays, eigenvalue_arrays, full_eigenbasis, h1_special_values

MODEL_TAGS = ("RH", "AHM1", "AHM2", "JCM")
NORM_TOL = 1e-10
SUPPORT_TOL = 1e-12

# keeps each (terms x times) phase block near 16 MB
_CHUNK_ELEMENTS = 1 << 20


@dataclass(frozen=True)
class TimeGrid:
    """Uniform grid in units of 1/omega, endpoints included."""

    t_start: float
    t_end: float
    steps: int

    def __post_init__(self):
        if not 0 <= self.t_start < self.t_end:
            raise ValueError(f"need 0 <= t_start < t_end, got {self.t_start}, {self.t_end}")
        if self.steps < 2:
            raise ValueError("steps must be at least 2")

    @property
    def times(self) -> np.ndarray:
        return np.linspace(self.t_start, self.t_end, self.steps)

    @property
    def dt(self) -> float:
        return (self.t_end - self.t_start) / (self.steps - 1)


@dataclass(frozen=True)
class SurvivalSeries:
    model: str
    times: np.ndarray
    p: np.ndarray

    def __post_init__(self):
        if self.times.shape != self.p.shape:
            raise ValueError("times and p must have the same shape")
        lo, hi = float(self.p.min()), float(self.p.max())
        if lo < -NORM_TOL or hi > 1 + NORM_TOL:
            raise PropagationError(f"{self.model}: P(t) left [0, 1] (min {lo:.3e}, max {hi:.3e})")


def _time_chunks(n_terms, times):
    step = max(1, _CHUNK_ELEMENTS // max(n_terms, 1))
    for start in range(0, len(times), step):
        yield slice(start, start + step)


def _spectral_up_population(values, up_rows, full_rows, coeffs, times):
    """|| P_up sum_j c_j e^{-i E_j t} v_j ||^2 and the full norm per sample.

    ``up_rows``/``full_rows`` hold the eigenvectors' spin-up block and the
    whole vectors as columns.
    """
    pop = np.empty(len(times))
    norms = np.empty(len(times)) if full_rows is not None else None
    for sl in _time_chunks(len(values), times):
        phases = np.exp(-1j * np.outer(values, times[sl])) * coeffs[:, None]
        up = up_rows @ phases
        pop[sl] = np.einsum("ij,ij->j", up.conj(), up).real
        if full_rows is not None:
            psi = full_rows @ phases
            norms[sl] = np.sqrt(np.einsum("ij,ij->j", psi.conj(), psi).real)
    return pop, norms


def propagate_survival(h: OperatorMatrix, psi0: JointState, grid: TimeGrid, model: str = "RH") -> SurvivalSeries:
    """Exact P(t) under ``h`` by diagonalizing once."""
    if h.dim != psi0.dim:
        raise ValueError(f"H has dim {h.dim} but the state has dim {psi0.dim}")
    defect = h.hermitian_defect()
    if defect >= HERMITIAN_TOL:
        raise NotHermitianError(f"cannot propagate non-Hermitian H (defect {defect:.3e})")
    try:
        values, vectors = np.linalg.eigh(h.entries)
    except np.linalg.LinAlgError as exc:
        raise PropagationError(f"eigensolver failed: {exc}") from exc
    coeffs = vectors.conj().T @ psi0.amplitudes
    half = psi0.dim // 2
    times = grid.times
    # P(t) = (1 + <sigma_z>) / 2 equals the spin-up population
    pop, norms = _spectral_up_population(values, vectors[half:], vectors, coeffs, times)
    drift = float(np.abs(norms - 1).max())
    if drift >= NORM_TOL:
        raise PropagationError(f"norm drifted by {drift:.3e} during propagation")
    return SurvivalSeries(model, times, pop)


def _padded_amplitudes(f: FieldState, length: int) -> np.ndarray:
    out = np.zeros(length, dtype=complex)
    k = min(length, f.n_max + 1)
    out[:k] = f.amplitudes[:k]
    return out


def survival_jcm_analytic(f: FieldState, p: ModelParams, grid: TimeGrid) -> SurvivalSeries:
    p.require_resonant("the Jaynes-Cummings closed form")
    times = grid.times
    weights = f.probabilities
    rabi = 2 * p.g * np.sqrt(np.arange(f.n_max + 1) + 1.0)
    keep = weights > 0
    out = np.empty(len(times))
    for sl in _time_chunks(int(keep.sum()), times):
        out[sl] = 0.5 * (1 + weights[keep] @ np.cos(np.outer(rabi[keep], times[sl])))
    return SurvivalSeries("JCM", times, out)


def _check_support(f: FieldState, p: ModelParams):
    limit = p.interior_max - 3
    tail = float(f.probabilities[limit + 1 :].sum())
    if tail > SUPPORT_TOL:
        raise CutoffError(
            f"field carries mass {tail:.3e} above n = {limit} (n_max - guard - 3); raise n_max"
        )
    return limit


def overlaps_f(n: int, f: FieldState, p: ModelParams):
    """(F-_n, F+_n) = (<phi-_n|up, f>, <phi+_n|up, f>) for H1."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if n + 3 > p.interior_max:
        raise CutoffError(f"pair n={n} is outside the interior (n + 3 > {p.interior_max})")
    p.require_resonant("H1 overlaps")
    fa = _padded_amplitudes(f, n + 3)
    _, _, _, _, a, b = coefficient_arrays(n, p.omega, p.g)
    a, b = float(a), float(b)
    s = 1 / math.sqrt(2)
    return s * (a * fa[n] - b * fa[n + 2]), s * (a * fa[n + 2] + b * fa[n])


def _evaluate_terms(coeffs, freqs, times):
    """Re sum_k coeffs_k exp(i freqs_k t)."""
    keep = coeffs != 0
    coeffs, freqs = coeffs[keep], freqs[keep]
    out = np.empty(len(times))
    for sl in _time_chunks(len(coeffs), times):
        out[sl] = (coeffs @ np.exp(1j * np.outer(freqs, times[sl]))).real
    return out


def ahm1_population_terms(f: FieldState, p: ModelParams):
    """Amplitudes and frequencies of the oscillating terms in P_H1(t) - 1/2.

    The pair sum runs over n with four eigenvalue differences
    kappa^a_{n+2} - kappa^b_n; the special-state part couples <0|f> to k1
    and <1|f> to k2 (chi1, chi2 carry |up,0> and |up,1>).
    """
    p.require_resonant("the H1 survival formula")
    top = min(_check_support(f, p), f.n_max)
    n = np.arange(top + 3)
    _, _, _, _, a, b = coefficient_arrays(n, p.omega, p.g)
    km, kp = eigenvalue_arrays(n, p.omega, p.g)
    fa = _padded_amplitudes(f, top + 5)
    s = 1 / math.sqrt(2)
    fm = s * (a * fa[n] - b * fa[n + 2])
    fp = s * (a * fa[n + 2] + b * fa[n])

    i = np.arange(top + 1)
    j = i + 2
    coeffs = [
        a[i] * a[j] * fm[j].conj() * fp[i],
        -b[i] * a[j] * fm[j].conj() * fm[i],
        a[i] * b[j] * fp[j].conj() * fp[i],
        -b[i] * b[j] * fp[j].conj() * fm[i],
    ]
    freqs = [km[j] - kp[i], km[j] - km[i], kp[j] - kp[i], kp[j] - km[i]]

    _, k1, k2 = h1_special_values(p)
    coeffs.append(
        s * np.array([
            a[0] * fa[0] * fm[0].conj(),
            b[0] * fa[0] * fp[0].conj(),
            a[1] * fa[1] * fm[1].conj(),
            b[1] * fa[1] * fp[1].conj(),
        ])
    )
    freqs.append(np.array([km[0] - k1, kp[0] - k1, km[1] - k2, kp[1] - k2]))
    return np.concatenate(coeffs), np.concatenate(freqs)


def survival_ahm1_analytic(f: FieldState, p: ModelParams, grid: TimeGrid) -> SurvivalSeries:
    coeffs, freqs = ahm1_population_terms(f, p)
    times = grid.times
    return SurvivalSeries("AHM1", times, 0.5 + _evaluate_terms(coeffs, freqs, times))


def survival_ahm1_weak_limit(f: FieldState, p: ModelParams, grid: TimeGrid) -> SurvivalSeries:
    """The H1 formula after the weak-coupling substitutions.

    A_n -> 1 and B_n -> 0 leave only the first pair term; <n+2|f> is then
    replaced by <n|f>, kappa-_{n+2} - kappa+_n by 2 g sqrt(n+1), and the
    special-state part is dropped.
    """
    times = grid.times
    n = np.arange(f.n_max + 1)
    s = 1 / math.sqrt(2)
    fa = f.amplitudes
    f_minus_shifted = s * fa  # F-_{n+2} = <n+2|f>/sqrt2 -> <n|f>/sqrt2
    f_plus = s * fa  # F+_n = <n+2|f>/sqrt2 -> <n|f>/sqrt2
    coeffs = f_minus_shifted.conj() * f_plus
    freqs = 2 * p.g * np.sqrt(n + 1.0)
    return SurvivalSeries("AHM1", times, 0.5 + _evaluate_terms(coeffs, freqs, times))


def survival_ahm2_analytic(f: FieldState, p: ModelParams, grid: TimeGrid) -> SurvivalSeries:
    """P_H2(t) from the closed-form H2 eigenbasis (specials plus pairs)."""
    p.require_resonant("the H2 survival probability")
    _check_support(f, p)
    psi0 = JointState.excited(f.resized(p.n_max))
    records = full_eigenbasis("H2", p)
    basis = np.column_stack([r.vector.amplitudes for r in records])
    values = np.array([r.value for r in records])
    coeffs = basis.conj().T @ psi0.amplitudes
    captured = float(np.sum(np.abs(coeffs) ** 2))
    if abs(captured - 1) > SUPPORT_TOL:
        raise CutoffError(f"H2 eigenbasis captures only {captured:.15f} of the initial state")
    keep = coeffs != 0
    half = p.n_max + 1
    pop, _ = _spectral_up_population(values[keep], basis[half:, keep], None, coeffs[keep], grid.times)
    return SurvivalSeries("AHM2", grid.times, pop)


def compare_models(f: FieldState, p: ModelParams, grid: TimeGrid, models) -> dict:
    """One series per requested tag, keyed and ordered as in MODEL_TAGS.

    RH always goes through matrix propagation.  Off resonance JCM falls
    back to propagating H_JC; the approximating models refuse.
    """
    wanted = {m.upper() for m in models}
    unknown = wanted - set(MODEL_TAGS)
    if unknown:
        raise ValueError(f"unknown model tags {sorted(unknown)}; choose from {MODEL_TAGS}")
    if not wanted:
        raise ValueError("at least one model is required")
    f = f.resized(p.n_max)
    out = {}
    for tag in MODEL_TAGS:
        if tag not in wanted:
            continue
        if tag == "RH":
            out[tag] = propagate_survival(build_rabi(p), JointState.excited(f), grid, "RH")
        elif tag == "AHM1":
            out[tag] = survival_ahm1_analytic(f, p, grid)
        elif tag == "AHM2":
            out[tag] = survival_ahm2_analytic(f, p, grid)
        elif p.resonant:
            out[tag] = survival_jcm_analytic(f, p, grid)
        else:
            out[tag] = propagate_survival(build_jc(p), JointState.excited(f), grid, "JCM")
    return out
