"""Verification suites run by ``rabiahm verify`` and the acceptance tests.

Each suite returns a list of :class:`Check` records; a check compares one
measured number against a fixed threshold.
"""

from __future__ import annotations

import functools
import math
import operator
import time
from dataclasses import dataclass

import numpy as np

from . import features
from .dynamics import (
    TimeGrid,
    propagate_survival,
    survival_ahm1_analytic,
    survival_ahm2_analytic,
    survival_jcm_analytic,
)
from .fock import FieldState, JointState, OperatorMatrix, coherent_state, number_state
from .figures import run_preset
from .models import (
    ModelParams,
    build_h1_explicit,
    build_h2_explicit,
    build_jc,
    build_jc_diag,
    build_rabi,
    build_v,
    interior_max_abs,
    sign_flip_unitaries,
)
from .spectra import (
    ahm1_coefficients,
    ahm1_eigenvalues,
    ahm2_coefficients,
    ahm2_eigenvalues,
    coefficient_arrays,
    eigenvalue_arrays,
    full_eigenbasis,
)
from .transform import (
    approx_frequencies,
    build_h2_tilde,
    build_u,
    conjugate,
    decompose_v,
    h1_by_conjugation,
    h2_by_conjugation,
)

_OPS = {"<": operator.lt, "<=": operator.le, ">": operator.gt, ">=": operator.ge}

REVIVAL_ESTIMATE = 2 * math.pi * math.sqrt(64) / 0.1


@dataclass(frozen=True)
class Check:
    name: str
    value: float
    threshold: float
    relation: str = "<"

    @property
    def passed(self) -> bool:
        return bool(_OPS[self.relation](self.value, self.threshold))

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"CHECK {self.name} value={self.value:.6g} threshold={self.relation}{self.threshold:.6g} {status}"


def default_params() -> ModelParams:
    return ModelParams(omega=1.0, g=0.1, n_max=200, guard=5)


def _timed(suite):
    @functools.wraps(suite)
    def wrapper(*args, budget=None, **kwargs):
        start = time.perf_counter()
        checks = suite(*args, **kwargs)
        if budget is not None:
            checks.append(Check(f"{suite.__name__}.runtime_s", time.perf_counter() - start, budget))
        return checks

    return wrapper


@_timed
def algebraic_suite(p: ModelParams | None = None):
    p = p or default_params()
    u = build_u(p)
    eye = OperatorMatrix(np.eye(p.dim))
    rabi, jc, v = build_rabi(p), build_jc(p), build_v(p)
    split = float(np.abs(rabi.entries - jc.entries - v.entries).max())
    hermitian = max(
        m.hermitian_defect() for m in (rabi, jc, v, build_h1_explicit(p), build_h2_explicit(p))
    )
    return [
        Check("algebra.rabi_split_exact", split, 0.0, "<="),
        Check("algebra.builders_hermitian", hermitian, 1e-12),
        Check("algebra.u_interior_unitarity", interior_max_abs(u.dagger() @ u - eye, p), 1e-10),
        Check(
            "algebra.u_diagonalizes_jc",
            interior_max_abs(conjugate(u, jc) - build_jc_diag(p), p),
            1e-10,
        ),
        Check(
            "algebra.v_four_term_decomposition",
            interior_max_abs(decompose_v(p).total() - conjugate(u, v), p),
            1e-10,
        ),
        Check(
            "algebra.h1_explicit_vs_conjugation",
            interior_max_abs(h1_by_conjugation(p) - build_h1_explicit(p), p),
            1e-10,
        ),
        Check(
            "algebra.h2_explicit_vs_conjugation",
            interior_max_abs(h2_by_conjugation(p) - build_h2_explicit(p), p),
            1e-10,
        ),
    ]


def _nearest_gap(values, reference):
    reference = np.sort(reference)
    idx = np.clip(np.searchsorted(reference, values), 1, len(reference) - 1)
    return np.minimum(np.abs(values - reference[idx - 1]), np.abs(values - reference[idx]))


@_timed
def spectral_suite(p: ModelParams | None = None, pair_limit: int = 150):
    p = p or default_params()
    checks = []
    for model, builder in (("H1", build_h1_explicit), ("H2", build_h2_explicit)):
        h = builder(p)
        records = [r for r in full_eigenbasis(model, p) if r.is_special or r.n <= pair_limit]
        worst = max(r.residual(h) for r in records)
        checks.append(Check(f"spectra.{model.lower()}_residual", worst, 1e-10))
        dense = np.linalg.eigvalsh(h.entries)
        gaps = _nearest_gap(np.array([r.value for r in records]), dense)
        checks.append(Check(f"spectra.{model.lower()}_matches_dense_eigvals", float(gaps.max()), 1e-9))

    n = np.arange(pair_limit + 1)
    norm_defect = 0.0
    for g in (p.g, -p.g):
        _, _, _, _, a, b = coefficient_arrays(n, p.omega, g)
        norm_defect = max(norm_defect, float(np.abs(a * a + b * b - 1).max()))
    checks.append(Check("spectra.a2_plus_b2_is_one", norm_defect, 1e-14))

    flipped = p.with_g(-p.g)
    sym = 0.0
    for k in range(pair_limit + 1):
        c2, c1 = ahm2_coefficients(k, p), ahm1_coefficients(k, flipped)
        l2, l1 = ahm2_eigenvalues(k, p), ahm1_eigenvalues(k, flipped)
        sym = max(sym, abs(c2.a_n - c1.a_n), abs(c2.b_n - c1.b_n), abs(l2[0] - l1[0]), abs(l2[1] - l1[1]))
    checks.append(Check("spectra.h2_symmetry_relations", sym, 1e-14))

    # independent: closed-form (C, D, lambda) against the 2x2 blocks of rotated H2
    h2t = build_h2_tilde(p).entries
    d = p.n_max + 1
    block_res = 0.0
    for k in range(pair_limit + 1):
        idx = [k + 1, d + k + 2]
        block = h2t[np.ix_(idx, idx)]
        co = ahm2_coefficients(k, p)
        lm, lp = ahm2_eigenvalues(k, p)
        vm = np.array([co.a_n, co.b_n])
        vp = np.array([co.b_n, -co.a_n])
        block_res = max(block_res, np.linalg.norm(block @ vm - lm * vm), np.linalg.norm(block @ vp - lp * vp))
    checks.append(Check("spectra.h2_blocks_vs_closed_form", float(block_res), 1e-12))

    # kappa+_{n+2} - kappa+_n -> 2 omega with O(g / sqrt(n+1)) corrections
    m = np.arange(50, 201)
    kp = eigenvalue_arrays(np.arange(203), p.omega, p.g)[1]
    ratio = np.abs(kp[m + 2] - kp[m] - 2 * p.omega) / (3 * p.g / np.sqrt(m + 1))
    checks.append(Check("spectra.gap_asymptotics_ratio", float(ratio.max()), 1.0))
    return checks


def oracle_states(n_max: int):
    return {
        "number6": number_state(6, n_max),
        "number20": number_state(20, n_max),
        "coherent2": coherent_state(2.0, n_max),
        "coherent8": coherent_state(8.0, n_max),
    }


@_timed
def oracle_suite(p: ModelParams | None = None, grid: TimeGrid | None = None):
    p = p or default_params()
    grid = grid or TimeGrid(0.0, 100.0, 4000)
    h1 = build_h1_explicit(p)
    jc = build_jc(p)
    checks = []
    for name, f in oracle_states(p.n_max).items():
        psi0 = JointState.excited(f)
        analytic = survival_ahm1_analytic(f, p, grid).p
        numeric = propagate_survival(h1, psi0, grid, "AHM1").p
        checks.append(Check(f"oracle.ahm1_vs_propagation.{name}", float(np.abs(analytic - numeric).max()), 1e-8))
        analytic = survival_jcm_analytic(f, p, grid).p
        numeric = propagate_survival(jc, psi0, grid, "JCM").p
        checks.append(Check(f"oracle.jcm_vs_propagation.{name}", float(np.abs(analytic - numeric).max()), 1e-10))
    return checks


@functools.lru_cache(maxsize=None)
def preset_series(name: str):
    return run_preset(name, ("RH", "AHM1", "JCM"))


@_timed
def fig2_suite():
    series = preset_series("fig2")
    t = series["RH"].times
    freq = {k: features.dominant_frequency(t, s.p) for k, s in series.items()}
    target = 2 * 0.1 * math.sqrt(7)
    return [
        Check("fig2.freq_ahm1_below_rh", freq["RH"] - freq["AHM1"], 0.0, ">"),
        Check("fig2.freq_rh_below_jcm", freq["JCM"] - freq["RH"], 0.0, ">"),
        Check("fig2.freq_jcm_vs_2g_sqrt7", abs(freq["JCM"] - target), features.frequency_bin(t), "<="),
        Check(
            "fig2.rh_never_collapses",
            float(series["RH"].p.min() - series["JCM"].p.min()),
            0.01,
            ">",
        ),
    ]


@_timed
def fig4_suite():
    series = preset_series("fig4")
    t = series["RH"].times
    power = {k: features.band_power(t, s.p, 1.8, 2.2) for k, s in series.items()}
    return [
        Check("fig4.band_power_ratio_ahm1_over_jcm", power["AHM1"] / power["JCM"], 10.0, ">="),
        Check("fig4.band_power_ratio_rh_over_jcm", power["RH"] / power["JCM"], 10.0, ">="),
    ]


@_timed
def fig5_suite():
    series = preset_series("fig5")
    t = series["RH"].times
    checks = []
    revivals = {k: features.revival_maxima(t, s.p) for k, s in series.items()}
    for tag in ("RH", "AHM1"):
        checks.append(Check(f"fig5.{tag.lower()}_revival_count", float(len(revivals[tag])), 2.0, ">="))
        first = revivals[tag][0] if len(revivals[tag]) else math.inf
        checks.append(
            Check(
                f"fig5.{tag.lower()}_first_revival_rel_offset",
                abs(first - REVIVAL_ESTIMATE) / REVIVAL_ESTIMATE,
                0.15,
                "<=",
            )
        )
    jcm_first = revivals["JCM"][0] if len(revivals["JCM"]) else math.inf
    checks.append(
        Check("fig5.jcm_first_revival_rel_offset", abs(jcm_first - REVIVAL_ESTIMATE) / REVIVAL_ESTIMATE, 0.15, "<=")
    )
    checks.append(
        Check(
            "fig5.jcm_quiet_span_before_revival",
            features.longest_quiet_span(t, series["JCM"].p, before=jcm_first),
            50.0,
            ">=",
        )
    )
    checks.append(
        Check("fig5.ahm1_longest_quiet_span", features.longest_quiet_span(t, series["AHM1"].p), 50.0, "<")
    )
    return checks


@_timed
def symmetry_suite(p: ModelParams | None = None, grid: TimeGrid | None = None):
    p = p or default_params()
    grid = grid or TimeGrid(0.0, 100.0, 4000)
    f = number_state(6, p.n_max)
    h1 = survival_ahm1_analytic(f, p, grid).p
    h2 = survival_ahm2_analytic(f, p.with_g(-p.g), grid).p
    checks = [Check("symmetry.p_h1_g_vs_p_h2_minus_g.number6", float(np.abs(h1 - h2).max()), 1e-10)]

    flips = sign_flip_unitaries(p)
    for label, u in (("field", flips.parity_field), ("spin", flips.parity_spin)):
        worst = 0.0
        for builder in (build_rabi, build_jc):
            mapped = u.entries @ builder(p).entries @ u.entries.conj().T
            worst = max(worst, float(np.abs(mapped - builder(p.with_g(-p.g)).entries).max()))
        checks.append(Check(f"symmetry.parity_{label}_flips_g", worst, 1e-14))

    small = ModelParams(p.omega, p.g, 60, guard=p.guard)
    f = coherent_state(2.0, small.n_max)
    parity = (-1.0) ** np.arange(small.n_max + 1)
    f_flipped = FieldState(parity * f.amplitudes)
    plus = propagate_survival(build_rabi(small), JointState.excited(f), grid).p
    minus = propagate_survival(build_rabi(small.with_g(-small.g)), JointState.excited(f_flipped), grid).p
    checks.append(Check("symmetry.rabi_parity_propagation", float(np.abs(plus - minus).max()), 1e-12))

    margin = math.inf
    for g in (0.01, 0.05, 0.1):
        q = ModelParams(1.0, g, 10)
        for n in range(401):
            if g * math.sqrt(n + 1) >= 2 * q.omega:
                continue
            w1a, w2a, w3a = approx_frequencies(n, q)
            margin = min(margin, w3a - abs(w1a), w2a - w3a)
    checks.append(Check("symmetry.w1_slowest_margin", margin, 0.0, ">"))
    return checks


SUITES = {
    "algebra": (algebraic_suite, 10.0),
    "spectra": (spectral_suite, 10.0),
    "oracle": (oracle_suite, 60.0),
    "fig2": (fig2_suite, None),
    "fig4": (fig4_suite, None),
    "fig5": (fig5_suite, None),
    "symmetry": (symmetry_suite, None),
}


TOTAL_BUDGET_S = 180.0


def run_all(p: ModelParams | None = None):
    """Every suite in order; parameter-free figure suites use their presets."""
    start = time.perf_counter()
    checks = []
    for name, (suite, budget) in SUITES.items():
        if name in ("algebra", "spectra", "oracle", "symmetry"):
            checks.extend(suite(p, budget=budget))
        else:
            checks.extend(suite(budget=budget))
    checks.append(Check("verify.total_runtime_s", time.perf_counter() - start, TOTAL_BUDGET_S))
    return checks
