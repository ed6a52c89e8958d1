import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from rabiahm.errors import CutoffError, DegenerateBranchError
from rabiahm.fock import DOWN, UP, basis_index
from rabiahm.models import ModelParams, build_h1_explicit, build_h2_explicit
from rabiahm.spectra import (
    ahm1_coefficients,
    ahm1_eigenvalues,
    ahm2_coefficients,
    ahm2_eigenvalues,
    coefficient_arrays,
    dump_spectrum,
    full_eigenbasis,
    h1_special_values,
    h2_special_coefficients,
    largest_pair_index,
    parse_spectrum_line,
    untransformed_pair_states,
)
from rabiahm.transform import build_h1_tilde, build_h2_tilde

photon = st.integers(0, 2000)
coupling = st.floats(-3.0, 3.0, allow_nan=False).filter(lambda g: abs(g) > 1e-9)
omega = st.floats(0.1, 5.0)


@given(photon, coupling, omega)
def test_pair_coefficients_invariants(n, g, w):
    co = ahm1_coefficients(n, ModelParams(w, g, 10))
    assert abs(co.a_n**2 + co.b_n**2 - 1) <= 1e-14
    assert abs(co.delta_n - math.sqrt(co.mu_n**2 + co.eta_n**2)) <= 1e-14 * max(1.0, co.delta_n)
    assert co.delta_n > 0
    km, kp = ahm1_eigenvalues(n, ModelParams(w, g, 10))
    assert kp - km == pytest.approx(co.delta_n, rel=1e-12, abs=1e-12)


@given(photon, coupling)
def test_h2_symmetry_relations(n, g):
    p = ModelParams(1.0, g, 10)
    c2, c1 = ahm2_coefficients(n, p), ahm1_coefficients(n, p.with_g(-g))
    assert abs(c2.a_n - c1.a_n) <= 1e-14 and abs(c2.b_n - c1.b_n) <= 1e-14
    l2, k1 = ahm2_eigenvalues(n, p), ahm1_eigenvalues(n, p.with_g(-g))
    assert max(abs(l2[0] - k1[0]), abs(l2[1] - k1[1])) <= 1e-14


def _block_check(h_tilde, rows, vec_minus, vec_plus, lm, lp):
    block = h_tilde[np.ix_(rows, rows)]
    assert np.linalg.norm(block @ vec_minus - lm * vec_minus) < 1e-12
    assert np.linalg.norm(block @ vec_plus - lp * vec_plus) < 1e-12
    np.testing.assert_allclose(np.linalg.eigvalsh(block), [lm, lp], atol=1e-12)


@pytest.mark.parametrize("g", [0.1, -0.1, 0.7])
def test_closed_forms_against_2x2_blocks(g):
    p = ModelParams(1.0, g, 60)
    d = p.n_max + 1
    h1t = build_h1_tilde(p).entries
    h2t = build_h2_tilde(p).entries
    for n in range(largest_pair_index(p) + 1):
        a = ahm1_coefficients(n, p)
        _block_check(
            h1t, [d + n, n + 3],
            np.array([a.a_n, a.b_n]), np.array([a.b_n, -a.a_n]), *ahm1_eigenvalues(n, p),
        )
        c = ahm2_coefficients(n, p)
        _block_check(
            h2t, [n + 1, d + n + 2],
            np.array([c.a_n, c.b_n]), np.array([c.b_n, -c.a_n]), *ahm2_eigenvalues(n, p),
        )


def test_strong_coupling_branch_is_stable():
    # eta_n < 0 here, where mu / (Delta + eta) would cancel
    n = np.arange(0, 5000)
    alpha, mu, eta, delta, a, b = coefficient_arrays(n, 1.0, 2.5)
    assert np.all(eta < 0)
    assert np.abs(a * a + b * b - 1).max() <= 1e-14
    # alpha solves mu alpha^2 + 2 eta alpha - mu = 0 (2x2 eigenvector condition)
    scale = delta * (1 + alpha * alpha)
    assert np.abs((mu * alpha * alpha + 2 * eta * alpha - mu) / scale).max() < 1e-14
    naive = mu / (delta + eta)
    np.testing.assert_allclose(alpha, naive, rtol=1e-10)


def test_degenerate_branch_raises():
    with pytest.raises(DegenerateBranchError):
        coefficient_arrays(np.array([0.0]), -1.0, 0.0)


def test_h2_special_coefficients():
    for g in (0.01, 0.1, 0.5, -0.3):
        sc = h2_special_coefficients(ModelParams(1.0, g, 10))
        assert abs(sc.c**2 + sc.d**2 - 1) <= 1e-14
        assert abs(sc.epsilon - math.sqrt(g * g + math.sqrt(2) * g + 1)) <= 1e-14


def test_h1_special_values():
    k0, k1, k2 = h1_special_values(ModelParams(1.0, 0.1, 10))
    assert k0 == -0.5
    assert k1 == pytest.approx(0.4)
    assert k2 == pytest.approx(1.5 - 0.1 * math.sqrt(2))


@pytest.mark.parametrize("model, builder", [("H1", build_h1_explicit), ("H2", build_h2_explicit)])
def test_residuals_against_explicit_matrix(params, model, builder):
    h = builder(params)
    records = full_eigenbasis(model, params)
    assert max(r.residual(h) for r in records) < 1e-10


@pytest.mark.parametrize("model", ["H1", "H2"])
@given(g=st.floats(-0.6, 0.6).filter(lambda g: abs(g) > 1e-6))
def test_residuals_any_coupling(model, g):
    p = ModelParams(1.0, g, 30)
    h = (build_h1_explicit if model == "H1" else build_h2_explicit)(p)
    assert max(r.residual(h) for r in full_eigenbasis(model, p)) < 1e-10


@pytest.mark.parametrize("model", ["H1", "H2"])
def test_eigenbasis_orthonormal_and_counted(small, model):
    records = full_eigenbasis(model, small)
    assert len(records) == 2 * (largest_pair_index(small) + 1) + 3
    basis = np.column_stack([r.vector.amplitudes for r in records])
    np.testing.assert_allclose(basis.conj().T @ basis, np.eye(len(records)), atol=1e-10)


@pytest.mark.parametrize("model, builder", [("H1", build_h1_explicit), ("H2", build_h2_explicit)])
def test_matches_dense_eigensolver(small, model, builder):
    h = builder(small).entries
    dense_vals, dense_vecs = np.linalg.eigh(h)
    records = full_eigenbasis(model, small)
    # dense eigenvectors living in the interior-supported span
    span = np.column_stack([r.vector.amplitudes for r in records])
    captured = np.linalg.norm(span.conj().T @ dense_vecs, axis=0) ** 2
    interior = np.sort(dense_vals[captured > 1 - 1e-9])
    closed = np.sort([r.value for r in records])
    assert len(interior) == len(closed)
    assert np.abs(interior - closed).max() < 1e-9


def test_untransformed_pair_components(small):
    minus, plus = untransformed_pair_states("H1", 4, small)
    comps = {k: v for k, v in enumerate(minus.vector.amplitudes) if v != 0}
    d = small.n_max + 1
    assert set(comps) == {5, 7, d + 4, d + 6}
    assert minus.label == "phi-(4)" and plus.branch == "+"
    with pytest.raises(CutoffError):
        untransformed_pair_states("H1", largest_pair_index(small) + 1, small)


def test_up_vacuum_in_h2_eigenbasis(small):
    # rotated frame: |up,0> is exactly xi0
    xi0 = next(r for r in full_eigenbasis("H2", small) if r.label == "xi0")
    assert xi0.transformed == ((basis_index(UP, 0, small.n_max), 1.0),)
    # lab frame: half on xi0, the rest on the n = 0 pair, nothing on xi+-
    target = basis_index(UP, 0, small.n_max)
    weights = {
        r.label: abs(r.vector.amplitudes[target]) ** 2
        for r in full_eigenbasis("H2", small)
        if r.vector.amplitudes[target] != 0
    }
    assert set(weights) == {"xi0", "psi-(0)", "psi+(0)"}
    assert weights["xi0"] == pytest.approx(0.5, abs=1e-14)
    assert sum(weights.values()) == pytest.approx(1.0, abs=1e-14)


def test_weak_coupling_low_n_close_to_jc():
    n = np.arange(0, 41)
    a2 = coefficient_arrays(n, 1.0, 0.1)[4] ** 2
    assert np.all(a2[:7] >= 0.99)
    assert np.all(np.diff(a2) < 0)
    assert a2[20] > 0.95


@pytest.mark.xfail(strict=True, reason="A_n^2 drops below 0.99 from n = 7 on (A_20^2 = 0.957)")
def test_weak_coupling_threshold_to_n20():
    a2 = coefficient_arrays(np.arange(21), 1.0, 0.1)[4] ** 2
    assert np.all(a2 >= 0.99)


def test_spectral_gap_asymptotics():
    m = np.arange(50, 201)
    p = ModelParams(1.0, 0.1, 10)
    kp = np.array([ahm1_eigenvalues(k, p)[1] for k in range(203)])
    assert np.all(np.abs(kp[m + 2] - kp[m] - 2.0) < 3 * 0.1 / np.sqrt(m + 1))


def test_dump_roundtrip(small):
    h = build_h1_explicit(small)
    text = dump_spectrum(full_eigenbasis("H1", small), h)
    lines = text.splitlines()
    values = [parse_spectrum_line(line)[1] for line in lines]
    assert values == sorted(values)
    label, value, residual, comps = parse_spectrum_line(lines[0])
    assert label == "chi0" and value == -0.5
    assert comps == {(DOWN, 0): 1.0}
    assert all(parse_spectrum_line(line)[2] < 1e-10 for line in lines)
    _, _, _, comps = parse_spectrum_line(next(l for l in lines if l.startswith("phi-(3) ")))
    rec = untransformed_pair_states("H1", 3, small)[0]
    for (spin, n), amp in comps.items():
        assert amp == pytest.approx(rec.vector.amplitudes[basis_index(spin, n, small.n_max)].real, abs=1e-12)
