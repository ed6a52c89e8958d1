import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from rabiahm.errors import UnsupportedConfigurationError
from rabiahm.fock import DOWN, UP, basis_index
from rabiahm.models import (
    ModelParams,
    build_h1_explicit,
    build_h2_explicit,
    build_jc,
    build_jc_diag,
    build_rabi,
    build_v,
    default_n_max_coherent,
    default_n_max_number,
    interior_max_abs,
    sign_flip_unitaries,
)
from rabiahm.transform import build_u, conjugate

couplings = st.floats(-0.5, 0.5, allow_nan=False)
cutoffs = st.integers(9, 30)


def test_params_validation():
    with pytest.raises(ValueError):
        ModelParams(omega=0.0, g=0.1, n_max=20)
    with pytest.raises(ValueError):
        ModelParams(omega=1.0, g=0.1, n_max=8, guard=5)
    assert ModelParams(1.0, 0.1, 9).nu == 1.0
    assert not ModelParams(1.0, 0.1, 20, nu=1.1).resonant


def test_default_cutoffs():
    assert default_n_max_number(6) == 46
    assert default_n_max_coherent(2.0) == 44
    assert default_n_max_coherent(8.0) == 164


def test_rabi_matrix_elements():
    p = ModelParams(omega=1.3, g=0.2, n_max=12, nu=0.9)
    h = build_rabi(p).entries
    i = lambda s, n: basis_index(s, n, p.n_max)
    assert h[i(UP, 3), i(UP, 3)] == pytest.approx(0.65 + 3 * 0.9)
    assert h[i(DOWN, 3), i(DOWN, 3)] == pytest.approx(-0.65 + 3 * 0.9)
    # rotating: sigma+ a |down, 4> = 2 |up, 3>
    assert h[i(UP, 3), i(DOWN, 4)] == pytest.approx(0.2 * 2)
    # counter-rotating: sigma+ a^dag |down, 3> = 2 |up, 4>
    assert h[i(UP, 4), i(DOWN, 3)] == pytest.approx(0.2 * 2)


@given(couplings, cutoffs, st.floats(0.5, 1.5))
def test_rabi_splits_exactly(g, n_max, nu):
    p = ModelParams(1.0, g, n_max, nu=nu)
    diff = build_rabi(p).entries - build_jc(p).entries - build_v(p).entries
    assert np.abs(diff).max() == 0


@given(couplings, cutoffs)
def test_builders_hermitian(g, n_max):
    p = ModelParams(1.0, g, n_max)
    for builder in (build_rabi, build_jc, build_v, build_jc_diag, build_h1_explicit, build_h2_explicit):
        assert builder(p).hermitian_defect() < 1e-12


def test_jc_diag_matches_dense_jc_spectrum():
    # the JC blocks close exactly under truncation except for |up, n_max>
    p = ModelParams(1.0, 0.1, 30)
    dense = np.linalg.eigvalsh(build_jc(p).entries)
    diag = np.sort(np.diag(build_jc_diag(p).entries).real)
    lower = diag[diag < p.interior_max]
    gaps = np.abs(lower[:, None] - dense[None, :]).min(axis=1)
    assert gaps.max() < 1e-12


@given(st.floats(0.0, 0.5), st.integers(12, 40))
def test_jc_diag_is_conjugated_jc(g, n_max):
    p = ModelParams(1.0, g, n_max)
    u = build_u(p)
    assert interior_max_abs(conjugate(u, build_jc(p)) - build_jc_diag(p), p) < 1e-10


@given(couplings, cutoffs)
def test_sign_flips_map_g_to_minus_g(g, n_max):
    p = ModelParams(1.0, g, n_max)
    flips = sign_flip_unitaries(p)
    for u in flips:
        for builder in (build_rabi, build_jc, build_v):
            mapped = u.entries @ builder(p).entries @ u.entries.conj().T
            assert np.abs(mapped - builder(p.with_g(-g)).entries).max() <= 1e-14


def test_parities_are_involutions():
    flips = sign_flip_unitaries(ModelParams(1.0, 0.1, 15))
    for u in flips:
        np.testing.assert_array_equal(u.entries @ u.entries, np.eye(u.dim))


def test_spin_flip_generator_as_written():
    # exp(i pi/2 (sigma_z + 1)) is -1 on up and +1 on down
    u = sign_flip_unitaries(ModelParams(1.0, 0.1, 9)).parity_spin.entries
    d = 10
    assert np.all(np.diag(u)[:d] == 1) and np.all(np.diag(u)[d:] == -1)
    sz = np.diag([-1.0, 1.0])
    expected = np.diag(np.exp(1j * math.pi / 2 * (np.diag(sz) + 1)))
    np.testing.assert_allclose(np.kron(expected, np.eye(d)), u, atol=1e-15)


def test_approximating_models_require_resonance():
    p = ModelParams(1.0, 0.1, 20, nu=1.05)
    with pytest.raises(UnsupportedConfigurationError):
        build_h1_explicit(p)
    with pytest.raises(UnsupportedConfigurationError):
        build_jc_diag(p)
    build_rabi(p)


def test_h1_h2_differ_only_through_approximating_terms():
    p = ModelParams(1.0, 0.0, 15)
    np.testing.assert_array_equal(build_h1_explicit(p).entries, build_jc(p).entries)
    np.testing.assert_array_equal(build_h2_explicit(p).entries, build_jc(p).entries)
