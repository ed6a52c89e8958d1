"""The unitary U that diagonalizes the resonant Jaynes-Cummings model, and
the counter-rotating coupling rewritten in the rotated frame.

U = 1/sqrt2 + K(n)(1 - sigma_z) + sigma+ L(n) a - sigma- a^dag L(n) with
K(n) = (sqrt2 - 1)/(2 sqrt2) delta_{n,0} and L(n) = 1/sqrt(2n + 2).
Operator products such as F(n) a^2 are built in the written order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError
from .fock import OperatorMatrix, boson_operators, spin_operators
from .models import ModelParams, build_jc_diag, build_v

SQRT2 = math.sqrt(2.0)
K0 = (SQRT2 - 1.0) / (2.0 * SQRT2)


def k_fn(n: int) -> float:
    if n < 0:
        raise ValueError("n must be non-negative")
    return K0 if n == 0 else 0.0


def l_fn(n: int) -> float:
    if n < 0:
        raise ValueError("n must be non-negative")
    return 1.0 / math.sqrt(2 * n + 2)


def _diag_of(fn, n_max, shift=0):
    return np.diag([fn(n + shift) for n in range(n_max + 1)])


def f1_values(n_max):
    return np.array([-l_fn(n) * l_fn(n + 2) for n in range(n_max + 1)])


def f2_values(n_max):
    return np.array([0.5 * (1.0 + 2.0 * SQRT2 * k_fn(n)) for n in range(n_max + 1)])


def f3_values(n_max):
    return np.array(
        [(l_fn(n) + l_fn(n + 1) * (1.0 + 2.0 * SQRT2 * k_fn(n))) / (2.0 * SQRT2) for n in range(n_max + 1)]
    )


def f4_values(n_max):
    return np.array(
        [(l_fn(n) - l_fn(n + 1) * (1.0 + 2.0 * SQRT2 * k_fn(n))) / (2.0 * SQRT2) for n in range(n_max + 1)]
    )


def build_u(p: ModelParams) -> OperatorMatrix:
    """Dense U in the joint basis.

    Exactly unitary on the guard-banded interior; the top Fock level loses
    its partner |down, n_max + 1> to truncation.
    """
    p.require_resonant("the diagonalizing unitary U")
    b = boson_operators(p.n_max)
    s = spin_operators()
    a = b.a.entries
    kk = _diag_of(k_fn, p.n_max)
    ll = _diag_of(l_fn, p.n_max)
    sz = s.sigma_z.entries
    u = (
        np.eye(p.dim) / SQRT2
        + np.kron(np.eye(2) - sz, kk)
        + np.kron(s.sigma_plus.entries, ll @ a)
        - np.kron(s.sigma_minus.entries, a.T @ ll)
    )
    return OperatorMatrix(u)


def conjugate(u: OperatorMatrix, h: OperatorMatrix) -> OperatorMatrix:
    """U H U^dag (U^-1 = U^dag holds on the interior)."""
    if u.dim != h.dim:
        raise DimensionError(f"dimension mismatch: U is {u.dim}, H is {h.dim}")
    m = u.entries @ h.entries @ u.entries.conj().T
    return OperatorMatrix(m, h.hermitian)


def conjugate_inverse(u: OperatorMatrix, h: OperatorMatrix) -> OperatorMatrix:
    """U^dag H U, taking a rotated-frame operator back to the lab frame."""
    return conjugate(u.dagger(), h)


@dataclass(frozen=True)
class VDecomposition:
    """U V U^dag split into three-photon (v1), co-rotating-like (v2) and
    two-photon (v3, v4) parts."""

    v1: OperatorMatrix
    v2: OperatorMatrix
    v3: OperatorMatrix
    v4: OperatorMatrix

    def total(self) -> OperatorMatrix:
        return self.v1 + self.v2 + self.v3 + self.v4


def decompose_v(p: ModelParams) -> VDecomposition:
    p.require_resonant("the rotated counter-rotating term")
    b = boson_operators(p.n_max)
    s = spin_operators()
    a = b.a.entries
    ad = b.a_dag.entries
    sp, sm, sz = s.sigma_plus.entries, s.sigma_minus.entries, s.sigma_z.entries
    a2 = a @ a
    a3 = a2 @ a
    ad2 = ad @ ad
    ad3 = ad2 @ ad
    f1 = np.diag(f1_values(p.n_max))
    f2 = np.diag(f2_values(p.n_max))
    f3 = np.diag(f3_values(p.n_max))
    f4 = np.diag(f4_values(p.n_max))
    g = p.g
    v1 = g * (np.kron(sp, f1 @ a3) + np.kron(sm, ad3 @ f1))
    v2 = g * (np.kron(sp, ad @ f2) + np.kron(sm, f2 @ a))
    v3 = g * np.kron(sz, f3 @ a2 + ad2 @ f3)
    v4 = g * np.kron(np.eye(2), f4 @ a2 + ad2 @ f4)
    return VDecomposition(*(OperatorMatrix(v, hermitian=True) for v in (v1, v2, v3, v4)))


def rotated_v(p: ModelParams) -> OperatorMatrix:
    return conjugate(build_u(p), build_v(p))


def build_h1_tilde(p: ModelParams) -> OperatorMatrix:
    """Rotated-frame H1: diagonal JC part plus the three-photon term."""
    return build_jc_diag(p) + decompose_v(p).v1


def build_h2_tilde(p: ModelParams) -> OperatorMatrix:
    return build_jc_diag(p) + decompose_v(p).v2


def h1_by_conjugation(p: ModelParams) -> OperatorMatrix:
    return conjugate_inverse(build_u(p), build_h1_tilde(p))


def h2_by_conjugation(p: ModelParams) -> OperatorMatrix:
    return conjugate_inverse(build_u(p), build_h2_tilde(p))


def effective_frequencies(n: int, s: int, p: ModelParams):
    """Interaction-picture rates (w1, w2, w3) at photon number n, sigma_z = s.

    w1 belongs to sigma- (a^dag)^3, w2 to sigma+ a^dag, w3 to (a^dag)^2.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    if s not in (-1, 1):
        raise ValueError("s must be -1 (down) or +1 (up)")
    w, g = p.omega, p.g
    r0, r1, r2, r3 = (math.sqrt(n + k) for k in range(4))
    w1 = 2 * w - g * (r3 + r1)
    w2 = 2 * w + g * (r2 + r0)
    w3 = 2 * w + g * (r0 - r2) + 0.5 * g * (s + 1) * (r3 + r2 - r1 - r0)
    return w1, w2, w3


def approx_frequencies(n: int, p: ModelParams):
    """Large-n forms of (w1, w2, w3) with the square-root sums collapsed."""
    root = math.sqrt(n + 1)
    return 2 * (p.omega - p.g * root), 2 * (p.omega + p.g * root), 2 * p.omega
