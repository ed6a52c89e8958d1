"""Dense Hamiltonians for the Rabi model, Jaynes-Cummings model and the two
approximating models H1, H2 (written out in the untransformed picture).

Units: hbar = 1, energies in the same units as ``omega``.

The explicit H1/H2 builders below deliberately avoid ``rabiahm.transform``;
agreement between the two routes is one of the package's main checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import NamedTuple, Optional

import numpy as np

from .errors import UnsupportedConfigurationError
from .fock import OperatorMatrix, boson_operators, spin_operators

DEFAULT_GUARD = 5


@dataclass(frozen=True)
class ModelParams:
    """Physical parameters plus Fock truncation controls.

    ``nu`` defaults to ``omega``; the approximating models only exist at
    resonance.  ``guard`` is the number of top Fock levels excluded from
    identity checks because truncation spoils them there.
    """

    omega: float
    g: float
    n_max: int
    nu: Optional[float] = None
    guard: int = DEFAULT_GUARD

    def __post_init__(self):
        if self.nu is None:
            object.__setattr__(self, "nu", self.omega)
        if not self.omega > 0:
            raise ValueError(f"omega must be positive, got {self.omega}")
        if self.guard < 0:
            raise ValueError("guard must be non-negative")
        if self.n_max < self.guard + 4:
            raise ValueError(
                f"n_max={self.n_max} too small: need n_max >= guard + 4 = {self.guard + 4}"
            )

    @property
    def resonant(self) -> bool:
        return self.nu == self.omega

    @property
    def interior_max(self) -> int:
        """Largest photon number inside the guard band."""
        return self.n_max - self.guard

    @property
    def dim(self) -> int:
        return 2 * (self.n_max + 1)

    def with_g(self, g: float) -> "ModelParams":
        return replace(self, g=g)

    def require_resonant(self, what: str) -> None:
        if not self.resonant:
            raise UnsupportedConfigurationError(
                f"{what} is only defined at resonance (nu == omega); got nu={self.nu}, omega={self.omega}"
            )


def default_n_max_number(n0: int) -> int:
    return n0 + 40


def default_n_max_coherent(alpha: complex) -> int:
    r = abs(alpha)
    return math.ceil(r * r + 10 * r + 20)


@dataclass(frozen=True)
class HamiltonianMatrix(OperatorMatrix):
    """Hermitian matrix in the spin-major joint basis, tagged with its origin."""

    name: str = ""
    params: Optional[ModelParams] = None

    @property
    def n_max(self) -> int:
        return self.dim // 2 - 1


class SignFlips(NamedTuple):
    parity_field: OperatorMatrix
    parity_spin: OperatorMatrix


def _hamiltonian(entries, name, p):
    return HamiltonianMatrix(entries, hermitian=True, name=name, params=p)


def _blocks(n_max):
    b = boson_operators(n_max)
    s = spin_operators()
    return (
        b.a.entries,
        b.n_hat.entries,
        b.vac_proj.entries,
        s.sigma_plus.entries,
        s.sigma_minus.entries,
        s.sigma_z.entries,
    )


def _free_part(p, n_hat, sz):
    field_eye = np.eye(p.n_max + 1)
    return 0.5 * p.omega * np.kron(sz, field_eye) + p.nu * np.kron(np.eye(2), n_hat)


def build_rabi(p: ModelParams) -> HamiltonianMatrix:
    a, n_hat, _, sp, sm, sz = _blocks(p.n_max)
    h = _free_part(p, n_hat, sz) + p.g * np.kron(sp + sm, a + a.T)
    return _hamiltonian(h, "RH", p)


def build_jc(p: ModelParams) -> HamiltonianMatrix:
    a, n_hat, _, sp, sm, sz = _blocks(p.n_max)
    h = _free_part(p, n_hat, sz) + p.g * (np.kron(sp, a) + np.kron(sm, a.T))
    return _hamiltonian(h, "JCM", p)


def build_v(p: ModelParams) -> HamiltonianMatrix:
    """Counter-rotating coupling g(sigma+ a^dag + sigma- a)."""
    a, _, _, sp, sm, _ = _blocks(p.n_max)
    h = p.g * (np.kron(sp, a.T) + np.kron(sm, a))
    return _hamiltonian(h, "V", p)


def build_jc_diag(p: ModelParams) -> HamiltonianMatrix:
    """Diagonal form of H_JC in the basis rotated by U (resonant only)."""
    p.require_resonant("diagonalized H_JC")
    n = np.arange(p.n_max + 1, dtype=float)
    diag = []
    for s in (-1.0, 1.0):  # spin-major: down block first
        diag.append(
            0.5 * p.omega * s
            + p.omega * n
            + 0.5 * p.g * ((s + 1) * np.sqrt(n + 1) + (s - 1) * np.sqrt(n))
        )
    return _hamiltonian(np.diag(np.concatenate(diag)), "JC_diag", p)


def _ell(n_max, shift=0):
    # L(n + shift) = 1 / sqrt(2(n + shift) + 2), one value per Fock index
    n = np.arange(n_max + 1, dtype=float)
    return np.diag(1.0 / np.sqrt(2.0 * (n + shift) + 2.0))


def _approximating(p, sign, name):
    p.require_resonant(f"approximating Hamiltonian {name}")
    a, _, vac, sp, sm, sz = _blocks(p.n_max)
    one = np.eye(p.n_max + 1)
    s_one = np.eye(2)
    g = p.g
    c = g / (4.0 * math.sqrt(2.0))
    a2 = a @ a
    a3 = a2 @ a
    ell0, ell1, ell2 = _ell(p.n_max), _ell(p.n_max, 1), _ell(p.n_max, 2)
    # sign=+1 gives H1, sign=-1 gives H2
    x = (
        -0.5 * g * np.kron(sp, ell0 @ ell2 @ a3)
        + 0.25 * g * np.kron(sm, (one - sign * vac) @ a)
        + sign * c * np.kron(s_one + sz, ell0 @ a2)
        - sign * c * np.kron(s_one - sz, (one - sign * vac) @ ell1 @ a2)
    )
    h = build_jc(p).entries + x + x.conj().T
    return _hamiltonian(h, name, p)


def build_h1_explicit(p: ModelParams) -> HamiltonianMatrix:
    return _approximating(p, +1, "H1")


def build_h2_explicit(p: ModelParams) -> HamiltonianMatrix:
    return _approximating(p, -1, "H2")


def sign_flip_unitaries(p: ModelParams) -> SignFlips:
    """Field parity exp(i pi a^dag a) and spin flip exp(i pi/2 (sigma_z + 1)).

    Both are embedded in the joint space.  The spin generator is used as
    written, so it acts as +1 on down and -1 on up with no extra phase;
    conjugation does not see the phase anyway.
    """
    parity = (-1.0) ** np.arange(p.n_max + 1)
    field = np.kron(np.eye(2), np.diag(parity))
    # exp(i pi/2 (s + 1)) = (-1)**((s + 1) / 2) for s = -1 (down), +1 (up)
    spin_phase = (-1.0) ** ((np.array([-1, 1]) + 1) // 2)
    spin = np.kron(np.diag(spin_phase), np.eye(p.n_max + 1))
    return SignFlips(OperatorMatrix(field, hermitian=True), OperatorMatrix(spin, hermitian=True))


def interior_indices(p: ModelParams) -> np.ndarray:
    """Joint-basis indices with n <= n_max - guard, both spin sectors."""
    n = np.arange(p.interior_max + 1)
    return np.concatenate([n, n + p.n_max + 1])


def interior_max_abs(m, p: ModelParams) -> float:
    """max |P M P| with P the guard-banded interior projector."""
    entries = m.entries if isinstance(m, OperatorMatrix) else np.asarray(m)
    idx = interior_indices(p)
    return float(np.abs(entries[np.ix_(idx, idx)]).max())
