"""Truncated Fock space for one bosonic mode coupled to a two-level atom.

Joint states use spin-major ordering: every ``|down, n>`` (n = 0..n_max)
precedes every ``|up, n>``, so the flat index is ``s * (n_max + 1) + n``
with ``s = 0`` for down and ``s = 1`` for up.  All operator builders in the
package follow this layout.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.special import gammaln
from scipy.stats import poisson

from .errors import CutoffError, DimensionError, InsufficientCutoffError, NotHermitianError

DOWN = 0
UP = 1

NORM_TOL = 1e-12
HERMITIAN_TOL = 1e-12
COHERENT_TAIL_TOL = 1e-12


def _frozen(array, dtype=complex):
    out = np.array(array, dtype=dtype, copy=True)
    out.setflags(write=False)
    return out


def basis_index(spin: int, n: int, n_max: int) -> int:
    """Flat index of ``|spin, n>`` in the joint basis."""
    if spin not in (DOWN, UP):
        raise ValueError(f"spin must be DOWN (0) or UP (1), got {spin!r}")
    if not 0 <= n <= n_max:
        raise CutoffError(f"photon number {n} outside 0..{n_max}")
    return spin * (n_max + 1) + n


@dataclass(frozen=True)
class FieldState:
    """Normalized amplitudes ``<n|f>`` for n = 0..n_max."""

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = _frozen(self.amplitudes)
        if amps.ndim != 1 or amps.size < 1:
            raise DimensionError("field amplitudes must be a non-empty vector")
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"field state not normalized (norm={norm!r})")
        object.__setattr__(self, "amplitudes", amps)

    @property
    def n_max(self) -> int:
        return self.amplitudes.size - 1

    @property
    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def mean_photon_number(self) -> float:
        return float(np.dot(np.arange(self.n_max + 1), self.probabilities))

    def support_max(self, tol: float = NORM_TOL) -> int:
        """Largest n whose tail mass from n+1 upward is at least ``tol``."""
        tail = np.cumsum(self.probabilities[::-1])[::-1]
        above = np.nonzero(tail >= tol)[0]
        return int(above[-1]) if above.size else 0

    def resized(self, n_max: int) -> "FieldState":
        """Pad with zeros, or cut off an (already negligible) tail."""
        if n_max >= self.n_max:
            amps = np.zeros(n_max + 1, dtype=complex)
            amps[: self.n_max + 1] = self.amplitudes
            return FieldState(amps)
        dropped = float(self.probabilities[n_max + 1 :].sum())
        if dropped > NORM_TOL:
            raise CutoffError(f"cutting to n_max={n_max} drops mass {dropped:.3e}")
        amps = self.amplitudes[: n_max + 1]
        return FieldState(amps / np.linalg.norm(amps))


@dataclass(frozen=True)
class JointState:
    """Amplitudes over {down, up} x {|0>..|n_max>} in spin-major order."""

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = _frozen(self.amplitudes)
        if amps.ndim != 1 or amps.size < 2 or amps.size % 2:
            raise DimensionError("joint amplitudes must have even length 2(n_max+1)")
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"joint state not normalized (norm={norm!r})")
        object.__setattr__(self, "amplitudes", amps)

    @property
    def n_max(self) -> int:
        return self.amplitudes.size // 2 - 1

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def spin_block(self, spin: int) -> np.ndarray:
        d = self.n_max + 1
        return self.amplitudes[spin * d : (spin + 1) * d]

    @classmethod
    def product(cls, spin: int, field: FieldState) -> "JointState":
        d = field.n_max + 1
        amps = np.zeros(2 * d, dtype=complex)
        amps[spin * d : (spin + 1) * d] = field.amplitudes
        return cls(amps)

    @classmethod
    def excited(cls, field: FieldState) -> "JointState":
        """``|up> (x) |f>``, the initial state of every survival run."""
        return cls.product(UP, field)

    @classmethod
    def from_components(cls, components, n_max: int) -> "JointState":
        """Build from ``{(spin, n): amplitude}``; no renormalization."""
        amps = np.zeros(2 * (n_max + 1), dtype=complex)
        for (spin, n), amp in components.items():
            amps[basis_index(spin, n, n_max)] += amp
        return cls(amps)


@dataclass(frozen=True)
class OperatorMatrix:
    entries: np.ndarray
    hermitian: bool = False

    def __post_init__(self):
        m = _frozen(self.entries)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionError(f"operator must be square, got shape {m.shape}")
        if self.hermitian:
            defect = np.abs(m - m.conj().T).max()
            if defect >= HERMITIAN_TOL:
                raise NotHermitianError(f"max |M - M^dag| = {defect:.3e}")
        object.__setattr__(self, "entries", m)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def dagger(self) -> "OperatorMatrix":
        return OperatorMatrix(self.entries.conj().T, self.hermitian)

    def hermitian_defect(self) -> float:
        return float(np.abs(self.entries - self.entries.conj().T).max())

    def _check_dim(self, other):
        if other.dim != self.dim:
            raise DimensionError(f"dimension mismatch: {self.dim} vs {other.dim}")

    def __matmul__(self, other):
        if isinstance(other, OperatorMatrix):
            self._check_dim(other)
            return OperatorMatrix(self.entries @ other.entries)
        return NotImplemented

    def __add__(self, other):
        if isinstance(other, OperatorMatrix):
            self._check_dim(other)
            return OperatorMatrix(self.entries + other.entries, self.hermitian and other.hermitian)
        return NotImplemented

    def __sub__(self, other):
        if isinstance(other, OperatorMatrix):
            self._check_dim(other)
            return OperatorMatrix(self.entries - other.entries, self.hermitian and other.hermitian)
        return NotImplemented

    def __neg__(self):
        return OperatorMatrix(-self.entries, self.hermitian)

    def __rmul__(self, scalar):
        if np.isscalar(scalar):
            real = np.isrealobj(scalar) or np.imag(scalar) == 0
            return OperatorMatrix(scalar * self.entries, self.hermitian and real)
        return NotImplemented


class BosonOperators(NamedTuple):
    a: OperatorMatrix
    a_dag: OperatorMatrix
    n_hat: OperatorMatrix
    vac_proj: OperatorMatrix


class SpinOperators(NamedTuple):
    sigma_plus: OperatorMatrix
    sigma_minus: OperatorMatrix
    sigma_z: OperatorMatrix


def number_state(n: int, n_max: int) -> FieldState:
    if n < 0:
        raise ValueError("photon number must be non-negative")
    if n > n_max:
        raise CutoffError(f"number state |{n}> needs n_max >= {n}, got {n_max}")
    amps = np.zeros(n_max + 1, dtype=complex)
    amps[n] = 1.0
    return FieldState(amps)


def coherent_tail_mass(alpha: complex, n_max: int) -> float:
    """Poisson mass the untruncated coherent state puts above n_max."""
    return float(poisson.sf(n_max, abs(alpha) ** 2))


def minimum_coherent_cutoff(alpha: complex, tol: float = COHERENT_TAIL_TOL) -> int:
    mean = abs(alpha) ** 2
    if mean == 0.0:
        return 0
    k = max(int(poisson.isf(tol, mean)) - 2, 0)
    while poisson.sf(k, mean) >= tol:
        k += 1
    while k > 0 and poisson.sf(k - 1, mean) < tol:
        k -= 1
    return k


def coherent_state(alpha: complex, n_max: int) -> FieldState:
    """Truncated coherent state, renormalized after truncation.

    Amplitudes are accumulated in log space so that n ~ 200 does not
    overflow the factorial.
    """
    tail = coherent_tail_mass(alpha, n_max)
    if tail >= COHERENT_TAIL_TOL:
        need = minimum_coherent_cutoff(alpha)
        raise InsufficientCutoffError(
            f"coherent state alpha={alpha} loses tail mass {tail:.3e} at n_max={n_max}; "
            f"use n_max >= {need}",
            need,
        )
    alpha = complex(alpha)
    n = np.arange(n_max + 1)
    if alpha == 0:
        amps = (n == 0).astype(complex)
    else:
        log_amp = -0.5 * abs(alpha) ** 2 + n * np.log(alpha) - 0.5 * gammaln(n + 1)
        amps = np.exp(log_amp)
    return FieldState(amps / np.linalg.norm(amps))


def boson_operators(n_max: int) -> BosonOperators:
    """a, a^dag, n and |0><0| on 0..n_max.

    Truncation leaves [a, a^dag] = I everywhere except the (n_max, n_max)
    entry, which equals -n_max.
    """
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    a = np.diag(np.sqrt(np.arange(1, n_max + 1, dtype=float)), k=1)
    vac = np.zeros((n_max + 1, n_max + 1))
    vac[0, 0] = 1.0
    return BosonOperators(
        a=OperatorMatrix(a),
        a_dag=OperatorMatrix(a.T),
        n_hat=OperatorMatrix(np.diag(np.arange(n_max + 1, dtype=float)), hermitian=True),
        vac_proj=OperatorMatrix(vac, hermitian=True),
    )


def spin_operators() -> SpinOperators:
    # basis order (down, up)
    sp = np.array([[0.0, 0.0], [1.0, 0.0]])
    return SpinOperators(
        sigma_plus=OperatorMatrix(sp),
        sigma_minus=OperatorMatrix(sp.T),
        sigma_z=OperatorMatrix(np.diag([-1.0, 1.0]), hermitian=True),
    )


def spin_identity() -> OperatorMatrix:
    return OperatorMatrix(np.eye(2), hermitian=True)


def field_identity(n_max: int) -> OperatorMatrix:
    return OperatorMatrix(np.eye(n_max + 1), hermitian=True)


def kron_embed(spin_op: OperatorMatrix, field_op: OperatorMatrix) -> OperatorMatrix:
    if spin_op.dim != 2:
        raise DimensionError(f"spin operator must be 2x2, got {spin_op.dim}")
    return OperatorMatrix(
        np.kron(spin_op.entries, field_op.entries),
        spin_op.hermitian and field_op.hermitian,
    )


def apply(op: OperatorMatrix, state: JointState) -> np.ndarray:
    """Raw vector ``op |state>`` (not renormalized, hence not a JointState)."""
    if op.dim != state.dim:
        raise DimensionError(f"operator dim {op.dim} vs state dim {state.dim}")
    return op.entries @ state.amplitudes


def inner(x: JointState, y: JointState) -> complex:
    """<x|y>, conjugate-linear in x."""
    if x.dim != y.dim:
        raise DimensionError(f"state dims differ: {x.dim} vs {y.dim}")
    return complex(np.vdot(x.amplitudes, y.amplitudes))


def expectation(op: OperatorMatrix, x: JointState) -> complex:
    return complex(np.vdot(x.amplitudes, apply(op, x)))
