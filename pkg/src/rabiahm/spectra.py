"""Closed-form eigensystems of the approximating Hamiltonians.

H1 (rotated frame) couples |up, n> with |down, n+3>; H2 couples |down, n+1>
with |up, n+2>.  Each pair is a 2x2 problem; a handful of low-lying states
fall outside the pairing and are handled as special states.  Vectors are
returned in the lab (untransformed) frame, where H1 = U^dag H1~ U.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import CutoffError, DegenerateBranchError
from .fock import DOWN, UP, JointState, OperatorMatrix, basis_index
from .models import ModelParams

SQRT2 = math.sqrt(2.0)
MODELS = ("H1", "H2")


@dataclass(frozen=True)
class AhmCoefficients:
    n: int
    alpha_n: float
    mu_n: float
    eta_n: float
    delta_n: float
    a_n: float
    b_n: float


@dataclass(frozen=True)
class H2SpecialCoefficients:
    gamma: float
    epsilon: float
    c: float
    d: float


@dataclass(frozen=True)
class EigenRecord:
    """One eigenpair.

    ``transformed`` lists (joint index, amplitude) of the rotated-frame
    state; ``vector`` is the lab-frame state.  ``n``/``branch`` are set for
    pair states, ``None`` for special states.
    """

    label: str
    value: float
    transformed: tuple
    vector: JointState
    model: str
    n: Optional[int] = None
    branch: Optional[str] = None

    @property
    def is_special(self) -> bool:
        return self.n is None

    def residual(self, h: OperatorMatrix) -> float:
        v = self.vector.amplitudes
        return float(np.linalg.norm(h.entries @ v - self.value * v))


def coefficient_arrays(n, omega: float, g: float):
    """Vectorized (alpha, mu, eta, Delta, A, B) for H1 at photon numbers n.

    For eta < 0 the ratio mu / (Delta + eta) cancels catastrophically, so
    the equivalent (Delta - eta) / mu is used there.
    """
    n = np.asarray(n, dtype=float)
    mu = g * np.sqrt(n + 2)
    eta = 2 * omega - g * (np.sqrt(n + 1) + np.sqrt(n + 3))
    delta = np.hypot(mu, eta)
    if np.any((mu == 0) & (eta <= 0)):
        raise DegenerateBranchError("mu_n = 0 with eta_n <= 0: pair is degenerate")
    with np.errstate(divide="ignore", invalid="ignore"):
        alpha = np.where(eta >= 0, mu / (delta + eta), (delta - eta) / mu)
    norm = np.sqrt(1 + alpha * alpha)
    return alpha, mu, eta, delta, 1 / norm, alpha / norm


def eigenvalue_arrays(n, omega: float, g: float):
    """(kappa_minus, kappa_plus) for H1 at photon numbers n."""
    n = np.asarray(n, dtype=float)
    delta = coefficient_arrays(n, omega, g)[3]
    centre = (2 * n + 3) * omega + g * (np.sqrt(n + 1) - np.sqrt(n + 3))
    return 0.5 * (centre - delta), 0.5 * (centre + delta)


def _check_n(n):
    if n < 0:
        raise ValueError("n must be non-negative")


def ahm1_coefficients(n: int, p: ModelParams) -> AhmCoefficients:
    _check_n(n)
    p.require_resonant("H1 eigensystem")
    alpha, mu, eta, delta, a, b = (float(x) for x in coefficient_arrays(n, p.omega, p.g))
    return AhmCoefficients(n, alpha, mu, eta, delta, a, b)


def ahm1_eigenvalues(n: int, p: ModelParams):
    _check_n(n)
    p.require_resonant("H1 eigensystem")
    km, kp = eigenvalue_arrays(n, p.omega, p.g)
    return float(km), float(kp)


def ahm2_coefficients(n: int, p: ModelParams) -> AhmCoefficients:
    """C_n, D_n for H2, via C_n(g) = A_n(-g) and D_n(g) = B_n(-g)."""
    return ahm1_coefficients(n, p.with_g(-p.g))


def ahm2_eigenvalues(n: int, p: ModelParams):
    """(lambda_minus, lambda_plus) with lambda_n(g) = kappa_n(-g)."""
    return ahm1_eigenvalues(n, p.with_g(-p.g))


def h1_special_values(p: ModelParams):
    """k0, k1, k2."""
    return -0.5 * p.omega, 0.5 * p.omega - p.g, 1.5 * p.omega - SQRT2 * p.g


def h2_special_coefficients(p: ModelParams) -> H2SpecialCoefficients:
    g, w = p.g, p.omega
    eps = math.sqrt(g * g + SQRT2 * g * w + w * w)
    gamma = -g / (g + SQRT2 * (w + eps))
    norm = math.sqrt(1 + gamma * gamma)
    return H2SpecialCoefficients(gamma, eps, 1 / norm, gamma / norm)


def h2_special_values(p: ModelParams):
    """l-, l+, l0."""
    eps = h2_special_coefficients(p).epsilon
    base = p.omega + SQRT2 * p.g
    return 0.5 * (base - 2 * eps), 0.5 * (base + 2 * eps), 0.5 * p.omega + p.g


def _record(label, value, transformed, components, p, model, n=None, branch=None):
    tr = tuple((basis_index(s, k, p.n_max), float(amp)) for (s, k), amp in transformed)
    vec = JointState.from_components(components, p.n_max)
    return EigenRecord(label, float(value), tr, vec, model, n, branch)


def ahm1_specials(p: ModelParams):
    p.require_resonant("H1 eigensystem")
    k0, k1, k2 = h1_special_values(p)
    h = 1 / SQRT2
    return [
        _record("chi0", k0, [((DOWN, 0), 1.0)], {(DOWN, 0): 1.0}, p, "H1"),
        _record("chi1", k1, [((DOWN, 1), 1.0)], {(DOWN, 1): h, (UP, 0): -h}, p, "H1"),
        _record("chi2", k2, [((DOWN, 2), 1.0)], {(DOWN, 2): h, (UP, 1): -h}, p, "H1"),
    ]


def ahm2_specials(p: ModelParams):
    p.require_resonant("H2 eigensystem")
    sc = h2_special_coefficients(p)
    c, d = sc.c, sc.d
    l_minus, l_plus, l0 = h2_special_values(p)
    h = 1 / SQRT2
    return [
        _record(
            "xi-", l_minus,
            [((DOWN, 0), c), ((UP, 1), d)],
            {(DOWN, 0): c, (DOWN, 2): d * h, (UP, 1): d * h},
            p, "H2",
        ),
        _record(
            "xi+", l_plus,
            [((DOWN, 0), d), ((UP, 1), -c)],
            {(DOWN, 0): d, (DOWN, 2): -c * h, (UP, 1): -c * h},
            p, "H2",
        ),
        _record("xi0", l0, [((UP, 0), 1.0)], {(DOWN, 1): h, (UP, 0): h}, p, "H2"),
    ]


def _model(model):
    key = model.upper()
    if key not in MODELS:
        raise ValueError(f"model must be one of {MODELS}, got {model!r}")
    return key


def largest_pair_index(p: ModelParams) -> int:
    """Largest n whose pair states fit inside the guard band."""
    return p.interior_max - 3


def untransformed_pair_states(model: str, n: int, p: ModelParams):
    """(minus, plus) lab-frame eigenrecords of pair n; four components each."""
    model = _model(model)
    _check_n(n)
    if n + 3 > p.interior_max:
        raise CutoffError(
            f"pair n={n} reaches |n+3> = {n + 3} beyond interior n_max - guard = {p.interior_max}"
        )
    h = 1 / SQRT2
    if model == "H1":
        co = ahm1_coefficients(n, p)
        a, b = co.a_n, co.b_n
        km, kp = ahm1_eigenvalues(n, p)
        minus = _record(
            f"phi-({n})", km,
            [((UP, n), a), ((DOWN, n + 3), b)],
            {(DOWN, n + 1): a * h, (DOWN, n + 3): b * h, (UP, n + 2): -b * h, (UP, n): a * h},
            p, model, n, "-",
        )
        plus = _record(
            f"phi+({n})", kp,
            [((UP, n), b), ((DOWN, n + 3), -a)],
            {(DOWN, n + 1): b * h, (DOWN, n + 3): -a * h, (UP, n + 2): a * h, (UP, n): b * h},
            p, model, n, "+",
        )
    else:
        co = ahm2_coefficients(n, p)
        c, d = co.a_n, co.b_n
        lm, lp = ahm2_eigenvalues(n, p)
        minus = _record(
            f"psi-({n})", lm,
            [((DOWN, n + 1), c), ((UP, n + 2), d)],
            {(DOWN, n + 1): c * h, (DOWN, n + 3): d * h, (UP, n + 2): d * h, (UP, n): -c * h},
            p, model, n, "-",
        )
        plus = _record(
            f"psi+({n})", lp,
            [((DOWN, n + 1), d), ((UP, n + 2), -c)],
            {(DOWN, n + 1): d * h, (DOWN, n + 3): -c * h, (UP, n + 2): -c * h, (UP, n): -d * h},
            p, model, n, "+",
        )
    return minus, plus


def full_eigenbasis(model: str, p: ModelParams):
    """Specials followed by every admitted pair, ordered by (n, -, +).

    Pairs reaching past n_max - guard are left out, so this spans only the
    interior-supported part of the truncated space.
    """
    model = _model(model)
    records = list(ahm1_specials(p) if model == "H1" else ahm2_specials(p))
    for n in range(largest_pair_index(p) + 1):
        records.extend(untransformed_pair_states(model, n, p))
    return records


def _format_components(vector: JointState, tol=1e-15):
    d = vector.n_max + 1
    parts = []
    for i in np.nonzero(np.abs(vector.amplitudes) > tol)[0]:
        spin, n = divmod(int(i), d)
        amp = vector.amplitudes[i]
        tag = "up" if spin == UP else "dn"
        parts.append(f"{tag},{n}:{amp.real:+.12g}" if amp.imag == 0 else f"{tag},{n}:{amp.real:+.12g}{amp.imag:+.12g}j")
    return ";".join(parts)


def format_record(record: EigenRecord, residual: Optional[float] = None) -> str:
    """One dump line: label, eigenvalue (12 significant digits), [residual,] components."""
    fields = [record.label, f"{record.value:.12g}"]
    if residual is not None:
        fields.append(f"residual={residual:.3e}")
    fields.append(_format_components(record.vector))
    return " ".join(fields)


def dump_spectrum(records, hamiltonian: Optional[OperatorMatrix] = None) -> str:
    """Records sorted by eigenvalue, one per line."""
    lines = []
    for rec in sorted(records, key=lambda r: r.value):
        res = rec.residual(hamiltonian) if hamiltonian is not None else None
        lines.append(format_record(rec, res))
    return "\n".join(lines) + "\n"


def parse_spectrum_line(line: str):
    """Inverse of :func:`format_record`: (label, value, residual, {(spin, n): amp})."""
    fields = line.split()
    label, value = fields[0], float(fields[1])
    residual = None
    rest = fields[2:]
    if rest and rest[0].startswith("residual="):
        residual = float(rest[0].split("=", 1)[1])
        rest = rest[1:]
    comps = {}
    if rest:
        for item in rest[0].split(";"):
            key, amp = item.split(":")
            tag, n = key.split(",")
            comps[(UP if tag == "up" else DOWN, int(n))] = complex(amp) if "j" in amp else float(amp)
    return label, value, residual, comps
