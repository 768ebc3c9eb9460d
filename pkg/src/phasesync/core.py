"""Finite-N mean-field oscillator dynamics: vector field, order parameters,
potential, and conserved quantities.

All functions here are pure; phases live on the real line (unwrapped) and
are reduced mod 2*pi only inside trig calls.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

# Below this coherence the mean-field angle is genuinely undefined and
# numerically ill-conditioned; callers fall back to pairwise forms.
R_MIN = 1e-8


class UndefinedPhaseError(ValueError):
    """An operation required the mean-field angle but R <= R_MIN."""


@dataclass
class OscillatorEnsemble:
    """State of N all-to-all coupled phase oscillators.

    phases : unwrapped angles (rad), one per oscillator
    freqs : natural frequencies (rad/time), same length
    coupling : K >= 0
    """

    phases: np.ndarray
    freqs: np.ndarray
    coupling: float = 1.0

    def __post_init__(self):
        self.phases = np.atleast_1d(np.asarray(self.phases, dtype=float)).copy()
        self.freqs = np.atleast_1d(np.asarray(self.freqs, dtype=float)).copy()
        self.coupling = float(self.coupling)
        if self.phases.ndim != 1 or self.phases.shape != self.freqs.shape:
            raise ValueError("phases and freqs must be 1-d arrays of equal length")
        if self.phases.size < 1:
            raise ValueError("need at least one oscillator")
        if not (np.all(np.isfinite(self.phases)) and np.all(np.isfinite(self.freqs))):
            raise ValueError("phases and freqs must be finite")
        if not np.isfinite(self.coupling) or self.coupling < 0.0:
            raise ValueError("coupling must be finite and >= 0")

    @property
    def n(self) -> int:
        return self.phases.size

    def with_phases(self, phases: np.ndarray) -> "OscillatorEnsemble":
        """Same frequencies and coupling, new phases."""
        return OscillatorEnsemble(phases, self.freqs, self.coupling)


@dataclass(frozen=True)
class OrderParameter:
    """Coherence r in [0,1] and mean-field angle phi in [-pi, pi).

    phi is None when r <= R_MIN (undefined at incoherence).
    """

    r: float
    phi: Optional[float]


def wrap_angle(x):
    """Reduce angle(s) to [-pi, pi)."""
    return (np.asarray(x) + np.pi) % (2.0 * np.pi) - np.pi


def circle_distance(a, b):
    """Shortest angular distance |a - b| on the circle, in [0, pi]."""
    return np.abs(wrap_angle(np.asarray(a) - np.asarray(b)))


def _order_parameter_from_z(z: complex) -> OrderParameter:
    r = float(abs(z))
    if r > R_MIN:
        return OrderParameter(r, float(wrap_angle(np.angle(z))))
    return OrderParameter(r, None)


def order_parameter(ens: OscillatorEnsemble) -> OrderParameter:
    """Modulus and argument of (1/N) sum_j exp(i theta_j)."""
    z = np.mean(np.exp(1j * ens.phases))
    return _order_parameter_from_z(z)


def weighted_order_parameter(weights: np.ndarray, thetas: np.ndarray) -> OrderParameter:
    """Order parameter of a weighted phase measure sum_j w_j exp(i theta_j)."""
    z = np.sum(np.asarray(weights) * np.exp(1j * np.asarray(thetas)))
    return _order_parameter_from_z(z)


def pairwise_rhs(ens: OscillatorEnsemble) -> np.ndarray:
    """O(N^2) form of the vector field: omega_i - (K/N) sum_j sin(theta_i - theta_j)."""
    diff = ens.phases[:, None] - ens.phases[None, :]
    return ens.freqs - (ens.coupling / ens.n) * np.sum(np.sin(diff), axis=1)


def finite_n_rhs(ens: OscillatorEnsemble) -> np.ndarray:
    """Angular velocities theta_dot_i of the finite-N system.

    Uses the O(N) mean-field form omega_i - K*r*sin(theta_i - phi) when the
    angle is well defined, the pairwise sum otherwise; the two agree.
    """
    op = order_parameter(ens)
    if op.phi is None:
        return pairwise_rhs(ens)
    return ens.freqs - ens.coupling * op.r * np.sin(ens.phases - op.phi)


def potential_u(ens: OscillatorEnsemble) -> float:
    """Gradient potential U = (1/2N) sum_{h,j} cos(theta_h - theta_j).

    Equals (N/2) * r^2; with K=1 and identical frequencies the dynamics is
    theta_dot_i = dU/dtheta_i (gradient ascent).
    """
    diff = ens.phases[:, None] - ens.phases[None, :]
    return float(np.sum(np.cos(diff)) / (2.0 * ens.n))


def mean_phase(ens: OscillatorEnsemble) -> float:
    """(1/N) sum_i theta_i of the unwrapped phases.

    Constant along exact solutions with zero-mean frequencies; grows at the
    mean frequency otherwise.
    """
    return float(np.mean(ens.phases))


def zero_mean_frequencies(ens: OscillatorEnsemble) -> OscillatorEnsemble:
    """Shift natural frequencies to zero mean (co-rotating frame)."""
    return OscillatorEnsemble(ens.phases, ens.freqs - np.mean(ens.freqs), ens.coupling)


def r_dot_identical(ens: OscillatorEnsemble) -> float:
    """Exact dR/dt for identical oscillators: K * R * mean(sin^2(theta - phi)).

    Non-negative, zero only at stationary states. Raises UndefinedPhaseError
    when R <= R_MIN.
    """
    op = order_parameter(ens)
    if op.phi is None:
        raise UndefinedPhaseError("R <= R_MIN: mean-field angle undefined")
    s = np.sin(ens.phases - op.phi)
    return float(ens.coupling * op.r * np.mean(s * s))


def r_phi_dot_nonidentical(meas, coupling: float) -> tuple[float, float]:
    """(dR/dt, R*dphi/dt) for a weighted phase measure with frequencies.

    dR/dt   = K*R * int sin^2(eta-phi) rho - int omega sin(eta-phi) f
    R*dphi/dt = -K*R * int sin cos rho + int omega cos(eta-phi) f

    Integrals are weighted particle sums over meas (needs .weights, .thetas,
    .omegas). Raises UndefinedPhaseError when R <= R_MIN.
    """
    w = np.asarray(meas.weights)
    thetas = np.asarray(meas.thetas)
    omegas = np.asarray(meas.omegas)
    op = weighted_order_parameter(w, thetas)
    if op.phi is None:
        raise UndefinedPhaseError("R <= R_MIN: mean-field angle undefined")
    s = np.sin(thetas - op.phi)
    c = np.cos(thetas - op.phi)
    r_dot = coupling * op.r * float(np.sum(w * s * s)) - float(np.sum(w * omegas * s))
    r_phi_dot = -coupling * op.r * float(np.sum(w * s * c)) + float(np.sum(w * omegas * c))
    return r_dot, r_phi_dot
