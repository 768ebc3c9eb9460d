"""Classification of states against the stationary taxonomy: incoherent,
two-cluster (majority/antipode), or not stationary; plus the reduced
three-oscillator threshold dynamics.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import (
    OscillatorEnsemble,
    circle_distance,
    order_parameter,
    weighted_order_parameter,
    wrap_angle,
)

CLASS_R_TOL = 1e-6  # below this coherence a state counts as incoherent
ANGLE_TOL = 1e-3  # rad, default cluster half-width
MASS_TOL = 1e-3  # default unaccounted-mass allowance for measures


@dataclass(frozen=True)
class StationaryClass:
    """Tagged classification outcome.

    kind is one of "incoherent", "clustered", "not_stationary".
    For clustered finite ensembles, n_at_phi oscillators sit at phi_star and
    k = N - n_at_phi at the antipode (n_at_phi > k); c1, c2 are the
    corresponding mass fractions, also filled for measures.
    """

    kind: str
    phi_star: Optional[float] = None
    n_at_phi: Optional[int] = None
    k: Optional[int] = None
    c1: Optional[float] = None
    c2: Optional[float] = None

    @property
    def is_clustered(self) -> bool:
        return self.kind == "clustered"


INCOHERENT = StationaryClass(kind="incoherent")
NOT_STATIONARY = StationaryClass(kind="not_stationary")


def classify_finite(ens: OscillatorEnsemble, angle_tol: float = ANGLE_TOL) -> StationaryClass:
    """Classify a finite ensemble configuration.

    Clustered requires every phase within angle_tol (mod 2pi) of phi_star
    or its antipode, with the majority at phi_star; phi_star is taken from
    the order parameter.
    """
    if not 0.0 < angle_tol < np.pi / 4:
        raise ValueError("angle_tol must lie in (0, pi/4)")
    op = order_parameter(ens)
    if op.r <= CLASS_R_TOL:
        return INCOHERENT
    near_main = circle_distance(ens.phases, op.phi) < angle_tol
    near_anti = circle_distance(ens.phases, op.phi + np.pi) < angle_tol
    if not np.all(near_main | near_anti):
        return NOT_STATIONARY
    n_main = int(np.sum(near_main))
    k = ens.n - n_main
    if n_main <= k:
        return NOT_STATIONARY
    return StationaryClass(
        kind="clustered",
        phi_star=float(wrap_angle(op.phi)),
        n_at_phi=n_main,
        k=k,
        c1=n_main / ens.n,
        c2=k / ens.n,
    )


def classify_measure(meas, angle_tol: float = ANGLE_TOL, mass_tol: float = MASS_TOL) -> StationaryClass:
    """Classify a weighted phase measure (needs .weights and .thetas).

    Clustered requires the mass within angle_tol of phi_star (c1) and of
    its antipode (c2) to cover all but mass_tol of the total, with
    strictly c1 > c2; a tie is NotStationary.
    """
    if angle_tol <= 0 or mass_tol <= 0:
        raise ValueError("tolerances must be positive")
    w = np.asarray(meas.weights)
    thetas = np.asarray(meas.thetas)
    op = weighted_order_parameter(w, thetas)
    if op.r <= CLASS_R_TOL:
        return INCOHERENT
    c1 = float(np.sum(w[circle_distance(thetas, op.phi) < angle_tol]))
    c2 = float(np.sum(w[circle_distance(thetas, op.phi + np.pi) < angle_tol]))
    if c1 + c2 <= 1.0 - mass_tol or c1 <= c2:
        return NOT_STATIONARY
    return StationaryClass(
        kind="clustered",
        phi_star=float(wrap_angle(op.phi)),
        c1=c1,
        c2=c2,
    )


def three_oscillator_rate(delta: float) -> float:
    """Reduced rate for the symmetric 3-oscillator family
    (delta, -delta, pi): d(delta)/dt = (2/3) sin(delta) (1/2 - cos(delta)).
    """
    return (2.0 / 3.0) * np.sin(delta) * (0.5 - np.cos(delta))


def three_oscillator_limit(
    delta0: float,
    t_max: float = 200.0,
    dt: float = 0.01,
    stationarity_tol: float = 1e-9,
) -> float:
    """Integrate the reduced 3-oscillator ODE and return the reached delta.

    Limits: 0 for delta0 in [0, pi/3), pi/3 at the threshold, pi for
    delta0 in (pi/3, pi]. Warns if the horizon is too short to be
    stationary.
    """
    if not 0.0 < delta0 <= np.pi:
        raise ValueError("delta0 must lie in (0, pi]")
    d = float(delta0)
    n_steps = int(round(t_max / dt))
    for _ in range(n_steps):
        k1 = three_oscillator_rate(d)
        k2 = three_oscillator_rate(d + 0.5 * dt * k1)
        k3 = three_oscillator_rate(d + 0.5 * dt * k2)
        k4 = three_oscillator_rate(d + dt * k3)
        d += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    if abs(three_oscillator_rate(d)) > stationarity_tol:
        warnings.warn(
            f"horizon t_max={t_max:g} too short: |rate|="
            f"{abs(three_oscillator_rate(d)):.2e} at the end",
            stacklevel=2,
        )
    return d
