"""Partially synchronized stationary states of the non-identical mean-field
model: self-consistency roots, critical coupling, stationary densities.

The self-consistency equation is K R^2 = int sqrt((K R)^2 - omega^2) g(omega)
d omega, real only where K R covers the support of g, so the root search is
restricted to R >= max|omega| / K.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional

import numpy as np
from scipy.optimize import brentq

from .freqdist import Dirac, FrequencyDistribution
from .kinetic import AtomList

ROOT_TOL = 1e-10  # residual bound for every reported root
DEFAULT_GRID = 4096  # R-scan resolution; close root pairs near onset
K_MAX = 100.0  # bracket cap for the critical-coupling search
_FAST_NODES = 2048  # midpoint nodes for the vectorized scan residual


class BracketNotFoundError(RuntimeError):
    """No supercritical coupling found below the K_MAX cap."""


@dataclass(frozen=True)
class SelfConsistencyResult:
    roots: List[float]
    largest: Optional[float]
    k_supercritical: bool


def generalized_residual(
    g_plus: FrequencyDistribution,
    k: float,
    r: float,
    g_minus: Optional[FrequencyDistribution] = None,
    minus_mass: float = 0.0,
) -> float:
    """Residual int sqrt((KR)^2 - omega^2) (g+ - g-) - K R^2.

    g+ carries mass (1 - minus_mass) and g- carries minus_mass; with
    g_minus=None this is the stable-branch equation.
    """
    a2 = (k * r) ** 2
    integrand = lambda w: np.sqrt(np.maximum(a2 - w * w, 0.0))
    val = (1.0 - minus_mass) * g_plus.expect(integrand)
    if g_minus is not None and minus_mass > 0.0:
        val -= minus_mass * g_minus.expect(integrand)
    return val - k * r * r


def self_consistency_residual(g: FrequencyDistribution, k: float, r: float) -> float:
    """Stable-branch residual F(R) under adaptive quadrature."""
    return generalized_residual(g, k, r)


def _residual_on_grid(g: FrequencyDistribution, k: float, r_grid: np.ndarray) -> np.ndarray:
    """Vectorized F on an R grid via a fixed midpoint rule (scan only;
    every candidate root is re-polished with adaptive quadrature)."""
    nodes, weights = g.quadrature(_FAST_NODES)
    a2 = (k * r_grid) ** 2
    sq = np.sqrt(np.maximum(a2[:, None] - nodes[None, :] ** 2, 0.0))
    return sq @ weights - k * r_grid * r_grid


def self_consistency_roots(
    g: FrequencyDistribution,
    k: float,
    grid: int = DEFAULT_GRID,
) -> SelfConsistencyResult:
    """All roots R in (0, 1] of the self-consistency equation at coupling k.

    Scans F on a uniform grid over [max|omega|/k, 1], bisects every sign
    change, and verifies each root against the adaptive-quadrature residual.
    An empty root list (subcritical k) is a normal outcome.
    """
    if k <= 0:
        raise ValueError("coupling must be > 0")
    wmax = g.max_abs_omega
    r_lo = wmax / k
    if r_lo > 1.0:
        raise ValueError("support of g too wide: max|omega|/K > 1 admits no R")
    r_lo = max(r_lo, 1e-12)
    r_grid = np.linspace(r_lo, 1.0, grid)
    f_grid = _residual_on_grid(g, k, r_grid)

    roots: List[float] = []

    def polish(a: float, b: float) -> float:
        return float(brentq(lambda r: self_consistency_residual(g, k, r), a, b, xtol=1e-14, rtol=1e-15))

    sign = np.sign(f_grid)
    for i in range(grid - 1):
        if sign[i] == 0.0:
            continue
        if sign[i + 1] == 0.0 or sign[i] * sign[i + 1] < 0:
            fa = self_consistency_residual(g, k, r_grid[i])
            fb = self_consistency_residual(g, k, r_grid[i + 1])
            if fa == 0.0:
                roots.append(float(r_grid[i]))
            elif fb == 0.0:
                roots.append(float(r_grid[i + 1]))
            elif fa * fb < 0:
                roots.append(polish(r_grid[i], r_grid[i + 1]))
    # endpoint roots the sign scan cannot bracket (e.g. R = 1 for Dirac g);
    # the lower endpoint only counts when set by the support condition,
    # otherwise F ~ K R vanishes there spuriously as R -> 0
    endpoints = [r_grid[-1]] if wmax / k < 1e-9 else [r_grid[0], r_grid[-1]]
    for r_end in endpoints:
        if abs(self_consistency_residual(g, k, r_end)) < ROOT_TOL:
            if not any(abs(r_end - r) < 1e-9 for r in roots):
                roots.append(float(r_end))

    roots = sorted(r for r in roots if abs(self_consistency_residual(g, k, r)) < ROOT_TOL)
    deduped: List[float] = []
    for r in roots:
        if not deduped or r - deduped[-1] > 1e-9:
            deduped.append(r)
    return SelfConsistencyResult(
        roots=deduped,
        largest=deduped[-1] if deduped else None,
        k_supercritical=bool(deduped),
    )


def critical_coupling(
    g: FrequencyDistribution,
    kc_tol: float = 1e-6,
    k_max: float = K_MAX,
    grid: int = 1024,
) -> float:
    """Infimum coupling at which the self-consistency equation has a root.

    Bisection in K between a verified subcritical and a verified
    supercritical bracket. A Dirac law is supercritical for every K > 0.
    """
    if isinstance(g, Dirac):
        return 0.0

    def has_root(k: float) -> bool:
        if g.max_abs_omega / k > 1.0:
            return False
        return self_consistency_roots(g, k, grid=grid).k_supercritical

    wmax = g.max_abs_omega
    k_lo = max(wmax * (1.0 - 1e-9), 1e-12)  # roots need K R >= wmax with R <= 1
    k_hi = min(max(2.0 * wmax, 1.0), k_max)
    while not has_root(k_hi):
        if k_hi >= k_max:
            raise BracketNotFoundError(f"still subcritical at K={k_max:g}")
        k_hi = min(2.0 * k_hi, k_max)
    if has_root(k_lo):
        return k_lo
    while k_hi - k_lo > kc_tol:
        mid = 0.5 * (k_lo + k_hi)
        if has_root(mid):
            k_hi = mid
        else:
            k_lo = mid
    return 0.5 * (k_lo + k_hi)


@dataclass(frozen=True)
class StationaryDensity:
    """Stable-branch stationary state at coupling k with coherence r.

    Exposes the locked support curve theta_plus(omega), a pointwise
    evaluator for the phase marginal, and an atom-list spec sampling the
    full density for use as kinetic initial data.
    """

    g: FrequencyDistribution
    k: float
    r: float
    phi_star: float = 0.0

    @property
    def is_atomic(self) -> bool:
        return bool(getattr(self.g, "is_discrete", False))

    @property
    def critical_support(self) -> bool:
        """True when K R equals max|omega|: arcsin hits +-pi/2 and the
        marginal has integrable endpoint behaviour."""
        return abs(self.k * self.r - self.g.max_abs_omega) <= 1e-12 * max(1.0, self.k * self.r)

    def theta_plus(self, omega):
        """Locked phase phi* + arcsin(omega / (K R))."""
        return self.phi_star + np.arcsin(np.clip(np.asarray(omega) / (self.k * self.r), -1.0, 1.0))

    def marginal(self, theta):
        """Phase marginal K R |cos(theta - phi*)| g(K R sin(theta - phi*))
        on |theta - phi*| < pi/2, zero outside (atoms excluded)."""
        theta = np.asarray(theta, dtype=float)
        d = (theta - self.phi_star + np.pi) % (2.0 * np.pi) - np.pi
        kr = self.k * self.r
        inside = np.abs(d) < np.pi / 2.0
        vals = np.where(inside, kr * np.abs(np.cos(d)) * self.g.pdf(kr * np.sin(d)), 0.0)
        return vals

    def sample_spec(self, n: int = 512) -> AtomList:
        """Atoms (g-quadrature weight, theta_plus(omega), omega)."""
        nodes, weights = self.g.quadrature(n)
        thetas = self.theta_plus(nodes)
        return AtomList(
            weights=tuple(weights / weights.sum()),
            thetas=tuple(np.atleast_1d(thetas)),
            omegas=tuple(np.atleast_1d(nodes)),
        )


def stationary_density(
    g: FrequencyDistribution,
    k: float,
    r: float,
    phi_star: float = 0.0,
) -> StationaryDensity:
    """Build the stable-branch stationary density for coupling k and
    coherence r; requires K r to cover the support of g."""
    if k * r < g.max_abs_omega * (1.0 - 1e-12):
        raise ValueError("K*r must be >= max|omega| on the support of g")
    return StationaryDensity(g=g, k=k, r=r, phi_star=phi_star)
