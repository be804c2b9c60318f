"""Vertical-tube slices of planar measures and their Riesz energies.

The slice of ``mu`` along the line ``x = t`` is approximated at finite
tube half-width ``delta`` by ``mu`` restricted to ``|x - t| <= delta``,
projected to the y-axis and scaled by ``1 / (2 delta)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, special

from .errors import DomainError
from .measures import AtomicMeasure1D, AtomicMeasure2D, DecayEstimate, _modulus

COINCIDE_TOL = 1e-14
_ROW_BLOCK = 512


def slice_tube(mu: AtomicMeasure2D, t: float, delta: float) -> tuple[AtomicMeasure1D | None, float]:
    """Normalized slice at ``x = t`` and its tube mass ``mu(T(t, delta)) / (2 delta)``.

    An empty tube gives ``(None, 0.0)``.
    """
    if not delta > 0:
        raise DomainError(f"tube half-width must be positive, got {delta}")
    inside = np.abs(mu.x - t) <= delta
    mass = math.fsum(mu.weights[inside])
    if not np.any(inside) or mass == 0:
        return None, 0.0
    nu = AtomicMeasure1D(mu.y[inside], mu.weights[inside] / mass)
    return nu, mass / (2 * delta)


def riesz_energy(nu: AtomicMeasure1D, u: float) -> float:
    """Off-diagonal Riesz ``u``-energy ``sum_{i != j} w_i w_j |t_i - t_j|^-u``.

    Self-pairs are excluded. Returns ``inf`` when two distinct atoms
    coincide within 1e-14.
    """
    if not 0 < u < 1:
        raise DomainError(f"energy exponent must lie in (0, 1), got {u}")
    order = np.argsort(nu.atoms, kind="stable")
    t = nu.atoms[order]
    w = nu.weights[order]
    if len(t) < 2:
        return 0.0
    if np.any(np.diff(t) <= COINCIDE_TOL):
        return math.inf
    rows = []
    for start in range(0, len(t), _ROW_BLOCK):
        tb = t[start:start + _ROW_BLOCK]
        d = np.abs(tb[:, None] - t[None, :])
        np.fill_diagonal(d[:, start:start + len(tb)], np.inf)
        rows.append(((d ** -u) @ w) * w[start:start + _ROW_BLOCK])
    return math.fsum(np.concatenate(rows))


def angular_kernel_integral(s: float, theta: float = 0.0) -> float:
    """Average of ``|cos(phi - theta)|^(s-2)`` over the circle.

    The integrable singularities at ``phi = theta + pi/2 (mod pi)`` are
    handled with algebraic-weight adaptive quadrature on each side.
    """
    if not 1 < s < 2:
        raise DomainError(f"the kernel integral needs 1 < s < 2, got {s}")
    a = s - 2.0
    sing = np.sort(np.mod(theta + np.pi / 2 + np.pi * np.arange(2), 2 * np.pi))
    cuts = np.concatenate(([0.0], sing, [2 * np.pi]))

    def smooth(phi, c):
        # near a pole c, |cos(phi - theta)| = |sin(phi - c)|; dividing by
        # |phi - c| leaves a smooth factor that tends to 1
        d = phi - c
        return (math.sin(d) / d) ** a if d != 0 else 1.0

    total = 0.0
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        if hi - lo < 1e-15:
            continue
        mid = 0.5 * (lo + hi)
        left_sing = any(abs(lo - c) < 1e-12 for c in sing)
        right_sing = any(abs(hi - c) < 1e-12 for c in sing)
        for a0, b0 in ((lo, mid), (mid, hi)):
            if a0 == lo and left_sing:
                val, _ = integrate.quad(smooth, a0, b0, args=(lo,), weight="alg",
                                        wvar=(a, 0.0), epsabs=1e-13, epsrel=1e-12, limit=200)
            elif b0 == hi and right_sing:
                val, _ = integrate.quad(smooth, a0, b0, args=(hi,), weight="alg",
                                        wvar=(0.0, a), epsabs=1e-13, epsrel=1e-12, limit=200)
            else:
                val, _ = integrate.quad(lambda p: abs(math.cos(p - theta)) ** a, a0, b0,
                                        epsabs=1e-13, epsrel=1e-12, limit=200)
            total += val
    return total / (2 * np.pi)


def decay_bound_integral(s: float, tau: float) -> float:
    """``int_{R^2} |xi_2|^(s-2) (1 + |xi|)^(-tau) dxi`` (``inf`` unless tau > s)."""
    if not 1 < s < 2:
        raise DomainError(f"s must lie in (1, 2), got {s}")
    if tau <= s:
        return math.inf
    radial, _ = integrate.quad(lambda r: r ** (s - 1) * (1 + r) ** (-tau), 0, np.inf,
                               epsabs=1e-12, epsrel=1e-10, limit=400)
    return 2 * np.pi * angular_kernel_integral(s) * radial


def _sin_power_cdf(phi: np.ndarray, a: float) -> np.ndarray:
    """``int_0^phi |sin x|^a dx`` for phi in [0, pi]."""
    p = 0.5 * (a + 1)
    half = 0.5 * special.beta(p, 0.5)
    phi = np.asarray(phi, dtype=float)
    low = np.minimum(phi, np.pi - phi)
    g = half * special.betainc(p, 0.5, np.sin(low) ** 2)
    return np.where(phi <= np.pi / 2, g, 2 * half - g)


def spectral_rhs(mu: AtomicMeasure2D, s: float, radius: float,
                 samples_per_unit: float = 8.0, radial_nodes: int = 4,
                 threads: int = 1) -> float:
    """``int_{|xi| <= radius} |xi_2|^(s-2) |mu_hat(xi)|^2 dxi`` by product quadrature.

    The angular weight is integrated exactly on each cell; ``|mu_hat|^2``
    is sampled at cell midpoints and Gauss-Legendre radial nodes.
    """
    if not 1 < s < 2:
        raise DomainError(f"s must lie in (1, 2), got {s}")
    a = s - 2.0
    n_panels = max(1, int(math.ceil(radius * samples_per_unit)))
    gx, gw = np.polynomial.legendre.leggauss(radial_nodes)
    edges = np.linspace(0.0, radius, n_panels + 1)
    half_w = 0.5 * np.diff(edges)
    r = (0.5 * (edges[:-1] + edges[1:])[:, None] + half_w[:, None] * gx[None, :]).ravel()
    wr = (half_w[:, None] * gw[None, :]).ravel() * r ** (s - 1)

    n_theta = max(64, int(math.ceil(np.pi * radius * samples_per_unit)))
    cells = np.linspace(0.0, np.pi, n_theta + 1)
    w_theta = np.diff(_sin_power_cdf(cells, a))
    mid = 0.5 * (cells[:-1] + cells[1:])

    xi1 = np.outer(r, np.cos(mid)).ravel()
    xi2 = np.outer(r, np.sin(mid)).ravel()
    mod2 = _modulus(mu, xi1, xi2, 1e-12, threads).reshape(len(r), len(mid)) ** 2
    # the integrand is even under xi -> -xi
    return 2.0 * math.fsum((mod2 @ w_theta) * wr)


@dataclass
class EnergyReport:
    s: float
    delta: float
    t_grid: np.ndarray
    tube_mass: np.ndarray
    per_slice_energy: np.ndarray
    integral_estimate: float
    rhs_bound_estimate: float
    normalized_energy: np.ndarray

    def rows(self):
        return zip(self.t_grid, self.tube_mass, self.per_slice_energy)


def slice_energy_profile(mu: AtomicMeasure2D, s: float, delta: float, t_grid,
                         decay: DecayEstimate | None = None) -> EnergyReport:
    """Slice energies ``I_{s-1}`` along ``t_grid`` and their integral over t.

    Each slice keeps its tube scaling, so its energy is
    ``tube_mass^2 * I_{s-1}(normalized slice)``; empty tubes contribute 0.
    With a ``decay`` estimate, ``rhs_bound_estimate`` is the integral of
    ``|xi_2|^(s-2) (1 + |xi|)^(-tau)`` with ``tau = decay.exponent_s``.
    """
    if not 1 < s < 2:
        raise DomainError(f"s must lie in (1, 2), got {s}")
    if not delta > 0:
        raise DomainError(f"tube half-width must be positive, got {delta}")
    t_grid = np.asarray(t_grid, dtype=float)
    masses = np.zeros(len(t_grid))
    normalized = np.zeros(len(t_grid))
    for i, t in enumerate(t_grid):
        nu, m = slice_tube(mu, float(t), delta)
        if nu is not None:
            masses[i] = m
            normalized[i] = riesz_energy(nu, s - 1)
    with np.errstate(invalid="ignore"):
        energy = np.where(masses > 0, masses**2 * normalized, 0.0)
    if np.any(np.isinf(energy)):
        integral = math.inf
    elif len(t_grid) > 1:
        integral = float(np.trapezoid(energy, t_grid))
    else:
        integral = 0.0
    rhs = decay_bound_integral(s, decay.exponent_s) if decay is not None else math.nan
    return EnergyReport(s, delta, t_grid, masses, energy, integral, rhs, normalized)
