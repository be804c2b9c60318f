"""Atomic probability measures in the plane and on the line.

Every measure is a finite weighted point set, so Fourier transforms are
exact finite sums

    mu_hat(xi) = sum_j w_j exp(-2 pi i (x_j xi_1 + y_j xi_2)),

with frequencies in cycles per unit.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .errors import DomainError, ValidationError

WEIGHT_TOL = 1e-12
COALESCE_TOL = 1e-12

# Largest frequency-block x atom-count product evaluated in one numpy call.
_BLOCK_ELEMS = 1 << 21
# Above this many (frequency, atom) pairs annulus sampling switches to NUFFT.
_DIRECT_LIMIT = 1 << 20
_NUFFT_CHUNK = 1 << 22
_TILE_TARGETS = 1 << 18


class FrequencyPoint(NamedTuple):
    xi1: float
    xi2: float


def _check_weights(weights: np.ndarray, n_atoms: int) -> None:
    if weights.ndim != 1 or weights.shape[0] != n_atoms:
        raise ValidationError(
            f"expected {n_atoms} weights, got shape {weights.shape}")
    if not np.all(np.isfinite(weights)):
        raise ValidationError("weights must be finite")
    if np.any(weights < 0):
        raise ValidationError("weights must be non-negative")
    total = math.fsum(weights)
    if abs(total - 1.0) > WEIGHT_TOL:
        raise ValidationError(f"weights sum to {total!r}, not 1")


@dataclass
class AtomicMeasure2D:
    """Finite probability measure ``sum_j w_j delta_{(x_j, y_j)}``."""

    atoms: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        self.atoms = np.array(self.atoms, dtype=float, ndmin=2)
        self.weights = np.array(self.weights, dtype=float, ndmin=1)
        if self.atoms.ndim != 2 or self.atoms.shape[1] != 2:
            raise ValidationError(
                f"atoms must have shape (M, 2), got {self.atoms.shape}")
        if self.atoms.shape[0] == 0:
            raise ValidationError("a measure needs at least one atom")
        if not np.all(np.isfinite(self.atoms)):
            raise ValidationError("atom positions must be finite")
        _check_weights(self.weights, self.atoms.shape[0])

    @classmethod
    def uniform(cls, points) -> "AtomicMeasure2D":
        points = np.array(points, dtype=float, ndmin=2)
        return cls(points, np.full(points.shape[0], 1.0 / points.shape[0]))

    @classmethod
    def from_masses(cls, points, masses) -> "AtomicMeasure2D":
        """Normalize non-negative ``masses`` to a probability measure."""
        masses = np.asarray(masses, dtype=float)
        total = masses.sum()
        if not np.isfinite(total) or total <= 0:
            raise ValidationError("masses must have positive finite total")
        return cls(points, masses / total)

    @property
    def x(self) -> np.ndarray:
        return self.atoms[:, 0]

    @property
    def y(self) -> np.ndarray:
        return self.atoms[:, 1]

    def __len__(self) -> int:
        return self.atoms.shape[0]

    def diameter(self) -> float:
        return support_diameter(self.atoms)


@dataclass
class AtomicMeasure1D:
    """Finite probability measure ``sum_j w_j delta_{t_j}`` on the line."""

    atoms: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        self.atoms = np.array(self.atoms, dtype=float, ndmin=1)
        self.weights = np.array(self.weights, dtype=float, ndmin=1)
        if self.atoms.ndim != 1:
            raise ValidationError("1D atoms must be a flat array")
        if self.atoms.shape[0] == 0:
            raise ValidationError("a measure needs at least one atom")
        if not np.all(np.isfinite(self.atoms)):
            raise ValidationError("atom positions must be finite")
        _check_weights(self.weights, self.atoms.shape[0])

    @classmethod
    def uniform(cls, points) -> "AtomicMeasure1D":
        points = np.array(points, dtype=float, ndmin=1)
        return cls(points, np.full(points.shape[0], 1.0 / points.shape[0]))

    @classmethod
    def from_masses(cls, points, masses) -> "AtomicMeasure1D":
        masses = np.asarray(masses, dtype=float)
        total = masses.sum()
        if not np.isfinite(total) or total <= 0:
            raise ValidationError("masses must have positive finite total")
        return cls(points, masses / total)

    def __len__(self) -> int:
        return self.atoms.shape[0]

    def coalesced(self, tol: float = COALESCE_TOL) -> "AtomicMeasure1D":
        return coalesce(self, tol)


def support_diameter(points: np.ndarray) -> float:
    """Exact Euclidean diameter of a finite planar point set."""
    points = np.asarray(points, dtype=float)
    if len(points) < 2:
        return 0.0
    try:
        from scipy.spatial import ConvexHull, QhullError
        try:
            hull = points[ConvexHull(points).vertices]
        except (QhullError, ValueError):
            hull = None
    except ImportError:  # pragma: no cover
        hull = None
    if hull is None:
        # Collinear (or coincident) points: the farthest point from any
        # point is an endpoint, and the farthest from an endpoint is the other.
        a = points[np.argmax(np.hypot(*(points - points[0]).T))]
        return float(np.max(np.hypot(*(points - a).T)))
    best = 0.0
    for start in range(0, len(hull), 1024):
        block = hull[start:start + 1024]
        d = np.hypot(block[:, None, 0] - hull[None, :, 0],
                     block[:, None, 1] - hull[None, :, 1])
        best = max(best, float(d.max()))
    return best


def coalesce(nu: AtomicMeasure1D, tol: float = COALESCE_TOL) -> AtomicMeasure1D:
    """Merge atoms whose sorted neighbours lie within ``tol``.

    Merged atoms sit at the weighted mean of their group (first position
    when the group carries zero mass); unmerged atoms keep their position.
    """
    order = np.argsort(nu.atoms, kind="stable")
    t = nu.atoms[order]
    w = nu.weights[order]
    starts = np.flatnonzero(np.concatenate(([True], np.diff(t) > tol)))
    mass = np.add.reduceat(w, starts)
    # mean offset from the group's first atom, so identical positions and
    # singletons are reproduced exactly
    first = np.repeat(t[starts], np.diff(np.append(starts, len(t))))
    moment = np.add.reduceat(w * (t - first), starts)
    pos = t[starts] + np.where(mass > 0, moment / np.where(mass > 0, mass, 1.0), 0.0)
    mass = mass / mass.sum()
    return AtomicMeasure1D(pos, mass)


def _as_freqs(freqs, dim: int) -> np.ndarray:
    arr = np.asarray(freqs, dtype=float)
    if dim == 2:
        arr = arr.reshape(-1, 2)
    else:
        arr = arr.reshape(-1)
    if not np.all(np.isfinite(arr)):
        raise ValidationError("frequencies must be finite")
    return arr


def _phase_sum(phase: np.ndarray, weights: np.ndarray) -> np.ndarray:
    # Integer parts of the phase carry no information; dropping them keeps
    # cos/sin arguments in [-pi, pi] where they are most accurate.
    phase -= np.rint(phase)
    phase *= 2 * np.pi
    re = np.cos(phase)
    re *= weights
    im = np.sin(phase)
    im *= weights
    return re.sum(axis=1) - 1j * im.sum(axis=1)


def ft_eval(mu: AtomicMeasure2D, freqs) -> np.ndarray:
    """Exact Fourier transform of ``mu`` at each row of ``freqs``.

    Parameters
    ----------
    mu : AtomicMeasure2D
    freqs : array_like, shape (F, 2) or (2,)
        Frequencies ``(xi1, xi2)`` in cycles per unit.

    Returns
    -------
    numpy.ndarray of complex, shape (F,)
    """
    xi = _as_freqs(freqs, 2)
    out = np.empty(len(xi), dtype=complex)
    block = max(1, _BLOCK_ELEMS // len(mu))
    x, y, w = mu.x, mu.y, mu.weights
    for start in range(0, len(xi), block):
        fb = xi[start:start + block]
        phase = np.multiply.outer(fb[:, 0], x)
        phase += np.multiply.outer(fb[:, 1], y)
        out[start:start + block] = _phase_sum(phase, w)
    return out


def ft_eval_1d(nu: AtomicMeasure1D, freqs) -> np.ndarray:
    """Exact Fourier transform of a measure on the line."""
    t = _as_freqs(freqs, 1)
    out = np.empty(len(t), dtype=complex)
    block = max(1, _BLOCK_ELEMS // len(nu))
    for start in range(0, len(t), block):
        phase = np.multiply.outer(t[start:start + block], nu.atoms)
        out[start:start + block] = _phase_sum(phase, nu.weights)
    return out


def default_density(mu: AtomicMeasure2D) -> float:
    """Samples per unit frequency: four per unit of support diameter."""
    return 4.0 * max(mu.diameter(), 0.25)


def resolution_cutoff(mu: AtomicMeasure2D) -> float:
    """Largest |xi| at which an M-atom approximation is trusted."""
    diam = mu.diameter()
    if diam == 0:
        return math.inf
    return len(mu) / (16.0 * diam)


def polar_grid(R: float, samples_per_unit: float) -> tuple[np.ndarray, np.ndarray]:
    """Half-plane polar sample grid of the annulus ``R <= |xi| <= 2R``.

    Radial and arc-length steps are at most ``1/samples_per_unit``. Angles
    are multiples of ``2 pi / n`` with ``n`` divisible by four, so both
    coordinate axes are always sampled. The half-plane ``0 <= theta < pi``
    suffices because ``|mu_hat(-xi)| = |mu_hat(xi)|``.
    """
    if not R > 0:
        raise DomainError(f"annulus radius must be positive, got {R}")
    if not samples_per_unit > 0:
        raise DomainError("samples_per_unit must be positive")
    n_r = int(math.ceil(R * samples_per_unit)) + 1
    radii = np.linspace(R, 2.0 * R, n_r)
    n_theta = 4 * np.ceil(2 * np.pi * radii * samples_per_unit / 4).astype(np.int64)
    half = n_theta // 2
    r = np.repeat(radii, half)
    offsets = np.concatenate(([0], np.cumsum(half)[:-1]))
    k = np.arange(half.sum()) - np.repeat(offsets, half)
    theta = 2 * np.pi * k / np.repeat(n_theta, half)
    xi1 = r * np.cos(theta)
    xi2 = r * np.sin(theta)
    # Exact zeros on the axes, so axis probes are not perturbed by rounding.
    quarter = np.repeat(n_theta // 4, half)
    xi1[k == quarter] = 0.0
    xi2[k == 0] = 0.0
    return xi1, xi2


def _modulus(mu: AtomicMeasure2D, xi1: np.ndarray, xi2: np.ndarray,
             eps: float, threads: int) -> np.ndarray:
    if xi1.size * len(mu) <= _DIRECT_LIMIT:
        return np.abs(ft_eval(mu, np.column_stack([xi1, xi2])))
    import finufft

    # Translating the atoms changes only the phase of mu_hat.
    cx = 0.5 * (mu.x.max() + mu.x.min())
    cy = 0.5 * (mu.y.max() + mu.y.min())
    x = mu.x - cx
    y = mu.y - cy
    c = mu.weights.astype(complex)
    # Type-3 cost grows with the product of source and target extents, so
    # the targets are processed in square tiles of the frequency plane.
    area = max(float(np.ptp(xi1)) * float(np.ptp(xi2)), 1e-300)
    side = math.sqrt(area * _TILE_TARGETS / xi1.size)
    key = np.floor(xi1 / side) * 1e9 + np.floor(xi2 / side)
    order = np.argsort(key, kind="stable")
    bounds = np.flatnonzero(np.diff(key[order])) + 1
    out = np.empty(xi1.size)
    groups = np.split(order, bounds)
    batch = []
    for i, g in enumerate(groups):
        batch.append(g)
        if sum(len(b) for b in batch) < _TILE_TARGETS // 4 and i + 1 < len(groups):
            continue
        idx = np.concatenate(batch)
        batch = []
        for start in range(0, idx.size, _NUFFT_CHUNK):
            sel = idx[start:start + _NUFFT_CHUNK]
            f = finufft.nufft2d3(x, y, c, 2 * np.pi * xi1[sel], 2 * np.pi * xi2[sel],
                                 isign=-1, eps=eps, nthreads=threads)
            out[sel] = np.abs(f)
    return out


def annulus_sup(mu: AtomicMeasure2D, R: float, samples_per_unit: float | None = None,
                *, eps: float = 1e-12, threads: int = 1) -> tuple[float, FrequencyPoint]:
    """Maximum of ``|mu_hat|`` over the polar grid of ``R <= |xi| <= 2R``.

    Small problems are summed exactly; large ones go through a type-3
    NUFFT at relative accuracy ``eps``. The returned modulus is capped at 1.
    """
    if samples_per_unit is None:
        samples_per_unit = default_density(mu)
    xi1, xi2 = polar_grid(R, samples_per_unit)
    mod = _modulus(mu, xi1, xi2, eps, threads)
    i = int(np.argmax(mod))
    return min(float(mod[i]), 1.0), FrequencyPoint(float(xi1[i]), float(xi2[i]))


@dataclass
class Annulus:
    R: float
    sup_modulus: float
    argmax: FrequencyPoint
    trusted: bool = True


@dataclass
class DecayEstimate:
    """Per-annulus suprema of ``|mu_hat|`` and the fitted decay exponent.

    ``exponent_s`` is ``-2 * fitted_slope`` clamped to [0, 2]; the fit uses
    the trusted annuli whenever at least two exist, otherwise all annuli
    (and ``warning`` says so).
    """

    annuli: list[Annulus]
    fitted_slope: float
    exponent_s: float
    conservative_s: float
    constant_C: float
    cutoff: float
    samples_per_unit: float
    fit_on_trusted: bool = True
    warning: str | None = field(default=None)

    @property
    def radii(self) -> np.ndarray:
        return np.array([a.R for a in self.annuli])

    @property
    def sups(self) -> np.ndarray:
        return np.array([a.sup_modulus for a in self.annuli])


def _clamp_s(s: float) -> float:
    return float(min(2.0, max(0.0, s)))


def annulus_radii(R_min: float, R_max: float, annuli_per_octave: int = 1) -> np.ndarray:
    """Inner radii ``R_min 2^(k/a)`` of annuli ``[R, 2R]`` inside ``[R_min, R_max]``."""
    if not (0 < R_min < R_max):
        raise DomainError(f"need 0 < R_min < R_max, got {R_min}, {R_max}")
    if annuli_per_octave < 1:
        raise DomainError("annuli_per_octave must be a positive integer")
    n = int(math.floor(annuli_per_octave * math.log2(R_max / (2 * R_min)) + 1e-9)) + 1
    if n < 2:
        raise DomainError(
            f"[{R_min}, {R_max}] holds fewer than 2 annuli [R, 2R]; widen the range")
    return R_min * 2.0 ** (np.arange(n) / annuli_per_octave)


def decay_exponent(mu: AtomicMeasure2D, R_min: float, R_max: float,
                   annuli_per_octave: int = 1, samples_per_unit: float | None = None,
                   *, eps: float = 1e-12, threads: int = 1) -> DecayEstimate:
    """Fit ``|mu_hat(xi)| ~ C |xi|^(-s/2)`` on dyadic annuli between R_min and R_max.

    All probed frequencies satisfy ``R_min <= |xi| <= R_max``. Annuli that
    reach past :func:`resolution_cutoff` are computed but flagged untrusted.
    """
    radii = annulus_radii(R_min, R_max, annuli_per_octave)
    if samples_per_unit is None:
        samples_per_unit = default_density(mu)
    cutoff = resolution_cutoff(mu)
    annuli = []
    for R in radii:
        sup, arg = annulus_sup(mu, float(R), samples_per_unit, eps=eps, threads=threads)
        # the relative slack keeps rounding in the diameter from deciding trust
        annuli.append(Annulus(float(R), sup, arg, trusted=bool(2 * R <= cutoff * (1 + 1e-12))))

    warning = None
    fit = [a for a in annuli if a.trusted]
    fit_on_trusted = len(fit) >= 2
    if not fit_on_trusted:
        fit = annuli
        warning = (f"fewer than 2 annuli below the resolution cutoff |xi| <= {cutoff:.4g};"
                   " fit uses untrusted annuli")
    elif len(fit) < len(annuli):
        warning = f"annuli beyond the resolution cutoff |xi| <= {cutoff:.4g} excluded from fit"

    logR = np.log([a.R for a in fit])
    logS = np.log(np.maximum([a.sup_modulus for a in fit], 1e-300))
    slope = float(np.polyfit(logR, logS, 1)[0])
    i, j = np.triu_indices(len(fit), k=1)
    worst = float(np.max((logS[j] - logS[i]) / (logR[j] - logR[i])))
    s = _clamp_s(-2.0 * slope)
    C = max(a.sup_modulus * a.R ** (s / 2) for a in annuli)
    return DecayEstimate(annuli, slope, s, _clamp_s(-2.0 * worst), float(C), cutoff,
                         float(samples_per_unit), fit_on_trusted, warning)


def project_1d(mu: AtomicMeasure2D, e) -> AtomicMeasure1D:
    """Pushforward of ``mu`` under ``p -> e . p`` with coincident atoms merged."""
    e = np.asarray(e, dtype=float).reshape(-1)
    if e.shape != (2,) or not np.all(np.isfinite(e)):
        raise ValidationError("direction must be a finite 2-vector")
    if abs(math.hypot(e[0], e[1]) - 1.0) > 1e-12:
        raise DomainError(f"direction {e.tolist()} is not a unit vector")
    # elementwise rather than a matrix product, so axis directions are exact
    return coalesce(AtomicMeasure1D(mu.x * e[0] + mu.y * e[1], mu.weights))


def autocorrelation_mass(nu: AtomicMeasure1D, lam: float) -> float:
    """``int nu([t - lam, t + lam]) dnu(t)``, computed exactly.

    Atoms within :data:`COALESCE_TOL` are merged first, so as ``lam -> 0``
    the value tends to the sum of squared atom masses.
    """
    if not lam > 0:
        raise DomainError(f"lambda must be positive, got {lam}")
    nu = coalesce(nu)
    t, w = nu.atoms, nu.weights
    cum = np.concatenate(([0.0], np.cumsum(w)))
    hi = np.searchsorted(t, t + lam, side="right")
    lo = np.searchsorted(t, t - lam, side="left")
    return float(np.sum(w * (cum[hi] - cum[lo])))


def atom_mass_squares(nu: AtomicMeasure1D) -> float:
    """Sum over atoms of (atom mass)^2 after coalescing."""
    return math.fsum(coalesce(nu).weights ** 2)


__all__: Sequence[str] = [
    "FrequencyPoint", "AtomicMeasure2D", "AtomicMeasure1D", "Annulus", "DecayEstimate",
    "ft_eval", "ft_eval_1d", "annulus_sup", "decay_exponent", "project_1d",
    "autocorrelation_mass", "atom_mass_squares", "coalesce", "support_diameter",
    "resolution_cutoff", "default_density", "polar_grid", "annulus_radii",
]
