"""Sampled functions, graph measures and maps between graphs."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DomainError, ValidationError
from ..measures import AtomicMeasure1D, AtomicMeasure2D

GRID_TOL = 1e-12
GRAPH_TOL = 1e-9


@dataclass
class SampledFunction:
    """A function on a finite, strictly increasing grid ``xs`` in [0, 1]."""

    xs: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        self.xs = np.array(self.xs, dtype=float, ndmin=1)
        self.values = np.array(self.values, dtype=float, ndmin=1)
        if self.xs.ndim != 1 or self.xs.shape != self.values.shape:
            raise ValidationError("xs and values must be flat arrays of equal length")
        if len(self.xs) == 0:
            raise ValidationError("a sampled function needs at least one point")
        if not (np.all(np.isfinite(self.xs)) and np.all(np.isfinite(self.values))):
            raise ValidationError("grid and values must be finite")
        if np.any(np.diff(self.xs) <= 0):
            raise ValidationError("grid must be strictly increasing")
        if self.xs[0] < 0 or self.xs[-1] > 1:
            raise ValidationError("grid must lie in [0, 1]")

    def __len__(self) -> int:
        return len(self.xs)

    def __call__(self, x) -> np.ndarray:
        """Piecewise-linear interpolation between grid points."""
        return np.interp(x, self.xs, self.values)

    @property
    def graph_points(self) -> np.ndarray:
        return np.column_stack([self.xs, self.values])

    def sup_distance(self, other: "SampledFunction") -> float:
        _require_shared_grid(self, other)
        return float(np.max(np.abs(self.values - other.values)))

    def is_uniform(self, rtol: float = 1e-9) -> bool:
        if len(self.xs) < 2:
            return False
        d = np.diff(self.xs)
        return bool(np.all(np.abs(d - d.mean()) <= rtol * d.mean()))


def uniform_grid(n: int) -> np.ndarray:
    if n < 2:
        raise DomainError("a uniform grid of [0, 1] needs at least 2 points")
    return np.linspace(0.0, 1.0, n)


def _require_shared_grid(g: SampledFunction, h: SampledFunction) -> None:
    if not np.array_equal(g.xs, h.xs):
        raise DomainError("functions must share the same grid")


def grid_indices(xs: np.ndarray, points, tol: float = GRID_TOL) -> np.ndarray:
    """Index of the grid point matching each of ``points``, or -1."""
    points = np.asarray(points, dtype=float)
    i = np.clip(np.searchsorted(xs, points), 1, len(xs) - 1) if len(xs) > 1 \
        else np.zeros(points.shape, dtype=np.intp)
    if len(xs) > 1:
        left_closer = np.abs(points - xs[i - 1]) <= np.abs(points - xs[i])
        i = np.where(left_closer, i - 1, i)
    return np.where(np.abs(points - xs[i]) <= tol, i, -1)


def graph_pushforward(f: SampledFunction, base: AtomicMeasure1D,
                      interpolate: bool = False) -> AtomicMeasure2D:
    """Push ``base`` forward under ``t -> (t, f(t))``.

    Base atoms must sit on the grid of ``f`` unless ``interpolate`` is set,
    in which case off-grid atoms use linear interpolation.
    """
    t = base.atoms
    if interpolate:
        if np.any(t < f.xs[0] - GRID_TOL) or np.any(t > f.xs[-1] + GRID_TOL):
            raise DomainError("base atoms lie outside the grid range")
        y = f(t)
    else:
        idx = grid_indices(f.xs, t)
        if np.any(idx < 0):
            bad = int(np.flatnonzero(idx < 0)[0])
            raise DomainError(
                f"base atom {bad} at t={t[bad]!r} is not a grid point; "
                "pass interpolate=True to interpolate")
        t = f.xs[idx]
        y = f.values[idx]
    return AtomicMeasure2D(np.column_stack([t, y]), base.weights)


def uniform_graph_measure(f: SampledFunction) -> AtomicMeasure2D:
    return AtomicMeasure2D.uniform(f.graph_points)


def graph_indices(mu: AtomicMeasure2D, g: SampledFunction,
                  tol: float = GRAPH_TOL) -> np.ndarray:
    """Grid index of each atom of ``mu`` on the graph of ``g``.

    Raises :class:`DomainError` naming the first atom that is off the grid
    or further than ``tol`` vertically from the graph.
    """
    idx = grid_indices(g.xs, mu.x)
    off = (idx < 0) | (np.abs(mu.y - g.values[np.maximum(idx, 0)]) > tol)
    if np.any(off):
        bad = int(np.flatnonzero(off)[0])
        x, y = mu.atoms[bad]
        raise DomainError(f"atom {bad} at ({x!r}, {y!r}) is not on the graph")
    return idx


def transport(mu: AtomicMeasure2D, g: SampledFunction, h: SampledFunction) -> AtomicMeasure2D:
    """Move each atom ``(x, g(x))`` to ``(x, h(x))``, keeping its weight.

    For every frequency ``xi`` the result satisfies
    ``|mu_hat(xi) - nu_hat(xi)| <= 2 pi |xi| ||g - h||_inf``.
    """
    _require_shared_grid(g, h)
    idx = graph_indices(mu, g)
    return AtomicMeasure2D(np.column_stack([mu.x, h.values[idx]]), mu.weights)


def transport_bound(xi, g: SampledFunction, h: SampledFunction) -> np.ndarray:
    xi = np.asarray(xi, dtype=float).reshape(-1, 2)
    return 2 * np.pi * np.hypot(xi[:, 0], xi[:, 1]) * g.sup_distance(h)


def affine_extend(f: SampledFunction, n: int = 1025) -> SampledFunction:
    """Extend ``f`` from its grid E to [0, 1], affinely on each gap of E.

    The output grid is ``linspace(0, 1, n)`` merged with E (grid points
    within 1e-12 of E are dropped in favour of E), so restricting the result
    back to E returns ``f`` exactly. E must contain both endpoints.
    """
    if abs(f.xs[0]) > GRID_TOL or abs(f.xs[-1] - 1.0) > GRID_TOL:
        raise DomainError(
            "affine extension needs values at x=0 and x=1; add the endpoint values to E")
    xs = f.xs.copy()
    xs[0], xs[-1] = 0.0, 1.0
    full = uniform_grid(n)
    keep = grid_indices(xs, full) < 0
    grid = np.union1d(xs, full[keep])
    values = np.interp(grid, xs, f.values)
    on_e = grid_indices(grid, xs)
    values[on_e] = f.values
    return SampledFunction(grid, values)


def restrict(f: SampledFunction, xs) -> SampledFunction:
    """Restrict ``f`` to the grid points ``xs`` (each must be a grid point of f)."""
    xs = np.asarray(xs, dtype=float)
    idx = grid_indices(f.xs, xs)
    if np.any(idx < 0):
        raise DomainError("restriction points must lie on the grid")
    return SampledFunction(f.xs[idx], f.values[idx])
