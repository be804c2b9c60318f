"""Staircase approximations whose graphs keep |mu_hat| away from zero.

A good function ``g`` at frequency ``N`` has a graph made of a horizontal
piece, whose heights all lie in ``Q_N = {k/N}``, and a vertical piece of
steep affine patches whose abscissae lie within ``delta`` of ``Q_N``. Both
pieces therefore project into the set where ``cos(2 pi N t)`` and
``cos(4 pi N t)`` are at least :data:`COS_LEVEL`, which forces one of the
four probes ``mu_hat(0, N)``, ``mu_hat(N, 0)``, ``mu_hat(0, 2N)``,
``mu_hat(2N, 0)`` to be large for every probability measure on the graph.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import DomainError
from ..measures import AtomicMeasure2D, ft_eval
from .functions import GRID_TOL, SampledFunction, graph_indices

COS_LEVEL = 0.99
# min over u of u + (2u^2 - 1), attained at u = -1/4
COS_SUM_MIN = -9.0 / 8.0
SUM_THRESHOLD = 0.42875
MAX_THRESHOLD = 0.2143
NON_DECAY_LEVEL = 0.2
SLACK = 1e-6


def patch_half_width(N: int, level: float = COS_LEVEL) -> float:
    """Half-width keeping ``cos(4 pi N t) >= level`` with a 10% margin."""
    return 0.9 * math.acos(level) / (4 * math.pi * N)


def in_cosine_set(t, N: int, level: float = COS_LEVEL) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    # reduce before scaling so points of Q_N map to exact integers
    a = N * t
    a = a - np.rint(a)
    return (np.cos(2 * np.pi * a) >= level) & (np.cos(4 * np.pi * a) >= level)


@dataclass
class GoodFunction:
    fn: SampledFunction
    N: int
    horizontal_idx: np.ndarray
    vertical_idx: np.ndarray
    epsilon: float
    delta: float

    def check_invariants(self, level: float = COS_LEVEL) -> None:
        h = np.asarray(self.horizontal_idx)
        v = np.asarray(self.vertical_idx)
        n = len(self.fn)
        if len(np.intersect1d(h, v)) or not np.array_equal(np.union1d(h, v), np.arange(n)):
            raise AssertionError("horizontal and vertical pieces must partition the grid")
        if not np.all(in_cosine_set(self.fn.values[h], self.N, level)):
            raise AssertionError("a horizontal point has height outside the cosine set")
        if not np.all(in_cosine_set(self.fn.xs[v], self.N, level)):
            raise AssertionError("a vertical point has abscissa outside the cosine set")


def _levels(f: SampledFunction, N: int) -> np.ndarray:
    """q_k for k = 1..N: nearest point of Q_N to f(k/N), ties rounded down."""
    fk = f(np.arange(1, N + 1) / N)
    return np.ceil(N * fk - 0.5) / N


def _piece(x: np.ndarray, N: int) -> np.ndarray:
    """Zero-based index k-1 of the interval I_k containing each x."""
    return np.minimum(np.floor(N * x).astype(np.int64), N - 1)


def _staircase_errors(f: SampledFunction, N: int, q: np.ndarray) -> tuple[float, float]:
    # sup |f - g~| over [0,1]: f is piecewise linear, so check its samples
    # and both one-sided limits at every breakpoint k/N.
    k = _piece(f.xs, N)
    err = np.max(np.abs(f.values - q[k]))
    b = np.arange(1, N) / N
    fb = f(b)
    err = max(err, float(np.max(np.abs(fb - q[:-1]), initial=0.0)),
              float(np.max(np.abs(fb - q[1:]), initial=0.0)))
    left_end = np.arange(0, N) / N
    err = max(err, float(np.max(np.abs(f(left_end) - q))))
    jump = float(np.max(np.abs(np.diff(q)), initial=0.0))
    return float(err), jump


def _max_frequency(f: SampledFunction) -> int:
    # every I_k must contain at least two grid points
    if len(f) < 2:
        return 0
    h = float(np.max(np.diff(f.xs)))
    return 2 ** int(math.floor(math.log2(1.0 / (2.0 * h)))) if h <= 0.5 else 0


def choose_frequency(f: SampledFunction, M: int, epsilon: float) -> tuple[int, np.ndarray]:
    """Smallest power of two ``N >= M`` whose staircase is within ``epsilon`` of f."""
    if M < 1:
        raise DomainError("M must be a positive integer")
    if not epsilon > 0:
        raise DomainError("epsilon must be positive")
    n_max = _max_frequency(f)
    N = 1 << max(0, (M - 1).bit_length())
    while N <= n_max:
        q = _levels(f, N)
        err, jump = _staircase_errors(f, N, q)
        if err < epsilon and jump < epsilon:
            return N, q
        N *= 2
    raise DomainError(
        f"no frequency N <= {n_max} meets epsilon={epsilon} on this grid; "
        "sample f on a finer grid")


def good_function(f: SampledFunction, M: int, epsilon: float,
                  patch_points: int = 17) -> GoodFunction:
    """Approximate ``f`` by a good function at frequency ``N >= M``.

    The staircase takes value ``q_k`` on ``I_k``; each jump at ``k/N`` is
    bridged by one affine patch on ``[k/N - delta, k/N + delta]`` sampled at
    ``patch_points`` abscissae. The result satisfies
    ``||f - g||_inf < 2 epsilon``.
    """
    if f.xs[0] > GRID_TOL or f.xs[-1] < 1 - GRID_TOL:
        raise DomainError("f must be sampled on a grid spanning [0, 1]")
    if patch_points < 2:
        raise DomainError("a patch needs at least two sample points")
    N, q = choose_frequency(f, M, epsilon)
    delta = patch_half_width(N)

    jumps = np.flatnonzero(q[1:] != q[:-1]) + 1          # jump at x = k/N
    centres = jumps / N
    offsets = delta * np.linspace(-1.0, 1.0, patch_points)
    patch_x = (centres[:, None] + offsets[None, :]).ravel()
    xs = np.union1d(f.xs, patch_x)

    values = q[_piece(xs, N)]
    vertical = np.zeros(len(xs), dtype=bool)
    if len(jumps):
        nearest = np.clip(np.searchsorted(centres, xs), 1, len(centres)) - 1
        right = np.minimum(nearest + 1, len(centres) - 1)
        use_right = np.abs(xs - centres[right]) < np.abs(xs - centres[nearest])
        j = np.where(use_right, right, nearest)
        d = xs - centres[j]
        vertical = np.abs(d) <= delta * (1 + 1e-12)
        k = jumps[j]
        lo, hi = q[k - 1], q[k]
        ramp = lo + (hi - lo) * (np.clip(d, -delta, delta) + delta) / (2 * delta)
        values = np.where(vertical, ramp, values)

    g = GoodFunction(SampledFunction(xs, values), N,
                     np.flatnonzero(~vertical), np.flatnonzero(vertical),
                     float(epsilon), delta)
    g.check_invariants()
    return g


def sup_error(f: SampledFunction, g: GoodFunction) -> float:
    """``||f - g||_inf`` over the merged breakpoints of both functions."""
    return float(np.max(np.abs(f(g.fn.xs) - g.fn.values)))


@dataclass
class GoodBoundReport:
    mass_H: float
    mass_V: float
    branch: str
    sum_bound_value: float
    four_moduli: tuple[float, float, float, float]
    passes: bool


def verify_good_bound(g: GoodFunction, mu: AtomicMeasure2D,
                      sum_threshold: float = SUM_THRESHOLD,
                      max_threshold: float = MAX_THRESHOLD) -> GoodBoundReport:
    """Evaluate the four probes ``mu_hat`` at ``(0,N), (N,0), (0,2N), (2N,0)``.

    The heavier piece selects the branch: the vertical probes when
    ``mu(H) >= 1/2``, the horizontal ones otherwise.
    """
    idx = graph_indices(mu, g.fn)
    label = np.full(len(g.fn), -1)
    label[np.asarray(g.horizontal_idx, dtype=np.intp)] = 0
    label[np.asarray(g.vertical_idx, dtype=np.intp)] = 1
    cls = label[idx]
    if np.any(cls < 0):
        bad = int(np.flatnonzero(cls < 0)[0])
        raise DomainError(f"atom {bad} belongs to neither piece of the graph")
    mass_H = math.fsum(mu.weights[cls == 0])
    mass_V = math.fsum(mu.weights[cls == 1])

    N = g.N
    f0N, fN0, f02N, f2N0 = ft_eval(mu, [(0, N), (N, 0), (0, 2 * N), (2 * N, 0)])
    if mass_H >= 0.5:
        branch, total = "H", abs(f0N + f02N)
    else:
        branch, total = "V", abs(fN0 + f2N0)
    four = (abs(f0N), abs(fN0), abs(f02N), abs(f2N0))
    passes = total >= sum_threshold - SLACK and max(four) >= max_threshold - SLACK
    return GoodBoundReport(mass_H, mass_V, branch, float(total),
                           tuple(float(m) for m in four), bool(passes))


def cosine_sum_minimum(n_points: int = 10**6) -> tuple[float, float]:
    """Grid minimum of ``cos a + cos 2a`` over ``a`` in ``[0, 2 pi)``.

    Returns the minimum and ``cos`` of the minimizing angle.
    """
    a = 2 * np.pi * np.arange(n_points) / n_points
    v = np.cos(a) + np.cos(2 * a)
    i = int(np.argmin(v))
    return float(v[i]), float(np.cos(a[i]))
