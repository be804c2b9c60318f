"""Ready-made atomic measures used in tests and experiments."""
from __future__ import annotations

import numpy as np

from .errors import DomainError
from .graphs.functions import SampledFunction
from .measures import AtomicMeasure1D, AtomicMeasure2D


def dirac(x: float, y: float) -> AtomicMeasure2D:
    return AtomicMeasure2D([[x, y]], [1.0])


def circle(M: int, radius: float = 1.0) -> AtomicMeasure2D:
    """M equal atoms at the midpoints of M equal arcs of a centred circle."""
    theta = 2 * np.pi * (np.arange(M) + 0.5) / M
    return AtomicMeasure2D.uniform(radius * np.column_stack([np.cos(theta), np.sin(theta)]))


def segment(M: int, height: float = 0.0) -> AtomicMeasure2D:
    """M equal atoms at ``(k/M, height)``."""
    return AtomicMeasure2D.uniform(np.column_stack([np.arange(M) / M, np.full(M, height)]))


def unit_square(M: int, rng: np.random.Generator) -> AtomicMeasure2D:
    """M i.i.d. uniform atoms in the unit square."""
    return AtomicMeasure2D.uniform(rng.random((M, 2)))


def gaussian_blob(side: int, centre=(0.5, 0.5), width: float = 0.1,
                  angle: float = 0.0) -> AtomicMeasure2D:
    """Gaussian weights on a ``side x side`` lattice of spacing ``1/side``.

    The lattice is centred at ``centre`` and rotated by ``angle``; a small
    non-zero angle keeps lattice columns from sharing heights, which matters
    for vertical slices.
    """
    g = (np.arange(side) + 0.5) / side - 0.5
    X, Y = np.meshgrid(g, g, indexing="ij")
    c, s = np.cos(angle), np.sin(angle)
    P = np.column_stack([c * X.ravel() - s * Y.ravel(), s * X.ravel() + c * Y.ravel()])
    w = np.exp(-(P**2).sum(axis=1) / (2 * width**2))
    return AtomicMeasure2D.from_masses(P + np.asarray(centre, dtype=float), w)


def random_base(f: SampledFunction, rng: np.random.Generator,
                n_atoms: int | None = None, concentration: float = 1.0) -> AtomicMeasure1D:
    """Random Dirichlet weights on a random subset of the grid of ``f``."""
    n = len(f)
    if n_atoms is None:
        n_atoms = int(rng.integers(1, n + 1))
    if not 1 <= n_atoms <= n:
        raise DomainError(f"n_atoms must lie in [1, {n}]")
    idx = np.sort(rng.choice(n, size=n_atoms, replace=False))
    return AtomicMeasure1D(f.xs[idx], rng.dirichlet(np.full(n_atoms, concentration)))


def uniform_base(f: SampledFunction) -> AtomicMeasure1D:
    return AtomicMeasure1D.uniform(f.xs)
