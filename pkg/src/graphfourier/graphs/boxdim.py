from __future__ import annotations

import numpy as np

from ..errors import DomainError
from .functions import SampledFunction

MIN_POINTS = 2**10


def box_counts(f: SampledFunction, levels) -> np.ndarray:
    """Number of ``2^-j`` boxes meeting the graph, for each level ``j``.

    Column ``i`` at level ``j`` covers ``[i 2^-j, (i+1) 2^-j]``; the graph
    inside it needs ``max(1, ceil(osc / 2^-j))`` boxes.
    """
    n = len(f)
    out = []
    for j in levels:
        m = 2**j
        edges = np.round(np.linspace(0, n - 1, m + 1)).astype(np.int64)
        # closed columns share their boundary sample
        hi = np.maximum.reduceat(f.values, edges[:-1])
        lo = np.minimum.reduceat(f.values, edges[:-1])
        bound = f.values[edges[1:]]
        osc = np.maximum(hi, bound) - np.minimum(lo, bound)
        out.append(np.maximum(1.0, np.ceil(osc * m - 1e-9)).sum())
    return np.array(out)


def box_dimension(f: SampledFunction) -> float:
    """Box-counting dimension of the graph of ``f`` from column oscillations.

    Fits ``log N(2^-j)`` against ``j log 2`` for box sizes between
    ``2^-floor(log2(n)/2)`` and ``2^-3``. The result is clipped to [1, 2].
    """
    n = len(f)
    if n < MIN_POINTS:
        raise DomainError(f"box counting needs at least {MIN_POINTS} grid points, got {n}")
    if not f.is_uniform():
        raise DomainError("box counting needs a uniform grid")
    top = int(np.log2(n)) // 2
    levels = np.arange(3, top + 1)
    counts = box_counts(f, levels)
    slope = np.polyfit(levels * np.log(2.0), np.log(counts), 1)[0]
    return float(np.clip(slope, 1.0, 2.0))
