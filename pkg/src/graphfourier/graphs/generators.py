"""Test-function generators on uniform grids of [0, 1]."""
from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from ..errors import DomainError, FallbackWarning
from .functions import SampledFunction, uniform_grid

log = logging.getLogger(__name__)

KINDS = ("fbm", "weierstrass", "polynomial", "constant")
CHOLESKY_MAX = 2**10


@dataclass
class GeneratorSpec:
    kind: str
    params: dict = field(default_factory=dict)
    n: int = 1024
    seed: int | None = None

    def validate(self) -> None:
        p = self.params
        if self.kind not in KINDS:
            raise DomainError(f"unknown generator kind {self.kind!r}; expected one of {KINDS}")
        if self.n < 2:
            raise DomainError("n must be at least 2")
        if self.kind == "fbm":
            H = p.get("hurst")
            if H is None or not 0 < H < 1:
                raise DomainError("fbm needs a Hurst index 0 < hurst < 1")
            if self.n & (self.n - 1):
                raise DomainError("fbm needs n to be a power of two")
            if self.seed is None:
                raise DomainError("fbm is stochastic and needs an explicit seed")
        elif self.kind == "weierstrass":
            a, b, terms = p.get("a"), p.get("b"), p.get("terms", 30)
            if a is None or b is None or not 0 < a < 1 or not b > 1:
                raise DomainError("weierstrass needs 0 < a < 1 and b > 1")
            if a * b < 1:
                raise DomainError("weierstrass needs a*b >= 1")
            if int(terms) < 1:
                raise DomainError("weierstrass needs at least one term")
        elif self.kind == "polynomial":
            if len(p.get("coeffs", ())) == 0:
                raise DomainError("polynomial needs a non-empty coefficient list")
        elif "c" not in p:
            raise DomainError("constant needs a level c")
        for k, v in p.items():
            vals = v if isinstance(v, (list, tuple)) else [v]
            if not all(isinstance(x, (bool, int, float)) and math.isfinite(x) for x in vals):
                raise DomainError(f"parameter {k!r} must be finite")


def fgn_autocovariance(n: int, hurst: float) -> np.ndarray:
    """Autocovariance of unit-step fractional Gaussian noise at lags 0..n."""
    k = np.arange(n + 1, dtype=float)
    h2 = 2 * hurst
    return 0.5 * (np.abs(k + 1) ** h2 - 2 * k ** h2 + np.abs(k - 1) ** h2)


def _circulant_eigenvalues(n: int, hurst: float) -> np.ndarray:
    gamma = fgn_autocovariance(n, hurst)
    row = np.concatenate([gamma, gamma[-2:0:-1]])          # length 2n
    return np.fft.fft(row).real


def fgn_circulant(n: int, hurst: float, rng: np.random.Generator) -> tuple[np.ndarray, bool]:
    """Davies-Harte sample of ``n`` unit-step fGn increments.

    Returns the sample and whether the embedding was positive semi-definite.
    """
    lam = _circulant_eigenvalues(n, hurst)
    m = lam.size
    ok = bool(lam.min() >= -1e-10 * lam.max())
    lam = np.maximum(lam, 0.0)
    z = rng.standard_normal(m) + 1j * rng.standard_normal(m)
    return np.fft.fft(np.sqrt(lam / m) * z).real[:n], ok


def fgn_cholesky(n: int, hurst: float, rng: np.random.Generator) -> np.ndarray:
    gamma = fgn_autocovariance(n, hurst)[:n]
    lag = np.abs(np.subtract.outer(np.arange(n), np.arange(n)))
    L = np.linalg.cholesky(gamma[lag])
    return L @ rng.standard_normal(n)


def fbm_values(n: int, hurst: float, rng: np.random.Generator) -> tuple[np.ndarray, str]:
    """fBm sampled at ``j/(n-1)``, ``j = 0..n-1``, with ``B(0) = 0``.

    Uses exact circulant embedding; if the embedding is not positive
    semi-definite falls back to Cholesky (n <= 1024) or to clipped
    eigenvalues, and reports the method used.
    """
    steps = n - 1
    inc, ok = fgn_circulant(n, hurst, rng)
    method = "circulant"
    if not ok:
        if steps <= CHOLESKY_MAX:
            inc, method = fgn_cholesky(steps, hurst, rng), "cholesky"
        else:
            method = "circulant-clipped"
        warnings.warn(f"circulant embedding not PSD for H={hurst}, n={n}; used {method}",
                      FallbackWarning, stacklevel=3)
    inc = inc[:steps] * float(steps) ** (-hurst)
    return np.concatenate([[0.0], np.cumsum(inc)]), method


def weierstrass_values(x: np.ndarray, a: float, b: float, terms: int = 30) -> np.ndarray:
    out = np.zeros_like(x)
    for k in range(terms):
        # fmod keeps the cosine argument small; the lost precision only
        # affects terms of amplitude a^k.
        out += a**k * np.cos(2 * np.pi * np.fmod(b**k * x, 1.0))
    return out


def gen(spec: GeneratorSpec) -> SampledFunction:
    """Sample the function described by ``spec`` on ``linspace(0, 1, n)``."""
    spec.validate()
    p = spec.params
    x = uniform_grid(spec.n)
    if spec.kind == "constant":
        y = np.full(spec.n, float(p["c"]))
    elif spec.kind == "polynomial":
        y = np.polynomial.polynomial.polyval(x, np.asarray(p["coeffs"], dtype=float))
    elif spec.kind == "weierstrass":
        y = weierstrass_values(x, float(p["a"]), float(p["b"]), int(p.get("terms", 30)))
    else:
        rng = np.random.default_rng(spec.seed)
        y, method = fbm_values(spec.n, float(p["hurst"]), rng)
        log.debug("fbm H=%s n=%d seed=%s via %s", p["hurst"], spec.n, spec.seed, method)
    if p.get("renormalize"):
        span = np.ptp(y)
        y = (y - y.min()) / span if span > 0 else np.zeros_like(y)
    return SampledFunction(x, y)
