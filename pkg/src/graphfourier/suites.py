"""Randomized verification suites for the inequalities behind the library.

Each suite returns a :class:`SuiteResult`; ``verify-lemmas`` on the command
line prints one row per suite.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .builders import random_base, uniform_base
from .graphs import (
    GeneratorSpec,
    SampledFunction,
    cosine_sum_minimum,
    gen,
    good_function,
    graph_pushforward,
    transport,
    uniform_grid,
    verify_good_bound,
)
from .graphs.goodfn import COS_SUM_MIN
from .measures import (
    AtomicMeasure2D,
    decay_exponent,
    ft_eval,
    ft_eval_1d,
    project_1d,
    resolution_cutoff,
)

DECAY_LIMIT = 1.15


@dataclass
class SuiteResult:
    name: str
    trials: int
    failures: int
    statistic: float
    detail: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.failures == 0


def random_smooth(xs: np.ndarray, rng: np.random.Generator, modes: int = 6,
                  scale: float = 1.0) -> np.ndarray:
    k = np.arange(1, modes + 1)
    amp = scale * rng.standard_normal(modes) / k
    phase = rng.uniform(0, 2 * np.pi, modes)
    return np.cos(2 * np.pi * np.outer(xs, k) + phase) @ amp


def transport_suite(seed: int, trials: int = 200, n_grid: int = 257,
                    max_dist: float = 0.1, max_freq: float = 256.0) -> SuiteResult:
    """Check ``|mu_hat - (T mu)^| <= 2 pi |xi| ||g - h||`` on random instances."""
    rng = np.random.default_rng(seed)
    xs = uniform_grid(n_grid)
    failures, worst = 0, 0.0
    for trial in range(trials):
        if trial % 10 == 0:
            # constant shift: the closed form |1 - e^{-2 pi i c xi_2}| |mu_1_hat|
            g = SampledFunction(xs, np.zeros(n_grid))
            h = SampledFunction(xs, np.full(n_grid, rng.uniform(-max_dist, max_dist)))
        else:
            gv = random_smooth(xs, rng)
            d = random_smooth(xs, rng, modes=12)
            d *= rng.uniform(0, max_dist) / max(np.max(np.abs(d)), 1e-300)
            g, h = SampledFunction(xs, gv), SampledFunction(xs, gv + d)
        mu = graph_pushforward(g, random_base(g, rng))
        nu = transport(mu, g, h)
        r = rng.uniform(0, max_freq)
        a = rng.uniform(0, 2 * np.pi)
        xi = np.array([[r * np.cos(a), r * np.sin(a)]])
        lhs = abs(ft_eval(mu, xi)[0] - ft_eval(nu, xi)[0])
        rhs = 2 * np.pi * r * g.sup_distance(h)
        if lhs > rhs + 1e-9:
            failures += 1
        if rhs > 0:
            worst = max(worst, lhs / rhs)
    return SuiteResult("transport stability", trials, failures, worst,
                       {"max_ratio": worst})


def _adversarial_weights(rng, idx_major, idx_minor, key_minor, major_mass):
    """Put ``major_mass`` on random major atoms and the rest on the minor
    atoms where ``cos + cos 2`` is most negative."""
    n_major = int(rng.integers(1, min(len(idx_major), 50) + 1))
    pick_major = rng.choice(idx_major, size=n_major, replace=False)
    worst = idx_minor[np.argsort(key_minor)[: min(len(idx_minor), 5)]]
    w_major = rng.dirichlet(np.ones(n_major)) * major_mass
    w_minor = rng.dirichlet(np.ones(len(worst))) * (1 - major_mass)
    return np.concatenate([pick_major, worst]), np.concatenate([w_major, w_minor])


def good_bound_suite(seed: int, n_functions: int = 5, n_measures: int = 500,
                     n_grid: int = 4097) -> SuiteResult:
    """Check the four-probe non-decay bound for measures on good functions."""
    rng = np.random.default_rng(seed)
    xs = uniform_grid(n_grid)
    failures, trials = 0, 0
    min_sum, min_max = math.inf, math.inf
    Ns = []
    for _ in range(n_functions):
        f = SampledFunction(xs, 0.5 + random_smooth(xs, rng, scale=0.3))
        M = int(2 ** rng.integers(1, 5))
        eps = float(rng.uniform(0.05, 0.2))
        g = good_function(f, M, eps)
        Ns.append(g.N)
        H = np.asarray(g.horizontal_idx)
        V = np.asarray(g.vertical_idx)
        N = g.N
        cos_y = np.cos(2 * np.pi * N * g.fn.values) + np.cos(4 * np.pi * N * g.fn.values)
        cos_x = np.cos(2 * np.pi * N * g.fn.xs) + np.cos(4 * np.pi * N * g.fn.xs)
        pts = g.fn.graph_points
        for m in range(n_measures):
            kind = m % 4
            if kind == 1 and len(V):
                # H-branch worst case: half the mass on V at the worst heights
                idx, w = _adversarial_weights(rng, H, V, cos_y[V], 0.5)
            elif kind == 2 and len(V):
                # V-branch worst case: H mass just under one half at the worst abscissae
                idx, w = _adversarial_weights(rng, V, H, cos_x[H], 0.5 + 1e-9)
            else:
                p_h = rng.uniform() if len(V) else 1.0
                parts, weights = [], []
                for piece, mass in ((H, p_h), (V, 1 - p_h)):
                    if mass <= 0 or not len(piece):
                        continue
                    k = int(rng.integers(1, min(len(piece), 200) + 1))
                    parts.append(rng.choice(piece, size=k, replace=False))
                    weights.append(rng.dirichlet(np.ones(k)) * mass)
                idx, w = np.concatenate(parts), np.concatenate(weights)
            mu = AtomicMeasure2D.from_masses(pts[idx], w)
            rep = verify_good_bound(g, mu)
            trials += 1
            failures += not rep.passes
            min_sum = min(min_sum, rep.sum_bound_value)
            min_max = min(min_max, max(rep.four_moduli))
    return SuiteResult("good-function non-decay", trials, failures, min_sum,
                       {"min_sum_bound": min_sum, "min_max_modulus": min_max, "N": Ns})


def cosine_suite(n_points: int = 10**6) -> SuiteResult:
    value, cos_at = cosine_sum_minimum(n_points)
    bad = abs(value - COS_SUM_MIN) > 1e-9 or abs(cos_at + 0.25) > 1e-4
    return SuiteResult("cos + cos2 minimum", n_points, int(bad), value,
                       {"cos_min": value, "cos_at_minimizer": cos_at})


def projection_suite(seed: int, trials: int = 100) -> SuiteResult:
    """Compare the 1D transform of a projection with the planar transform on a line."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for trial in range(trials):
        M = int(rng.integers(1, 200))
        mu = AtomicMeasure2D.from_masses(rng.uniform(-1, 2, (M, 2)), rng.random(M) + 1e-3)
        a = 0.0 if trial % 5 == 0 else rng.uniform(0, 2 * np.pi)
        e = np.array([math.cos(a), math.sin(a)])
        t = rng.uniform(-300, 300, 8)
        err = np.max(np.abs(ft_eval_1d(project_1d(mu, e), t) - ft_eval(mu, np.outer(t, e))))
        worst = max(worst, float(err))
    return SuiteResult("projection identity", trials, int(worst > 1e-12), worst,
                       {"max_error": worst})


def decay_sweep_specs(seed: int, n: int = 4096) -> list[tuple[str, GeneratorSpec]]:
    """Thirty generator specs: constants, polynomials, Weierstrass and fBm."""
    rng = np.random.default_rng(seed)
    specs = []
    for c in (0.0, 0.3, -1.7):
        specs.append((f"constant c={c}", GeneratorSpec("constant", {"c": c}, n)))
    for coeffs in ([0, 0, 1], [0.2, -1, 3, -2], [0, 1], [1, 0, 0, 0, -1],
                   [0, 2, -2], [0.5, 0.3, -0.8, 0.4]):
        specs.append((f"polynomial {coeffs}", GeneratorSpec("polynomial", {"coeffs": coeffs}, n)))
    for a, b in ((0.5, 3), (0.6, 2), (0.7, 2), (0.4, 3), (0.5, 2), (0.3, 4)):
        specs.append((f"weierstrass a={a} b={b}",
                      GeneratorSpec("weierstrass", {"a": a, "b": b, "terms": 30}, n)))
    for H in (0.3, 0.5, 0.7):
        for _ in range(5):
            s = int(rng.integers(2**63))
            specs.append((f"fbm H={H} seed={s}", GeneratorSpec("fbm", {"hurst": H}, n, s)))
    return specs


def graph_decay(f: SampledFunction, R_min: float = 2.0, R_cap: float = 256.0,
                annuli_per_octave: int = 2, threads: int = 1):
    """Decay estimate for the uniform graph measure of ``f`` on trusted annuli."""
    mu = graph_pushforward(f, uniform_base(f))
    R_max = min(R_cap, resolution_cutoff(mu))
    R_max = max(R_max, 2 ** (1 + 1 / annuli_per_octave) * R_min)
    return decay_exponent(mu, R_min, R_max, annuli_per_octave, threads=threads)


def decay_sweep(seed: int, n: int = 4096, threads: int = 1) -> SuiteResult:
    rows = []
    for label, spec in decay_sweep_specs(seed, n):
        est = graph_decay(gen(spec), threads=threads)
        rows.append((label, est.exponent_s, max(a.R for a in est.annuli) * 2))
    worst = max(s for _, s, _ in rows)
    failures = sum(s > DECAY_LIMIT for _, s, _ in rows)
    return SuiteResult("graph decay exponent <= 1.15", len(rows), failures, worst,
                       {"rows": rows})
