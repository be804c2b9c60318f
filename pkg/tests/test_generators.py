import warnings

import numpy as np
import pytest

from graphfourier import DomainError, FallbackWarning
from graphfourier.graphs import GeneratorSpec, box_dimension, fbm_values, gen
from graphfourier.graphs.boxdim import box_counts
from graphfourier.graphs.generators import _circulant_eigenvalues, fgn_autocovariance
from graphfourier.graphs.functions import SampledFunction, uniform_grid


def test_constant():
    f = gen(GeneratorSpec("constant", {"c": 0.3}, 16))
    assert len(f) == 16
    np.testing.assert_array_equal(f.values, 0.3)


def test_polynomial():
    f = gen(GeneratorSpec("polynomial", {"coeffs": [1, 0, -2]}, 11))
    np.testing.assert_allclose(f.values, 1 - 2 * f.xs**2)


def test_weierstrass_bound():
    f = gen(GeneratorSpec("weierstrass", {"a": 0.5, "b": 3, "terms": 30}, 2**12))
    assert np.max(np.abs(f.values)) <= 2.0
    assert f.values[0] == pytest.approx(2 - 0.5**30)


@pytest.mark.parametrize("spec", [
    GeneratorSpec("fbm", {"hurst": 0.5}, 1024),                  # no seed
    GeneratorSpec("fbm", {"hurst": 1.2}, 1024, 1),
    GeneratorSpec("fbm", {"hurst": 0.5}, 1000, 1),               # not a power of two
    GeneratorSpec("weierstrass", {"a": 0.2, "b": 2}, 64),        # a*b < 1
    GeneratorSpec("polynomial", {"coeffs": []}, 64),
    GeneratorSpec("constant", {}, 64),
    GeneratorSpec("spline", {}, 64),
    GeneratorSpec("constant", {"c": float("nan")}, 64),
])
def test_invalid_specs(spec):
    with pytest.raises(DomainError):
        gen(spec)


def test_fbm_is_reproducible_and_starts_at_zero():
    spec = GeneratorSpec("fbm", {"hurst": 0.7}, 1024, 42)
    a, b = gen(spec), gen(spec)
    np.testing.assert_array_equal(a.values, b.values)
    assert a.values[0] == 0.0
    assert not np.array_equal(a.values, gen(GeneratorSpec("fbm", {"hurst": 0.7}, 1024, 43)).values)


def test_fgn_autocovariance_brownian():
    g = fgn_autocovariance(10, 0.5)
    np.testing.assert_allclose(g, [1] + [0] * 10, atol=1e-15)


@pytest.mark.parametrize("H", [0.1, 0.3, 0.5, 0.7, 0.9])
def test_embedding_is_psd(H):
    lam = _circulant_eigenvalues(2**12, H)
    assert lam.min() >= -1e-10 * lam.max()


def test_bm_covariance_monte_carlo():
    # Var B(1) = 1 and Cov(B(1/2), B(1)) = 1/2 for standard Brownian motion
    n = 2**14
    rng = np.random.default_rng(2024)
    ends, mids = [], []
    for _ in range(200):
        v, method = fbm_values(n, 0.5, rng)
        assert method == "circulant"
        ends.append(v[-1])
        mids.append(np.interp(0.5, np.linspace(0, 1, n), v))
    ends, mids = np.array(ends), np.array(mids)
    assert 0.8 <= np.var(ends) <= 1.2
    assert 0.4 <= np.mean(ends * mids) <= 0.6


def test_fbm_variance_scaling():
    # Var B(t) = t^(2H)
    n, H = 2**10, 0.3
    rng = np.random.default_rng(5)
    paths = np.array([fbm_values(n, H, rng)[0] for _ in range(400)])
    t = np.linspace(0, 1, n)
    j = n // 4
    assert np.var(paths[:, j]) == pytest.approx(t[j] ** (2 * H), rel=0.2)


def test_fallback_flagged(monkeypatch):
    import graphfourier.graphs.generators as G

    def broken(n, hurst, rng):
        return np.zeros(n), False

    monkeypatch.setattr(G, "fgn_circulant", broken)
    with warnings.catch_warnings(record=True) as rec:
        warnings.simplefilter("always")
        v, method = G.fbm_values(64, 0.5, np.random.default_rng(0))
    assert method == "cholesky"
    assert any(issubclass(w.category, FallbackWarning) for w in rec)
    assert np.any(v != 0)
    with pytest.warns(FallbackWarning):
        _, method = G.fbm_values(2**12, 0.5, np.random.default_rng(0))
    assert method == "circulant-clipped"


def test_renormalize():
    f = gen(GeneratorSpec("fbm", {"hurst": 0.5, "renormalize": True}, 256, 1))
    assert f.values.min() == 0.0 and f.values.max() == 1.0


# ---- box dimension ----------------------------------------------------------

def test_box_dimension_constant():
    f = gen(GeneratorSpec("constant", {"c": 0.7}, 2**12))
    assert box_dimension(f) == pytest.approx(1.0, abs=0.05)


def test_box_dimension_parabola():
    f = gen(GeneratorSpec("polynomial", {"coeffs": [0, 0, 1]}, 2**12))
    assert box_dimension(f) == pytest.approx(1.0, abs=0.05)


def test_box_dimension_weierstrass():
    # graph dimension 2 + log(a)/log(b) = 1.5 for a = 1/2, b = 4
    f = gen(GeneratorSpec("weierstrass", {"a": 0.5, "b": 4, "terms": 20}, 2**16))
    assert box_dimension(f) == pytest.approx(1.5, abs=0.1)


def test_box_counts_of_segment():
    f = SampledFunction(uniform_grid(1025), np.zeros(1025))
    np.testing.assert_array_equal(box_counts(f, [3, 4, 5]), [8, 16, 32])


def test_box_dimension_needs_points():
    with pytest.raises(DomainError):
        box_dimension(SampledFunction(uniform_grid(512), np.zeros(512)))
    xs = np.sort(np.concatenate([[0, 1], np.random.default_rng(0).random(2000)]))
    with pytest.raises(DomainError):
        box_dimension(SampledFunction(xs, np.zeros_like(xs)))
