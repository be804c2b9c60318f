"""Property-based checks of the exact identities and inequalities."""
import math

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from graphfourier import AtomicMeasure1D, AtomicMeasure2D, autocorrelation_mass, ft_eval, ft_eval_1d, project_1d
from graphfourier.graphs import SampledFunction, affine_extend, restrict, transport, uniform_grid
from graphfourier.measures import atom_mass_squares
from graphfourier.slicing import riesz_energy

coord = st.floats(-3, 3, allow_nan=False, allow_infinity=False)
freq = st.floats(-400, 400, allow_nan=False, allow_infinity=False)
# phases t * <e, p> up to ~200 keep one rounding step well below 1e-12
line_freq = st.floats(-50, 50, allow_nan=False, allow_infinity=False)


@st.composite
def measures(draw, max_atoms=40):
    n = draw(st.integers(1, max_atoms))
    pts = draw(arrays(float, (n, 2), elements=coord))
    w = draw(arrays(float, n, elements=st.floats(0.01, 1.0)))
    return AtomicMeasure2D.from_masses(pts, w)


@settings(max_examples=100, deadline=None)
@given(measures(), freq, freq)
def test_modulus_bounded_and_hermitian(mu, a, b):
    v, w = ft_eval(mu, [(a, b), (-a, -b)])
    assert abs(v) <= 1 + 1e-12
    assert abs(w - np.conj(v)) <= 1e-12


@settings(max_examples=100, deadline=None)
@given(measures(), st.floats(0, 2 * math.pi), arrays(float, 4, elements=line_freq))
def test_projection_identity(mu, angle, t):
    e = np.array([math.cos(angle), math.sin(angle)])
    e /= math.hypot(*e)
    got = ft_eval_1d(project_1d(mu, e), t)
    want = ft_eval(mu, np.outer(t, e))
    assert np.max(np.abs(got - want)) <= 1e-12


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 60), st.data())
def test_transport_bound(n, data):
    xs = uniform_grid(n)
    g = data.draw(arrays(float, n, elements=st.floats(-2, 2)))
    d = data.draw(arrays(float, n, elements=st.floats(-0.1, 0.1)))
    w = data.draw(arrays(float, n, elements=st.floats(0.0, 1.0)).filter(lambda a: a.sum() > 0.01))
    xi = np.array([data.draw(freq), data.draw(freq)])
    G, H = SampledFunction(xs, g), SampledFunction(xs, g + d)
    mu = AtomicMeasure2D.from_masses(G.graph_points, w)
    nu = transport(mu, G, H)
    lhs = abs(ft_eval(mu, xi)[0] - ft_eval(nu, xi)[0])
    assert lhs <= 2 * math.pi * math.hypot(*xi) * G.sup_distance(H) + 1e-9


@settings(max_examples=60, deadline=None)
@given(arrays(float, st.integers(1, 80), elements=st.sampled_from([0.0, 0.1, 0.25, 0.5, 0.7, 1.0]))
       .map(lambda a: a + 0.0), st.floats(1e-9, 1.0))
def test_autocorrelation_limit_and_monotone(t, lam):
    w = np.linspace(1, 2, len(t))
    nu = AtomicMeasure1D.from_masses(t, w)
    small = autocorrelation_mass(nu, 1e-13)
    assert math.isclose(small, atom_mass_squares(nu), abs_tol=1e-14)
    assert autocorrelation_mass(nu, lam) >= small - 1e-15
    assert autocorrelation_mass(nu, 2 * lam) >= autocorrelation_mass(nu, lam) - 1e-15


@settings(max_examples=40, deadline=None)
@given(st.lists(st.floats(0.001, 0.999), min_size=0, max_size=30, unique=True), st.data())
def test_affine_extend_restrict(inner, data):
    E = np.unique(np.concatenate([[0.0, 1.0], inner]))
    E = E[np.concatenate([[True], np.diff(E) > 1e-6])]
    E[-1] = 1.0
    vals = data.draw(arrays(float, len(E), elements=st.floats(-5, 5)))
    F = affine_extend(SampledFunction(E, vals), 257)
    np.testing.assert_array_equal(restrict(F, E).values, vals)


@settings(max_examples=40, deadline=None)
@given(arrays(float, st.integers(2, 40), elements=st.floats(0, 1), unique=True),
       st.floats(0.05, 0.95), st.floats(1.5, 8.0))
def test_energy_scaling(t, u, c):
    t = t[np.argsort(t)]
    if np.min(np.diff(t)) <= 1e-9:
        return
    nu = AtomicMeasure1D.uniform(t)
    e1 = riesz_energy(nu, u)
    e2 = riesz_energy(AtomicMeasure1D.uniform(c * t), u)
    assert math.isclose(e2, c**-u * e1, rel_tol=1e-11)
