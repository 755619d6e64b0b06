import numpy as np
from hypothesis import HealthCheck, assume, given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from hyperlab.constructions import make_alpha, sample_A_alpha, sample_Z_module
from hyperlab.density import Window, coverage, verdict
from hyperlab.linalg import complex_to_real_embedding, membership_distance, project, subspace_from_basis
from hyperlab.semigroup import make_semigroup, orbit
from hyperlab.surd import Surd

from property_checks import SQUAREFREE

FAST = settings(max_examples=150, deadline=None, derandomize=True, database=None,
                suppress_health_check=list(HealthCheck))
real = st.floats(-5.0, 5.0, allow_nan=False)


@FAST
@given(n=st.integers(1, 2), data=st.data(), S=st.integers(0, 20), extra=st.integers(0, 20))
def test_a_alpha_sample_grows_with_bound(n, data, S, extra):
    primes = data.draw(st.lists(st.sampled_from(SQUAREFREE), min_size=n, max_size=n, unique=True))
    lo = data.draw(st.floats(-3.0, 0.0))
    W = Window.cube(n, lo, lo + 2.0)
    small = set(map(tuple, sample_A_alpha(make_alpha(n, primes), S, W).meta.tolist()))
    big = set(map(tuple, sample_A_alpha(make_alpha(n, primes), S + extra, W).meta.tolist()))
    assert small <= big


@FAST
@given(K=st.integers(0, 5), extra=st.integers(0, 4))
def test_z_module_sample_grows_with_bound(K, extra):
    g = [[1, 0], [Surd.sqrt(2), Surd.sqrt(3)]]
    W = Window.cube(2, -2.0, 2.0)
    a = set(map(tuple, sample_Z_module(g, K, W).meta.tolist()))
    b = set(map(tuple, sample_Z_module(g, K + extra, W).meta.tolist()))
    assert a <= b


@FAST
@given(z=arrays(np.complex128, (3,), elements=st.complex_numbers(max_magnitude=1e3, allow_nan=False)),
       w=arrays(np.complex128, (3,), elements=st.complex_numbers(max_magnitude=1e3, allow_nan=False)))
def test_embedding_additive_injective_isometric(z, w):
    pz, pw = complex_to_real_embedding(z), complex_to_real_embedding(w)
    assert np.array_equal(complex_to_real_embedding(z + w), pz + pw)
    assert np.array_equal(pz, pw) == np.array_equal(z, w)
    assert np.isclose(np.linalg.norm(pz), np.linalg.norm(z), rtol=1e-15, atol=0)


@FAST
@given(pts=st.integers(0, 80).flatmap(lambda k: arrays(np.float64, (k, 2), elements=st.floats(-2.0, 2.0))),
       eps=st.sampled_from([0.5, 0.25, 0.2]))
def test_refinement_never_grows_hit_measure(pts, eps):
    W = Window.cube(2, -2.0, 2.0)
    assert coverage(pts, W, eps / 2).cell_measure() <= coverage(pts, W, eps).cell_measure() + 1e-12


@FAST
@given(trend=st.lists(st.floats(0.0, 1.0), min_size=3, max_size=6).map(sorted))
def test_verdict_is_a_function_of_the_trend(trend):
    v = verdict(trend)
    assert v == verdict(list(trend))
    if v == "DenseEvidence":
        assert trend[-1] >= 0.9
    if v == "NotDenseEvidence":
        assert trend[-1] <= 0.5 and trend[-1] - trend[-2] < 0.01


@FAST
@given(B=arrays(np.float64, st.tuples(st.integers(1, 3), st.just(4)), elements=real),
       p=arrays(np.float64, (4,), elements=real))
def test_membership_distance_zero_iff_fixed_by_projection(B, p):
    assume(np.linalg.norm(B, axis=1).max() > 1e-3)
    M = subspace_from_basis(list(B))
    q = project(p, M)
    assert membership_distance(q, M) <= 1e-12 * (1 + np.linalg.norm(p))
    fixed = np.allclose(q, p, rtol=0, atol=1e-9 * (1 + np.linalg.norm(p)))
    assert fixed == (membership_distance(p, M) <= 1e-9 * (1 + np.linalg.norm(p)))


@FAST
@given(data=st.data())
def test_commuting_orbit_points_ignore_factor_order(data):
    rng = np.random.default_rng(data.draw(st.integers(0, 2**32 - 1)))
    X = rng.normal(size=(3, 3)) / 2
    coeffs = rng.uniform(-0.6, 0.6, size=(3, 3))
    gens = [c[0] * np.eye(3) + c[1] * X + c[2] * X @ X for c in coeffs]
    v = rng.normal(size=3)
    s = orbit(make_semigroup(gens, abelian=True), v, 3)
    for k, p in zip(s.meta, s.points):
        w = v.copy()
        for A, e in reversed(list(zip(gens, k))):
            w = np.linalg.matrix_power(A, int(e)) @ w
        assert np.linalg.norm(w - p) <= 1e-9 * max(1.0, np.linalg.norm(p))
