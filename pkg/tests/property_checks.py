"""Randomized metric properties shared by the property tests and the
acceptance suite.

Each ``check_*`` is a hypothesis test; calling it runs ``EXAMPLES`` cases
and bumps ``COUNTS[name]`` once per case, so callers can confirm how many
checks actually ran.
"""

from collections import Counter

import numpy as np
from hypothesis import HealthCheck, assume, given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from hyperlab.constructions import (
    angle_grid,
    make_alpha,
    parse_token,
    radial_grid,
    reconstruct,
    sample_A2,
    sample_A_alpha,
    sample_A_alpha_beta,
    sample_B,
    sample_Z_module,
)
from hyperlab.density import PolyDisc, Window, coverage, merge
from hyperlab.linalg import project, subspace_from_basis

EXAMPLES = 2500
COUNTS: Counter = Counter()
SQUAREFREE = [2, 3, 5, 6, 7, 10, 11, 13]

SETTINGS = settings(max_examples=EXAMPLES, deadline=None, derandomize=True, database=None,
                    suppress_health_check=list(HealthCheck))

finite = st.floats(-3.0, 3.0, allow_nan=False, allow_infinity=False)
point_clouds = st.integers(0, 60).flatmap(lambda k: arrays(np.float64, (k, 2), elements=finite))
regions = st.sampled_from([Window.cube(2, -2.0, 2.0), Window((-1.0, 0.0), (1.5, 2.5)), PolyDisc(1, 2.0)])
epsilons = st.sampled_from([0.1, 0.25, 0.5, 0.3])


def _hit_set(c):
    return {tuple(np.atleast_1d(r)) for r in c.hits.tolist()}


@SETTINGS
@given(cloud=point_clouds, data=st.data(), region=regions, eps=epsilons)
def check_coverage_monotone(cloud, data, region, eps):
    """A subset never hits a cell its superset misses; coverage stays in [0, 1]."""
    COUNTS["coverage monotonicity"] += 1
    mask = data.draw(arrays(np.bool_, (len(cloud),)))
    big, small = coverage(cloud, region, eps), coverage(cloud[mask], region, eps)
    assert _hit_set(small) <= _hit_set(big)
    assert 0.0 <= small.coverage <= big.coverage <= 1.0


@SETTINGS
@given(a=point_clouds, b=point_clouds, c=point_clouds, region=regions, eps=epsilons)
def check_merge_algebra(a, b, c, region, eps):
    """merge is commutative, associative, idempotent and matches the union."""
    COUNTS["merge algebra"] += 1
    A, B, C = (coverage(x, region, eps) for x in (a, b, c))
    same = lambda x, y: np.array_equal(x.hits, y.hits)  # noqa: E731
    assert same(merge(A, B), merge(B, A))
    assert same(merge(merge(A, B), C), merge(A, merge(B, C)))
    assert same(merge(A, A), A)
    assert same(merge(A, B), coverage(np.concatenate([a, b]), region, eps))


@st.composite
def samples(draw):
    kind = draw(st.sampled_from(["A_alpha", "A_alpha_beta", "A2", "B", "Z_module"]))
    if kind == "A_alpha":
        n = draw(st.integers(1, 2))
        primes = draw(st.lists(st.sampled_from(SQUAREFREE), min_size=n, max_size=n, unique=True))
        lo = draw(st.floats(-3.0, 0.5))
        width = draw(st.floats(0.5, 3.0))
        return sample_A_alpha(make_alpha(n, primes), draw(st.integers(0, 25)), Window.cube(n, lo, lo + width))
    if kind == "A_alpha_beta":
        primes = draw(st.lists(st.sampled_from(SQUAREFREE), min_size=2, max_size=2, unique=True))
        lo = draw(st.floats(-2.0, 0.5))
        return sample_A_alpha_beta(make_alpha(1, primes[:1]), make_alpha(1, primes[1:]), draw(st.integers(0, 15)),
                                   Window.cube(2, lo, lo + 1.5))
    if kind == "A2":
        t1, t2 = draw(st.sampled_from([(2 ** 0.5, 3 ** 0.5), (5 ** 0.5, 7 ** 0.5), (0.1, 0.7)]))
        step = draw(st.sampled_from([0.25, 0.5]))
        return sample_A2(t1, t2, radial_grid(step, 1.0), draw(st.integers(0, 12)))
    if kind == "B":
        k = draw(st.integers(1, 6))
        return sample_B(radial_grid(1.0 / k, 1.5), angle_grid(4 * k))
    g = draw(st.sampled_from([[["1", "0"], ["sqrt(2)", "sqrt(3)"]], [["1", "1/2"], ["sqrt(5)", "-1"]]]))
    g = [[parse_token(x) for x in row] for row in g]
    return sample_Z_module(g, draw(st.integers(0, 6)), Window.cube(2, -2.0, 2.0))


@SETTINGS
@given(sample=samples())
def check_sampler_reproducible(sample):
    """Every sampled point is recomputed bit-for-bit from its metadata."""
    COUNTS["sampler reproducibility"] += 1
    assert reconstruct(sample).tobytes() == sample.points.tobytes()


@st.composite
def subspace_cases(draw):
    d = draw(st.integers(2, 6))
    r = draw(st.integers(1, d - 1))
    cplx = draw(st.booleans())
    elems = st.floats(-10.0, 10.0, allow_nan=False)
    B = draw(arrays(np.float64, (r, d), elements=elems))
    p = draw(arrays(np.float64, (d,), elements=st.floats(-1e3, 1e3, allow_nan=False)))
    if cplx:
        B = B + 1j * draw(arrays(np.float64, (r, d), elements=elems))
        p = p + 1j * draw(arrays(np.float64, (d,), elements=st.floats(-1e3, 1e3, allow_nan=False)))
    return B, p


@SETTINGS
@given(case=subspace_cases())
def check_projection_idempotent(case):
    """project(project(p)) == project(p) and projection never grows the norm."""
    B, p = case
    # below the absolute tolerance floor a basis counts as numerically zero
    assume(np.linalg.norm(B, axis=1).max() > 1e-9)
    COUNTS["projection idempotence"] += 1
    M = subspace_from_basis(list(B))
    q = project(p, M)
    scale = 1e-12 * (1 + np.linalg.norm(p))
    assert np.linalg.norm(project(q, M) - q) <= scale
    assert np.linalg.norm(q) <= np.linalg.norm(p) + scale


ALL_CHECKS = {
    "coverage monotonicity": check_coverage_monotone,
    "merge algebra": check_merge_algebra,
    "sampler reproducibility": check_sampler_reproducible,
    "projection idempotence": check_projection_idempotent,
}
