import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest

from hyperlab.density import DENSE, NOT_DENSE, Window
from hyperlab.errors import (
    ConfigError,
    DimensionMismatch,
    NoNontrivialCanonical,
    NotCommuting,
    NotCoprime,
    Overflow,
    RationalTheta,
)
from hyperlab.linalg import membership_distance, subspace_from_basis
from hyperlab.normal_form import normal_form
from hyperlab.semigroup import (
    canonical_invariant_subspace,
    example_dense_spectrum_C2,
    example_G_theta,
    example_R3,
    hypercyclicity_probe,
    is_invariant,
    javaheri_orbit,
    javaheri_semigroup,
    javaheri_trace,
    line_trace_G_theta,
    log_coverage,
    make_semigroup,
    orbit,
    orbit_cover,
    planted_javaheri,
    rotation,
    rotation_guard,
    spectrum,
    subspace_hypercyclicity_probe,
    witness_in_subspace,
)
from hyperlab.surd import Surd

from oracle_values import (
    G_THETA_COVER_K25_S200,
    SCALAR_LOG_COVER,
    SIGNED_SPECTRUM_COVER_K40,
    SIN_GUARD_100,
    SIN_GUARD_200,
)

SQ2 = math.sqrt(2)
BOX2 = Window.cube(2, -2.0, 2.0)


# construction --------------------------------------------------------------

def test_make_semigroup_detects_commuting():
    G = make_semigroup([np.diag([2.0, 3.0]), np.diag([5.0, 7.0])])
    assert G.abelian and G.field == "R" and G.names == ("A1", "A2")


def test_make_semigroup_rejects_noncommuting_when_abelian_requested():
    A = np.array([[1.0, 1.0], [0.0, 1.0]])
    B = np.array([[1.0, 0.0], [1.0, 1.0]])
    with pytest.raises(NotCommuting):
        make_semigroup([A, B], abelian=True)
    assert not make_semigroup([A, B]).abelian


def test_make_semigroup_shape_errors():
    with pytest.raises(DimensionMismatch):
        make_semigroup([np.eye(2), np.eye(3)])
    with pytest.raises(ConfigError):
        make_semigroup([])
    with pytest.raises(ConfigError):
        make_semigroup([np.eye(2)], weights=[1.0, 2.0])


def test_weights_scale_bounds():
    G = make_semigroup([np.eye(2), np.eye(2)], weights=[1.0, 2.5])
    assert G.bounds(4) == (4, 10)


# orbit engine --------------------------------------------------------------

def test_identity_orbit_is_single_point():
    G = make_semigroup([np.eye(2)])
    s = orbit(G, [0.3, -0.7], 10)
    assert np.unique(s.points, axis=0).tolist() == [[0.3, -0.7]]


def test_scalar_doubling_orbit():
    G = make_semigroup([2 * np.eye(2)])
    s = orbit(G, [1.0, 0.0], 3)
    assert s.points.tolist() == [[1.0, 0.0], [2.0, 0.0], [4.0, 0.0], [8.0, 0.0]]
    assert s.meta[:, 0].tolist() == [0, 1, 2, 3]


def test_g_theta_orbit_matches_formula():
    G = example_G_theta(2, 3, SQ2, weights=(1, 1, 1))
    v = np.array([0.4, -0.2])
    s = orbit(G, v, 3)
    assert len(s.points) == 4**3
    for (k, m, t), p in zip(s.meta, s.points):
        want = (2.0**k / 3.0**m) * rotation(math.pi * t * SQ2) @ v
        assert np.allclose(p, want, rtol=1e-12, atol=1e-15)


def test_orbit_is_order_independent_for_commuting_generators():
    gens = [np.array([[2.0, 1.0], [0.0, 2.0]]), np.array([[3.0, 0.0], [0.0, 3.0]]), np.array([[1.0, 1.0], [0.0, 1.0]])]
    a = orbit(make_semigroup(gens), [0.5, 1.0], 3).points
    b = orbit(make_semigroup(gens[::-1]), [0.5, 1.0], 3).points
    key = lambda P: sorted(map(tuple, np.round(P, 9).tolist()))  # noqa: E731
    assert key(a) == key(b)


def test_orbit_window_filter_keeps_exactly_inside_points():
    G = example_G_theta(2, 3, SQ2)
    full = orbit(G, [1.0, 0.0], 6)
    cut = orbit(G, [1.0, 0.0], 6, BOX2)
    inside = full.points[BOX2.contains(full.points)]
    assert sorted(map(tuple, cut.points.tolist())) == sorted(map(tuple, inside.tolist()))


def test_orbit_rejects_noncommuting():
    with pytest.raises(NotCommuting):
        orbit(planted_javaheri(3), [1, 0, 0], 2)


def test_orbit_exact_mode():
    G = make_semigroup([np.array([[Fraction(2), Fraction(0)], [Fraction(1), Fraction(2)]], dtype=object)])
    s = orbit(G, [Fraction(1), Fraction(0)], 3, mode="exact")
    assert [r[1] for r in s.exact_rows()] == [Surd(0), Surd(1), Surd(4), Surd(12)]


def test_overflow_is_reported():
    G = make_semigroup([np.array([[1e200]])])
    with pytest.raises(Overflow):
        orbit(G, [1.0], 5)


def test_orbit_cover_g_theta_oracle():
    G = example_G_theta(2, 3, SQ2)
    c = orbit_cover(G, [1.0, 0.0], 25, BOX2, 0.1)
    hits, total = G_THETA_COVER_K25_S200
    assert c.coverage == hits / total


def test_orbit_cover_product_equals_materialized_cover():
    G = example_dense_spectrum_C2()
    W = Window.cube(4, -2.0, 2.0)
    c = orbit_cover(G, np.array([1.0 + 0j, 1.0 + 0j]), 4, W, 0.5)
    s = orbit(G, np.array([1.0 + 0j, 1.0 + 0j]), 4, W)
    from hyperlab.density import coverage
    from hyperlab.linalg import complex_to_real_embedding
    assert c.coverage == coverage(complex_to_real_embedding(s.points), W, 0.5).coverage


# probes ----------------------------------------------------------------------

def test_g_theta_probe_dense():
    r = hypercyclicity_probe(example_G_theta(2, 3, SQ2))
    assert r.report.verdict == DENSE
    assert r.report.trend == sorted(r.report.trend)


def test_scalings_alone_not_dense():
    G = example_G_theta(2, 3, SQ2)
    r = hypercyclicity_probe(make_semigroup(G.float_generators()[:2]))
    assert r.report.verdict == NOT_DENSE


def test_identity_probe_not_dense():
    assert hypercyclicity_probe(make_semigroup([np.eye(2)])).report.verdict == NOT_DENSE


def test_probe_cross_checks_recorded():
    r = hypercyclicity_probe(example_G_theta(2, 3, SQ2), cross_checks=2, seed=3)
    assert len(r.cross_checks) == 2
    assert all(0.0 <= c["coverage"] <= 1.0 for c in r.cross_checks)


# canonical subspace and witnesses --------------------------------------------

@pytest.mark.parametrize("make", [example_dense_spectrum_C2, example_R3])
def test_canonical_subspace_is_invariant_with_dense_witness(make):
    G = make()
    nf = normal_form(G.float_generators(), G.field)
    M = canonical_invariant_subspace(nf)
    assert 0 < M.dim < G.n
    ok, err = is_invariant(G, M)
    assert ok, err
    y, rep = witness_in_subspace(G, M)
    assert y is not None and rep.verdict == DENSE
    assert membership_distance(y, M) <= 1e-12


def test_g_theta_has_no_proper_canonical_subspace():
    nf = normal_form(example_G_theta(2, 3, SQ2).float_generators(), "R")
    with pytest.raises(NoNontrivialCanonical):
        canonical_invariant_subspace(nf)


def test_non_invariant_subspace_detected():
    G = example_G_theta(2, 3, SQ2)
    ok, err = is_invariant(G, subspace_from_basis([[1.0, 0.0]]))
    assert not ok and err > 0.1


def test_g_theta_line_trace_not_dense():
    G = example_G_theta(2, 3, SQ2)
    rep = subspace_hypercyclicity_probe(G, subspace_from_basis([[1.0, 0.0]]), [1.0, 0.0], Window((-2.0,), (2.0,)))
    assert rep.verdict == NOT_DENSE


# spectra -------------------------------------------------------------------------

def test_signed_spectrum_oracle():
    G = example_R3()
    nf = normal_form(G.float_generators(), "R")
    s, rep = spectrum(G, nf, 0, 40, Window((-2.0,), (2.0,)), 0.1)
    hits, total = SIGNED_SPECTRUM_COVER_K40
    assert rep.coverage == hits / total
    assert rep.verdict == DENSE
    assert np.all(np.abs(np.abs(s.values) - 2.0 ** s.exponents[:, 0] / 3.0 ** s.exponents[:, 1]) <= 1e-9 * np.abs(s.values))


def test_g_theta_spectrum_moduli():
    G = example_G_theta(2, 3, SQ2, weights=(1, 1, 1))
    nf = normal_form(G.float_generators(), "R")
    s, _ = spectrum(G, nf, 0, 4)
    mods = sorted(set(np.round(np.abs(s.values), 12)))
    want = sorted({round(2.0**k / 3.0**m, 12) for k in range(5) for m in range(5)})
    assert mods == want


def test_spectrum_block_out_of_range():
    G = example_R3()
    nf = normal_form(G.float_generators(), "R")
    with pytest.raises(ConfigError):
        spectrum(G, nf, 5, 3)


# G_theta example -----------------------------------------------------------

def test_g_theta_parameter_errors():
    with pytest.raises(NotCoprime):
        example_G_theta(2, 4, SQ2)
    with pytest.raises(RationalTheta):
        example_G_theta(2, 3, Fraction(1, 2))
    with pytest.raises(RationalTheta):
        example_G_theta(2, 3, Surd(3))
    with pytest.raises(ConfigError):
        example_G_theta(1, 3, SQ2)


def test_g_theta_surd_theta_certified():
    G = example_G_theta(2, 3, Surd.sqrt(2))
    assert G.info["certified"]


def test_line_trace_bound_zero():
    tr = line_trace_G_theta(2, 3, Surd.sqrt(2), [1.0, 0.0], 0)
    assert tr.scalars == [Fraction(1)] and tr.guard == math.inf


def test_line_trace_bound_three():
    tr = line_trace_G_theta(2, 3, Surd.sqrt(2), [1.0, 1.0], 3)
    assert set(tr.scalars) == {Fraction(2**k, 3**m) for k in range(4) for m in range(4)}
    assert len(tr.scalars) == 16


@pytest.mark.parametrize("bound, want", [(100, SIN_GUARD_100), (200, SIN_GUARD_200)])
def test_rotation_guard_matches_high_precision(bound, want):
    assert rotation_guard(Surd.sqrt(2), bound) == pytest.approx(want, rel=1e-12)


def test_rotation_guard_small_bound_direct():
    mpmath.mp.dps = 30
    want = min(abs(mpmath.sin(mpmath.pi * s * mpmath.sqrt(3))) for s in range(1, 11))
    assert rotation_guard(Surd.sqrt(3), 10) == pytest.approx(float(want), rel=1e-12)


def test_line_trace_zero_vector_rejected():
    with pytest.raises(ConfigError):
        line_trace_G_theta(2, 3, SQ2, [0.0, 0.0], 2)


# non-abelian example -------------------------------------------------------

def test_planted_instance_is_not_abelian():
    G = planted_javaheri(3)
    assert not G.abelian and G.g == 4


def test_block_products_act_as_scalars_on_last_axis():
    G = planted_javaheri(3)
    A, B, Ap, Bp = G.generators
    e = np.array([Fraction(0), Fraction(0), Fraction(1)], dtype=object)
    for k in range(4):
        for l in range(4):
            W = np.linalg.matrix_power(B.dot(Bp), k).dot(np.linalg.matrix_power(A.dot(Ap), l))
            assert list(W.dot(e)) == list(Fraction(2**l, 3**k) * e)


@pytest.mark.parametrize("L", [40, 50])
def test_trace_scalars_equal_oracle(L):
    G = planted_javaheri(3)
    tr, vals = javaheri_trace(G, L, exact=True)
    want = {Fraction(2**l, 3**k) for k in range(L + 1) for l in range(L + 1 - k)}
    assert {r[-1] for r in tr.exact_rows()} == want
    hits, total = SCALAR_LOG_COVER[L]
    assert log_coverage(vals, 2.0, 0.05).coverage == hits / total


def test_sign_variant_reaches_negative_scalars():
    tr, vals = javaheri_trace(planted_javaheri(3, with_sign=True), 6, exact=True)
    assert any(v < 0 for v in vals) and any(v > 0 for v in vals)
    assert set(np.abs(vals).round(12)) == set(javaheri_trace(planted_javaheri(3), 6)[1].round(12))


def test_bfs_orbit_counts_match_word_enumeration():
    G = planted_javaheri(3)
    L = 4
    v = np.array([0.0, 0.0, 1.0])
    seen = {tuple(np.round(v, 12))}
    frontier = [v]
    gens = G.float_generators()
    for _ in range(L):
        frontier = [A @ w for w in frontier for A in gens]
        seen |= {tuple(np.round(w, 12)) for w in frontier}
    s = javaheri_orbit(G, L, v)
    assert {tuple(np.round(p, 12)) for p in s.points} == seen


def test_javaheri_input_checks():
    with pytest.raises(ConfigError):
        javaheri_semigroup(np.array([[1.0, 1.0], [0.0, 1.0]]), np.eye(2))
    with pytest.raises(ConfigError):
        javaheri_semigroup(np.eye(2), np.array([[1.0, 0.0], [1.0, 1.0]]))


def test_single_homothety_probe_not_dense():
    assert hypercyclicity_probe(make_semigroup([2 * np.eye(2)])).report.verdict == NOT_DENSE
