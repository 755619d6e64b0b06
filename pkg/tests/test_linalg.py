from fractions import Fraction

import numpy as np
import pytest

from hyperlab.errors import AllZeroInput
from hyperlab.linalg import (
    annihilator,
    commutes,
    complex_to_real_embedding,
    in_subspace_exact,
    membership_distance,
    on_subspace,
    project,
    rank_exact,
    real_to_complex,
    row_reduce,
    subspace_from_basis,
)
from hyperlab.semigroup import example_G_theta, planted_javaheri, rotation
from hyperlab.surd import Surd, SurdArray, is_squarefree, parse_scalar, squarefree_decompose

from oracle_values import PROJECTION_111


def test_axis_line():
    M = subspace_from_basis([[1, 0]])
    assert M.dim == 1 and M.ambient_dim == 2


def test_dependent_pair_collapses():
    assert subspace_from_basis([[1, 0, 0], [2, 0, 0]]).dim == 1


def test_surd_plane_gram():
    M = subspace_from_basis([[1, 0, Surd.sqrt(2)], [0, 1, Surd.sqrt(3)]])
    Q = M.basis
    assert M.dim == 2
    assert abs(np.linalg.det(Q.T @ Q) - 1) <= 1e-12


def test_all_zero_input():
    with pytest.raises(AllZeroInput):
        subspace_from_basis([[0, 0], [0, 0]])


def test_membership_distance_examples():
    assert membership_distance([0, 1], subspace_from_basis([[1, 0]])) == 1.0
    M = subspace_from_basis([[1, 2, 3], [0, 1, 1]])
    assert membership_distance([1, 3, 4], M) <= 1e-12


def test_distance_to_hyperplane_demo():
    Y = subspace_from_basis([[1, 0, 0], [0, 1, 0]])
    e = np.array([0.0, 0.0, 2.0])
    assert membership_distance(e, Y) == 2.0
    V = subspace_from_basis([[1, 0, 0], [0, 1, 0], [3, -1, Fraction(1, 7)]])
    assert membership_distance(e, V) <= 1e-12
    assert in_subspace_exact([Fraction(0), Fraction(0), Fraction(2)], V)


def test_projection_examples():
    M = subspace_from_basis([[1, 0]])
    assert np.allclose(project([3, 4], M), [3, 0])
    M = subspace_from_basis([[1, 0, Surd.sqrt(2)], [0, 1, Surd.sqrt(3)]])
    assert np.allclose(project(np.ones(3), M), PROJECTION_111, rtol=0, atol=1e-13)


def test_embedding_layout():
    assert complex_to_real_embedding(np.array([1 + 2j])).tolist() == [1.0, 2.0]
    assert complex_to_real_embedding(np.zeros(2, complex)).tolist() == [0.0] * 4
    z = np.array([[1 + 2j, 3 - 4j], [0.5j, -1]])
    x = complex_to_real_embedding(z)
    assert x.tolist() == [[1, 2, 3, -4], [0, 0.5, -1, 0]]
    assert np.array_equal(real_to_complex(x), z)


def test_commutes_examples():
    A = np.array([[1.0, 2.0], [3.0, 4.0]])
    assert commutes(np.eye(2), A)
    G = example_G_theta(2, 3, Surd.sqrt(2))
    gens = G.float_generators()
    assert all(commutes(a, b) for a in gens for b in gens)
    J = planted_javaheri(3)
    assert not commutes(J.generators[0], J.generators[1])


def test_row_reduce_rank_exact():
    rows = [[Fraction(1), Fraction(2), Fraction(3)], [Fraction(2), Fraction(4), Fraction(6)], [Fraction(0), Fraction(1), Fraction(1)]]
    assert rank_exact(rows) == 2
    assert len(row_reduce(rows)) == 2


def test_annihilator_and_exact_membership():
    M = subspace_from_basis([[1, Surd.sqrt(2)]])
    ann = annihilator(M)
    assert len(ann) == 1
    assert in_subspace_exact([Surd(3), Surd.sqrt(2, 3)], M, ann)
    assert not in_subspace_exact([Surd(3), Surd(4)], M, ann)


def test_on_subspace_is_scale_free():
    M = subspace_from_basis([[1, 0]])
    pts = np.array([[1.0, 0.0], [1e-12, 1e-13], [5.0, 1e-12], [0.0, 0.0]])
    assert on_subspace(pts, M).tolist() == [True, False, True, True]
    assert on_subspace(pts, M, tol=1e-9).tolist() == [True, True, True, True]


def test_squarefree():
    assert [n for n in range(1, 20) if is_squarefree(n)] == [1, 2, 3, 5, 6, 7, 10, 11, 13, 14, 15, 17, 19]
    assert squarefree_decompose(8) == (2, 2)
    with pytest.raises(ValueError):
        Surd.sqrt(-3)


def test_surd_arithmetic_and_sign():
    r2, r3 = Surd.sqrt(2), Surd.sqrt(3)
    assert r2 * r2 == 2
    assert (r2 + r3) * (r3 - r2) == 1
    assert (1 / (r2 + r3)) == r3 - r2
    assert Surd.sqrt(8) == 2 * r2
    assert (r2 - Fraction(141421356237, 10**11)).sign() == 1
    assert (r2 + r3 - Surd.sqrt(10)).sign() == -1
    x = Surd(Fraction(1, 3)) + r2
    assert x.inverse() * x == 1
    assert hash(Surd(Fraction(1, 2))) == hash(Fraction(1, 2))


def test_parse_scalar():
    assert parse_scalar("√2") == (Surd.sqrt(2), True)
    assert parse_scalar("-sqrt(3)") == (Surd.sqrt(3, -1), True)
    assert parse_scalar("2*sqrt(5)") == (Surd.sqrt(5, 2), True)
    assert parse_scalar("3/4") == (Surd(Fraction(3, 4)), True)
    v, cert = parse_scalar("1.4142")
    assert v == 1.4142 and not cert


def test_surd_array_roundtrip():
    rows = [(Surd(1), Surd.sqrt(2)), (Surd(Fraction(1, 2)), Surd.sqrt(3) - 1)]
    X = SurdArray.from_rows(rows)
    assert X.to_rows() == rows
    assert np.allclose(X.approx(), [[1, 2**0.5], [0.5, 3**0.5 - 1]])
    assert X[np.array([True, False])].to_rows() == rows[:1]


def test_rotation_commutes_with_homothety():
    R = rotation(1.0)
    assert commutes(R, 3 * np.eye(2))
