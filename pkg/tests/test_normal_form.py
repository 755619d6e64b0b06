import math

import numpy as np
import pytest

from hyperlab.errors import NotCommuting
from hyperlab.normal_form import (
    Partition,
    canonical_vector_u_eta,
    check_K_eta_membership,
    common_eigenvector,
    normal_form,
)
from hyperlab.linalg import commutes
from hyperlab.semigroup import rotation


def random_family(rng, n, field, count=3):
    """Polynomials in one random matrix: a commuting family."""
    X = rng.normal(size=(n, n))
    if field == "C":
        X = X + 1j * rng.normal(size=(n, n))
    X /= max(1.0, np.abs(np.linalg.eigvals(X)).max())
    fam = []
    for _ in range(count):
        c = rng.normal(size=3)
        fam.append(c[0] * np.eye(n) + c[1] * X + c[2] * X @ X)
    return fam


def test_partition_invariants():
    eta = Partition("R", (1, 2), (1,))
    assert eta.n == 5 and eta.r + 2 * eta.s <= eta.n
    with pytest.raises(ValueError):
        Partition("C", (1,), (1,))
    with pytest.raises(ValueError):
        Partition("R", (0,))


def test_u_eta_examples():
    assert canonical_vector_u_eta(Partition("R", (1, 1))).tolist() == [1, 1]
    assert canonical_vector_u_eta(Partition("C", (2,))).tolist() == [1, 0]
    assert canonical_vector_u_eta(Partition("R", (1,), (1,))).tolist() == [1, 1, 0]


def test_membership_examples():
    assert check_K_eta_membership(np.eye(3), Partition("R", (1,), (1,))) == (True, 0.0)
    ok, res = check_K_eta_membership(np.diag([1.0, 2.0]), Partition("R", (2,)))
    assert not ok and res == 1.0
    ok, _ = check_K_eta_membership(rotation(math.pi * math.sqrt(2)), Partition("R", (), (1,)))
    assert ok


def test_common_eigenvector_examples():
    ce = common_eigenvector([np.eye(2)])
    assert np.allclose(np.eye(2) @ ce.vector, ce.vector)
    D = [np.diag([2.0, 3.0, 5.0]), np.diag([7.0, 1.0, 1.0])]
    ce = common_eigenvector(D)
    for A in D:
        assert np.linalg.norm(A @ ce.vector - np.vdot(ce.vector, A @ ce.vector) * ce.vector) < 1e-10
    ce = common_eigenvector([rotation(math.pi * math.sqrt(2))], "R")
    assert ce.is_plane


def test_diagonal_family():
    nf = normal_form([np.diag([1.0, 2.0, 3.0]), np.diag([4.0, 4.0, 5.0])])
    assert nf.eta.t_sizes == (1, 1, 1) and nf.eta.b_sizes == ()
    for A in nf.conjugated:
        assert check_K_eta_membership(A, nf.eta)[0]


def test_single_rotation_scaling():
    nf = normal_form([2 * rotation(1.0)], "R")
    assert nf.eta == Partition("R", (), (1,))
    assert check_K_eta_membership(nf.conjugated[0], nf.eta)[0]


def test_triangular_fixed_point():
    rng = np.random.default_rng(3)
    A = np.tril(rng.normal(size=(3, 3)), -1) + 1.5 * np.eye(3)
    nf = normal_form([A, A @ A], "R")
    assert nf.eta == Partition("R", (3,))
    assert nf.residual <= 1e-9
    assert nf.condition <= 10


def test_idempotence_on_conformant_input():
    rng = np.random.default_rng(5)
    for fam_field in ("R", "C"):
        fam = random_family(rng, 5, fam_field)
        nf = normal_form(fam, fam_field)
        again = normal_form(nf.conjugated, fam_field)
        assert again.eta == nf.eta
        assert again.condition <= 10


def test_not_commuting():
    with pytest.raises(NotCommuting):
        normal_form([np.array([[1.0, 1.0], [0.0, 1.0]]), np.array([[1.0, 0.0], [1.0, 1.0]])])


def test_degenerate_n1():
    nf = normal_form([np.array([[3.0]])])
    assert nf.eta == Partition("R", (1,)) and nf.P.tolist() == [[1.0]]


@pytest.mark.parametrize("seed", range(6))
def test_random_families(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 9))
    field = "C" if seed % 2 else "R"
    fam = random_family(rng, n, field)
    nf = normal_form(fam, field)
    assert np.linalg.norm(nf.P @ nf.P_inv - np.eye(n)) <= 1e-8
    for A in nf.conjugated:
        ok, res = check_K_eta_membership(A, nf.eta, 1e-8)
        assert ok, res
    assert all(commutes(a, b, 1e-8) for a in nf.conjugated for b in nf.conjugated)
    assert nf.eta.n == n
