"""Field-generic vectors, matrices and subspaces.

Float mode uses numpy ``float64``/``complex128`` arrays.  Exact mode uses
object arrays (or plain sequences) of :class:`fractions.Fraction` and
:class:`hyperlab.surd.Surd`.  Complex float data lives in ``complex128``,
whose memory layout is already ``(re, im)`` pairs, so the embedding of C^n
into R^{2n} is a pure reinterpretation of the same bytes.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .errors import AllZeroInput, DimensionMismatch
from .surd import Surd

GEOM_RTOL = 1e-9


def tolerance(*arrays) -> float:
    """Float-mode tolerance ``1e-9 * (1 + largest magnitude among inputs)``."""
    mag = 0.0
    for a in arrays:
        a = np.asarray(a)
        if a.size:
            mag = max(mag, float(np.max(np.abs(a.astype(complex)))))
    return GEOM_RTOL * (1.0 + mag)


def is_exact(a) -> bool:
    a = np.asarray(a, dtype=object) if not isinstance(a, np.ndarray) else a
    if a.dtype != object:
        return False
    return all(isinstance(x, (int, Fraction, Surd)) for x in a.ravel())


def field_of(a) -> str:
    a = np.asarray(a)
    return "C" if np.iscomplexobj(a) else "R"


def as_float(a) -> np.ndarray:
    a = np.asarray(a)
    if a.dtype == object:
        flat = [complex(x) if isinstance(x, complex) else float(x) for x in a.ravel()]
        dtype = complex if any(isinstance(x, complex) for x in flat) else float
        return np.array(flat, dtype=dtype).reshape(a.shape)
    if np.iscomplexobj(a):
        return a.astype(np.complex128)
    return a.astype(np.float64)


@dataclass(frozen=True)
class Subspace:
    """A linear subspace given by an orthonormal basis (columns of ``basis``).

    ``exact_basis`` holds a reduced exact basis (rationals or surds) when the
    subspace was built from exact vectors; exact membership tests use it.
    """

    basis: np.ndarray
    field: str = "R"
    exact_basis: Optional[tuple[tuple, ...]] = dc_field(default=None, compare=False)

    @property
    def is_rational(self) -> bool:
        return self.exact_basis is not None and all(
            not isinstance(x, Surd) or x.is_rational() for r in self.exact_basis for x in r)

    @property
    def ambient_dim(self) -> int:
        return self.basis.shape[0]

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    def coordinates(self, points) -> np.ndarray:
        """Orthonormal M-coordinates of points (rows) assumed to lie in M."""
        pts = np.atleast_2d(as_float(points))
        return pts @ self.basis.conj()

    def is_full(self) -> bool:
        return self.dim == self.ambient_dim


def _mgs(vectors: np.ndarray, rtol: float) -> np.ndarray:
    # modified Gram-Schmidt, two passes per vector
    n = vectors.shape[1]
    scale = max(float(np.max(np.linalg.norm(vectors, axis=1))), 1.0)
    q: list[np.ndarray] = []
    for v in vectors:
        w = v.copy()
        for _ in range(2):
            for u in q:
                w = w - (u.conj() @ w) * u
        nw = np.linalg.norm(w)
        if nw > rtol * scale:
            q.append(w / nw)
    if not q:
        return np.zeros((n, 0), dtype=vectors.dtype)
    return np.array(q).T


def subspace_from_basis(vectors: Sequence, tol: float | None = None) -> Subspace:
    """Span of ``vectors`` with a rank-reduced orthonormal basis."""
    if len(vectors) == 0:
        raise DimensionMismatch("empty vector list")
    dims = {len(v) for v in vectors}
    if len(dims) != 1:
        raise DimensionMismatch(f"vectors of differing dimensions {sorted(dims)}")
    exact = None
    if all(all(isinstance(x, (int, Fraction, Surd)) for x in v) for v in vectors):
        rows = [[x if isinstance(x, Surd) else Fraction(x) for x in v] for v in vectors]
        red = row_reduce(rows)
        if not red:
            raise AllZeroInput("every input vector is zero")
        exact = tuple(tuple(r) for r in red)
    arr = as_float(np.array([list(v) for v in vectors], dtype=object))
    if not np.any(arr):
        raise AllZeroInput("every input vector is zero")
    q = _mgs(arr, 1e-10 if tol is None else tol)
    if q.shape[1] == 0:
        raise AllZeroInput("every input vector is numerically zero")
    return Subspace(q, field_of(q), exact)


def row_reduce(rows: list[list]) -> list[list]:
    """Reduced row echelon form over Q or a surd field; zero rows dropped."""
    m = [list(r) for r in rows]
    if not m:
        return []
    ncols = len(m[0])
    out = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        pv = m[r][c]
        m[r] = [x / pv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        r += 1
        if r == len(m):
            break
    for row in m[:r]:
        out.append(row)
    return out


def rank_exact(rows) -> int:
    return len(row_reduce([[Fraction(x) for x in r] for r in rows]))


def project(point, M: Subspace) -> np.ndarray:
    p = as_float(point)
    if p.shape[-1] != M.ambient_dim:
        raise DimensionMismatch("point and subspace dimensions differ")
    q = M.basis
    return (p @ q.conj()) @ q.T


def membership_distance(point, M: Subspace):
    """Euclidean distance from ``point`` (or each row of a 2-D array) to M."""
    p = as_float(point)
    r = p - project(p, M)
    return np.linalg.norm(r, axis=-1) if r.ndim > 1 else float(np.linalg.norm(r))


def annihilator(M: Subspace) -> list[list]:
    """Exact rows ``nu`` with ``nu . x == 0`` for all ``x`` in M (and only those)."""
    if M.exact_basis is None:
        raise ValueError("exact membership needs an exactly spanned subspace")
    R = row_reduce([list(r) for r in M.exact_basis])
    n = M.ambient_dim
    pivots = []
    for row in R:
        pivots.append(next(j for j, x in enumerate(row) if x != 0))
    out = []
    for f in range(n):
        if f in pivots:
            continue
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for row, p in zip(R, pivots):
            v[p] = -row[f]
        out.append(v)
    return out


def on_subspace(points, M: Subspace, tol: float | None = None, rtol: float = GEOM_RTOL) -> np.ndarray:
    """Float membership mask for the rows of ``points``.

    Subspaces are cones, so the default test is scale free:
    ``dist(p, M) <= rtol * |p|``.  A tiny point is then judged by its
    direction rather than swallowed by an absolute tolerance around the
    origin.  An explicit ``tol`` switches to ``dist(p, M) <= tol``.
    """
    p = np.atleast_2d(as_float(points))
    d = np.atleast_1d(membership_distance(p, M))
    if tol is not None:
        return d <= tol
    return d <= rtol * np.linalg.norm(p, axis=1)


def in_subspace_exact(point: Sequence, M: Subspace, ann: list | None = None) -> bool:
    """Exact membership of a point with surd coordinates in an exactly spanned M.

    ``ann`` may carry a precomputed :func:`annihilator` for repeated queries.
    """
    if len(point) != M.ambient_dim:
        raise DimensionMismatch("point and subspace dimensions differ")
    if ann is None:
        ann = annihilator(M)
    for nu in ann:
        acc = Surd(0)
        for c, x in zip(nu, point):
            if c != 0 and x != 0:
                acc = acc + c * x
        if acc:
            return False
    return True


def complex_to_real_embedding(z):
    """Interleaved layout ``(x1, y1, ..., xn, yn)`` of ``z = x + i y``.

    Float input is reinterpreted in place of a contiguous ``complex128`` copy,
    which makes the map bit-exact.  Exact input is a sequence of ``(re, im)``
    pairs and comes back flattened.  2-D input maps row-wise.
    """
    if not isinstance(z, np.ndarray) and len(z) and isinstance(z[0], tuple):
        return [part for pair in z for part in pair]
    c = np.ascontiguousarray(np.asarray(z, dtype=np.complex128))
    return c.view(np.float64)


def real_to_complex(x) -> np.ndarray:
    x = np.ascontiguousarray(np.asarray(x, dtype=np.float64))
    if x.shape[-1] % 2:
        raise DimensionMismatch("odd real dimension")
    return x.view(np.complex128)


def commutes(A, B, tol: float | None = None) -> bool:
    A = np.asarray(A)
    B = np.asarray(B)
    if A.shape != B.shape:
        raise DimensionMismatch("matrices of different shapes")
    if A.dtype == object and B.dtype == object:
        return bool(np.all(A.dot(B) == B.dot(A)))
    A, B = as_float(A), as_float(B)
    if tol is None:
        tol = tolerance(A, B) * (1.0 + max(np.abs(A).max(initial=0), np.abs(B).max(initial=0)))
    return float(np.max(np.abs(A @ B - B @ A), initial=0.0)) <= tol
