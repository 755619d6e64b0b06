"""Simultaneous block-triangular normal form of a commuting matrix family.

Given commuting ``A_1..A_g`` over R or C, :func:`normal_form` finds an
invertible ``P`` with every ``P^-1 A_i P`` block diagonal, each diagonal
block either

* ``T``: lower triangular with a single eigenvalue, or
* ``B`` (real field only): block lower triangular in 2x2 cells of the
  rotation-scaling shape ``[[a, -b], [b, a]]`` with one repeated diagonal cell.

Algorithm: the joint generalized eigenspaces of the family are the
generalized eigenspaces of a generic linear combination ``C``.  Eigenvalues
of ``C`` are clustered, each cluster's invariant subspace is read off a
reordered Schur form, and inside a cluster the family is triangularized by
repeated common-eigenvector deflation.  Complex-pair clusters of a real family
are triangularized over C and split into real/imaginary parts.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Sequence

import numpy as np
import scipy.linalg as sla
from scipy.cluster.hierarchy import linkage

from .errors import ConfigError, DimensionMismatch, NotCommuting, NumericalBreakdown
from .linalg import as_float, commutes, tolerance

CLUSTER_RTOL = 1e-7
MACHINE_EPS = np.finfo(float).eps
NULL_RTOL = 1e-8
BREAKDOWN_RTOL = 1e-6
MAX_COND = 1e12


@dataclass(frozen=True)
class BlockSpec:
    kind: str  # "T" or "B"
    size: int  # T: matrix order; B: number of 2x2 cells
    offset: int

    @property
    def span(self) -> int:
        return self.size if self.kind == "T" else 2 * self.size


@dataclass(frozen=True)
class Partition:
    """Block signature ``(n_1..n_r; m_1..m_s)``; ``b_sizes`` is empty over C."""

    field: str
    t_sizes: tuple[int, ...]
    b_sizes: tuple[int, ...] = ()

    def __post_init__(self):
        if self.field not in ("R", "C"):
            raise ConfigError(f"unknown field {self.field!r}")
        if self.field == "C" and self.b_sizes:
            raise ConfigError("rotation-scaling blocks only exist over R")
        if any(p < 1 for p in self.t_sizes + self.b_sizes):
            raise ConfigError("partition parts must be >= 1")
        if not self.t_sizes and not self.b_sizes:
            raise ConfigError("empty partition")

    @property
    def n(self) -> int:
        return sum(self.t_sizes) + 2 * sum(self.b_sizes)

    @property
    def r(self) -> int:
        return len(self.t_sizes)

    @property
    def s(self) -> int:
        return len(self.b_sizes)

    def blocks(self) -> list[BlockSpec]:
        out, off = [], 0
        for m in self.t_sizes:
            out.append(BlockSpec("T", m, off))
            off += m
        for m in self.b_sizes:
            out.append(BlockSpec("B", m, off))
            off += 2 * m
        return out

    def to_json(self) -> dict:
        return {"field": self.field, "t": list(self.t_sizes), "b": list(self.b_sizes)}

    @classmethod
    def from_json(cls, obj) -> "Partition":
        return cls(obj["field"], tuple(obj.get("t", ())), tuple(obj.get("b", ())))


def check_K_eta_membership(A, eta: Partition, tol: float | None = None) -> tuple[bool, float]:
    """Whether ``A`` has the block pattern of ``eta``; returns ``(ok, residual)``.

    The residual is the largest violation: entries outside the diagonal
    blocks, entries above the (cell) diagonal, spread of the diagonal inside a
    block, and departures of 2x2 cells from the rotation-scaling shape.
    """
    A = as_float(A)
    n = eta.n
    if A.shape != (n, n):
        raise DimensionMismatch(f"matrix shape {A.shape} does not match partition of {n}")
    res = 0.0
    if eta.field == "R" and np.iscomplexobj(A):
        res = max(res, float(np.max(np.abs(A.imag))))
        A = A.real
    mask = np.ones((n, n), dtype=bool)
    for b in eta.blocks():
        o, w = b.offset, b.span
        mask[o:o + w, o:o + w] = False
        blk = A[o:o + w, o:o + w]
        if b.kind == "T":
            res = max(res, float(np.max(np.abs(np.triu(blk, 1)), initial=0.0)))
            d = np.diag(blk)
            res = max(res, float(np.max(np.abs(d - d[0]))))
        else:
            c0 = blk[0:2, 0:2]
            for i in range(b.size):
                for j in range(b.size):
                    cell = blk[2 * i:2 * i + 2, 2 * j:2 * j + 2]
                    if j > i:
                        res = max(res, float(np.max(np.abs(cell))))
                        continue
                    res = max(res, abs(cell[0, 0] - cell[1, 1]), abs(cell[0, 1] + cell[1, 0]))
                    if i == j:
                        res = max(res, float(np.max(np.abs(cell - c0))))
    if mask.any():
        res = max(res, float(np.max(np.abs(A[mask]))))
    if tol is None:
        tol = tolerance(A)
    return res <= tol, float(res)


def canonical_vector_u_eta(eta: Partition) -> np.ndarray:
    """Vector with a 1 in the first coordinate of every block, 0 elsewhere."""
    u = np.zeros(eta.n)
    for b in eta.blocks():
        u[b.offset] = 1.0
    return u


@dataclass
class _Cluster:
    mu: complex
    size: int
    basis: np.ndarray  # n x size, orthonormal, complex
    lambdas: tuple[complex, ...]
    real: bool


@dataclass(frozen=True)
class CommonEigen:
    """A common eigenvector (``basis`` n x 1) or, over R with no real common
    eigenvalue, an invariant plane (``basis`` n x 2)."""

    basis: np.ndarray
    eigenvalues: tuple  # per member: eigenvalue, or (lambda, conj lambda)

    @property
    def vector(self) -> np.ndarray:
        return self.basis[:, 0]

    @property
    def is_plane(self) -> bool:
        return self.basis.shape[1] == 2


@dataclass
class NormalForm:
    field: str
    P: np.ndarray
    P_inv: np.ndarray
    eta: Partition
    conjugated: list[np.ndarray]
    blocks: list[BlockSpec]
    block_eigenvalues: list[tuple[complex, ...]]
    residual: float = 0.0
    meta: dict = dc_field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.P.shape[0]

    @property
    def condition(self) -> float:
        return float(np.linalg.cond(self.P))

    def u_eta(self) -> np.ndarray:
        return canonical_vector_u_eta(self.eta)

    def to_json(self) -> dict:
        def enc(M):
            M = np.asarray(M)
            if np.iscomplexobj(M):
                return [[[float(x.real), float(x.imag)] for x in row] for row in M]
            return [[float(x) for x in row] for row in M]

        return {
            "eta": self.eta.to_json(),
            "P": enc(self.P),
            "residual": self.residual,
            "condition": self.condition,
            "blocks": [
                {
                    "kind": b.kind,
                    "size": b.size,
                    "offset": b.offset,
                    "eigenvalues": [[float(z.real), float(z.imag)] for z in ev],
                }
                for b, ev in zip(self.blocks, self.block_eigenvalues)
            ],
        }


def _prepare(generators: Sequence, field: str | None) -> tuple[list[np.ndarray], str]:
    if len(generators) == 0:
        raise ConfigError("need at least one generator")
    gens = [as_float(g) for g in generators]
    n = gens[0].shape[0]
    for g in gens:
        if g.shape != (n, n):
            raise DimensionMismatch("generators must be square and of equal size")
    if field is None:
        field = "C" if any(np.iscomplexobj(g) for g in gens) else "R"
    if field == "R":
        for g in gens:
            if np.iscomplexobj(g) and np.any(np.abs(g.imag) > tolerance(g)):
                raise ConfigError("complex generator over the real field")
        gens = [np.real(g).astype(float) for g in gens]
    else:
        gens = [g.astype(complex) for g in gens]
    return gens, field


def _check_commuting(gens, tol):
    for i in range(len(gens)):
        for j in range(i + 1, len(gens)):
            if not commutes(gens[i], gens[j], tol):
                raise NotCommuting(f"generators {i} and {j} do not commute")


def _cluster_tol(k: int, scale: float) -> float:
    # a defective eigenvalue of multiplicity k splits by about eps^(1/k)
    return max(CLUSTER_RTOL, 10.0 * MACHINE_EPS ** (1.0 / k)) * scale


def _group_eigenvalues(ev: np.ndarray, scale: float) -> list[list[int]]:
    """Top-down cut of the single-linkage tree: keep a subtree whole when its
    diameter fits the multiplicity-aware tolerance."""
    n = len(ev)
    if n == 1:
        return [[0]]
    pts = np.column_stack([ev.real, ev.imag])
    Z = linkage(pts, method="single")
    members: dict[int, list[int]] = {i: [i] for i in range(n)}
    children: dict[int, tuple[int, int]] = {}
    for t, (a, b, _, _) in enumerate(Z):
        node = n + t
        members[node] = members[int(a)] + members[int(b)]
        children[node] = (int(a), int(b))

    def ok(node):
        idx = members[node]
        if len(idx) == 1:
            return True
        sub = ev[idx]
        diam = float(np.max(np.abs(sub[:, None] - sub[None, :])))
        return diam <= _cluster_tol(len(idx), scale)

    groups = []
    stack = [2 * n - 2]
    while stack:
        node = stack.pop()
        if ok(node):
            groups.append(sorted(members[node]))
        else:
            stack.extend(children[node])
    groups.sort(key=lambda g: g[0])
    return groups


def _combination(gens, seed):
    rng = np.random.default_rng(seed)
    coef = rng.uniform(0.5, 1.5, size=len(gens))
    return sum(c * g for c, g in zip(coef, gens))


def _clusters(gens, field, seed=0) -> list[_Cluster]:
    n = gens[0].shape[0]
    C = _combination(gens, seed).astype(complex)
    scale = max(1.0, float(np.linalg.norm(C, 2)))
    T, _ = sla.schur(C, output="complex")
    ev = np.diag(T).copy()
    groups = _group_eigenvalues(ev, scale)
    label = np.empty(n, dtype=int)
    for gi, g in enumerate(groups):
        label[g] = gi

    def nearest(x):
        return int(label[np.argmin(np.abs(ev - x))])

    out = []
    for gi, g in enumerate(groups):
        mu = complex(np.mean(ev[g]))
        k = len(g)
        if k == n:
            V = np.eye(n, dtype=complex)
        else:
            try:
                _, Z, sdim = sla.schur(C, output="complex", sort=lambda x, gi=gi: nearest(x) == gi)
            except (np.linalg.LinAlgError, ValueError) as exc:
                raise NumericalBreakdown(f"Schur reordering failed: {exc}") from exc
            if sdim != k:
                raise NumericalBreakdown("eigenvalue cluster could not be isolated")
            V = Z[:, :k]
        lambdas = tuple(complex(np.trace(V.conj().T @ A @ V) / k) for A in gens)
        real = field == "R" and abs(mu.imag) <= _cluster_tol(k, scale)
        out.append(_Cluster(mu, k, V, lambdas, real))
    return out


def _null_directions(mats, lambdas, R, scale):
    """Orthonormal common null directions of ``(A_i - lambda_i)`` on range(R)."""
    stack = np.vstack([R.conj().T @ (A - lam * np.eye(A.shape[0])) @ R for A, lam in zip(mats, lambdas)])
    _, s, vh = np.linalg.svd(stack)
    if s[-1] > BREAKDOWN_RTOL * scale:
        raise NumericalBreakdown(f"no common eigenvector (smallest singular value {s[-1]:.3g})")
    k = max(1, int(np.sum(s <= NULL_RTOL * scale)))
    return R @ vh.conj().T[:, -k:]


def _pick(N, embed, order):
    """Choose a unit vector of span(N) closest to the first preferred axis."""
    if N.shape[1] == 1:
        return N[:, 0]
    W = embed @ N
    weights = np.array([np.linalg.norm(W[j, :]) for j in order])
    j = order[int(np.argmax(weights >= (1 - 1e-9) * weights.max()))]
    c = W[j, :].conj()
    z = N @ c
    return z / np.linalg.norm(z)


def _triangularize(mats, lambdas, embed, order, scale):
    """Unitary ``U`` (cluster coordinates) with ``U^H A U`` upper triangular."""
    m = mats[0].shape[0]
    dtype = complex if any(np.iscomplexobj(A) for A in mats) or np.iscomplexobj(embed) else float
    found: list[np.ndarray] = []
    for t in range(m):
        if found:
            R = sla.null_space(np.array(found).conj())
        else:
            R = np.eye(m, dtype=dtype)
        N = _null_directions(mats, lambdas, R, scale)
        found.append(_pick(N, embed, order))
    return np.array(found).T


def _normalize_column(w):
    mags = np.abs(w)
    j = int(np.argmax(mags >= (1 - 1e-9) * mags.max()))
    return w / w[j]


def _real_basis(V):
    k = V.shape[1]
    u, _, _ = np.linalg.svd(np.hstack([V.real, V.imag]))
    return u[:, :k]


def _key(lambdas):
    return tuple(x for z in lambdas for x in (round(z.real, 9), round(z.imag, 9)))


def normal_form(generators: Sequence, field: str | None = None, tol: float | None = None, seed: int = 0) -> NormalForm:
    """Conjugate a commuting family into the block pattern of some partition."""
    gens, field = _prepare(generators, field)
    n = gens[0].shape[0]
    if tol is None:
        tol = max(tolerance(g) for g in gens) * (1 + max(float(np.abs(g).max()) for g in gens))
    _check_commuting(gens, tol)
    dtype = float if field == "R" else complex
    if n == 1:
        P = np.ones((1, 1), dtype=dtype)
        eta = Partition(field, (1,))
        return NormalForm(field, P, P.copy(), eta, [g.copy() for g in gens], eta.blocks(),
                          [tuple(complex(g[0, 0]) for g in gens)], 0.0)

    scale = max(1.0, max(float(np.linalg.norm(g, 2)) for g in gens))
    descending = list(range(n - 1, -1, -1))
    t_blocks, b_blocks = [], []
    for cl in _clusters(gens, field, seed):
        if field == "R" and not cl.real and cl.mu.imag > 0:
            continue  # the conjugate cluster carries this pair
        if field == "C" or cl.real:
            V = cl.basis if field == "C" else _real_basis(cl.basis)
            lam = cl.lambdas if field == "C" else tuple(complex(z.real) for z in cl.lambdas)
            mats = [V.conj().T @ A @ V for A in gens]
            if field == "R":
                mats = [M.real for M in mats]
                lam_use = [z.real for z in lam]
            else:
                lam_use = list(lam)
            U = _triangularize(mats, lam_use, V, descending, scale)
            cols = V @ U[:, ::-1]
            cols = np.column_stack([_normalize_column(c) for c in cols.T])
            t_blocks.append((cl.size, _key(lam), cols, lam))
        else:
            V = cl.basis
            mats = [V.conj().T @ A @ V for A in gens]
            U = _triangularize(mats, list(cl.lambdas), V, descending, scale)
            W = V @ U[:, ::-1]
            W = np.column_stack([_normalize_column(c) for c in W.T])
            # (x, -y) is as valid as (x, y); orient by the first cell
            im0 = W[:, 0].imag
            j = int(np.argmax(np.abs(im0) >= (1 - 1e-9) * np.abs(im0).max()))
            flip = im0[j] < 0
            cols = []
            for c in W.T:
                cols.extend([c.real, -c.imag if flip else c.imag])
            lam = tuple(complex(z) if flip else complex(z).conjugate() for z in cl.lambdas)
            b_blocks.append((cl.size, _key(lam), np.column_stack(cols), lam))

    t_blocks.sort(key=lambda b: (-b[0], b[1]))
    b_blocks.sort(key=lambda b: (-b[0], b[1]))
    P = np.hstack([b[2] for b in t_blocks + b_blocks]).astype(dtype)
    eta = Partition(field, tuple(b[0] for b in t_blocks), tuple(b[0] for b in b_blocks))
    cond = float(np.linalg.cond(P))
    if not np.isfinite(cond) or cond > MAX_COND:
        raise NumericalBreakdown(f"change of basis is ill-conditioned (cond {cond:.3g})")
    P_inv = np.linalg.inv(P)
    conj = [P_inv @ A @ P for A in gens]
    if field == "R":
        conj = [M.real for M in conj]
    residual = max(check_K_eta_membership(M, eta, np.inf)[1] for M in conj)
    if residual > BREAKDOWN_RTOL * scale:
        raise NumericalBreakdown(f"normal form residual {residual:.3g} too large")
    return NormalForm(field, P, P_inv, eta, conj, eta.blocks(),
                      [b[3] for b in t_blocks + b_blocks], residual, {"cond": cond, "seed": seed})


def common_eigenvector(family: Sequence, field: str | None = None, tol: float | None = None, seed: int = 0) -> CommonEigen:
    """A common eigenvector of a commuting family, preferring the first axis.

    Over R, when no common eigenvalue is real, returns an orthonormal basis of
    a common invariant plane and conjugate eigenvalue pairs instead.
    """
    gens, field = _prepare(family, field)
    n = gens[0].shape[0]
    if tol is None:
        tol = max(tolerance(g) for g in gens) * (1 + max(float(np.abs(g).max()) for g in gens))
    _check_commuting(gens, tol)
    scale = max(1.0, max(float(np.linalg.norm(g, 2)) for g in gens))
    e1 = np.zeros(n)
    e1[0] = 1.0
    clusters = _clusters(gens, field, seed)
    candidates = [c for c in clusters if field == "C" or c.real]
    best = None
    for cl in candidates:
        V = cl.basis if field == "C" else _real_basis(cl.basis)
        mats = [V.conj().T @ A @ V for A in gens]
        lam = list(cl.lambdas) if field == "C" else [z.real for z in cl.lambdas]
        if field == "R":
            mats = [M.real for M in mats]
        N = V @ _null_directions(mats, lam, np.eye(cl.size, dtype=V.dtype), scale)
        score = float(np.linalg.norm(N.conj().T @ e1))
        if best is None or score > best[0] + 1e-12:
            best = (score, N, lam)
    if best is not None:
        score, N, lam = best
        v = N @ (N.conj().T @ e1) if score > 1e-12 else N[:, 0]
        v = _normalize_column(v / np.linalg.norm(v))
        eig = tuple(complex(z) if field == "C" else float(z) for z in lam)
        return CommonEigen(v.reshape(-1, 1), eig)
    cl = next(c for c in clusters if c.mu.imag < 0)
    V = cl.basis
    mats = [V.conj().T @ A @ V for A in gens]
    N = V @ _null_directions(mats, list(cl.lambdas), np.eye(cl.size, dtype=complex), scale)
    w = _normalize_column(N[:, 0])
    plane, _ = np.linalg.qr(np.column_stack([w.real, w.imag]))
    eig = tuple((complex(z).conjugate(), complex(z)) for z in cl.lambdas)
    return CommonEigen(plane, eig)
