"""Finitely generated matrix semigroups, orbits and density probes.

Orbits of an abelian semigroup are enumerated over exponent vectors
``(k_1, ..., k_g)`` in lexicographic order, one generator per level, with
magnitude pruning: a partial product is dropped once even the most
favourable remaining factors cannot bring it back into the window, and its
power chain is abandoned when the current generator can only make things
worse.  The final level is streamed.

When the generators act on disjoint groups of coordinates the orbit is the
Cartesian product of the per-group orbits; each group is enumerated on its
own and box coverages multiply.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterator, Optional, Sequence

import numpy as np

from .constructions import PointSample
from .density import (DENSE, CoverAccumulator, CoverageReport, GridCover, ProductCover, VerdictThresholds,
                      Window, coverage, density_trend)
from .errors import (ConfigError, DimensionMismatch, NoNontrivialCanonical, NotCommuting, NotCoprime, Overflow,
                     RationalTheta)
from .linalg import Subspace, as_float, commutes, complex_to_real_embedding, membership_distance, on_subspace
from .normal_form import NormalForm, canonical_vector_u_eta, normal_form
from .surd import Surd, SurdArray

OVERFLOW_LIMIT = 1e300
CHUNK = 1 << 18


@dataclass
class MatrixSemigroup:
    """Generators ``A_1..A_g`` (the identity is implicit).

    ``weights`` scale the common exponent bound per generator: generator
    ``i`` runs over ``0..ceil(weights[i] * K)``.
    """

    generators: list
    field: str
    abelian: bool
    weights: tuple[float, ...]
    names: tuple[str, ...]
    info: dict = field(default_factory=dict)

    @property
    def n(self) -> int:
        return int(np.asarray(self.generators[0]).shape[0])

    @property
    def g(self) -> int:
        return len(self.generators)

    @property
    def exact(self) -> bool:
        return all(np.asarray(A).dtype == object for A in self.generators)

    def float_generators(self) -> list[np.ndarray]:
        gens = [as_float(A) for A in self.generators]
        if self.field == "C":
            return [A.astype(complex) for A in gens]
        return [np.real(A).astype(float) for A in gens]

    def bounds(self, K: int) -> tuple[int, ...]:
        return tuple(max(0, math.ceil(w * K - 1e-9)) for w in self.weights)

    def to_json(self) -> dict:
        from .io import matrix_to_json
        return {"generators": [matrix_to_json(A, self.field) for A in self.generators], "field": self.field,
                "abelian": self.abelian, "weights": list(self.weights), "names": list(self.names), "info": self.info}


def make_semigroup(generators: Sequence, field: Optional[str] = None, abelian: Optional[bool] = None,
                   weights: Optional[Sequence[float]] = None, names: Optional[Sequence[str]] = None,
                   tol: Optional[float] = None, info: Optional[dict] = None) -> MatrixSemigroup:
    """Build a semigroup, verifying the abelian flag.

    ``abelian=True`` raises :class:`NotCommuting` if some pair fails to
    commute; ``abelian=None`` records whatever the check finds.
    """
    if not generators:
        raise ConfigError("need at least one generator")
    gens = []
    for A in generators:
        A = np.asarray(A)
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise DimensionMismatch("generators must be square")
        gens.append(A)
    n = gens[0].shape[0]
    if any(A.shape != (n, n) for A in gens):
        raise DimensionMismatch("generators of differing sizes")
    if field is None:
        field = "C" if any(np.iscomplexobj(as_float(A)) for A in gens) else "R"
    if field not in ("R", "C"):
        raise ConfigError(f"unknown field {field!r}")
    ok = all(commutes(gens[i], gens[j], tol) for i in range(len(gens)) for j in range(i + 1, len(gens)))
    if abelian and not ok:
        raise NotCommuting("generators do not commute")
    w = tuple(float(x) for x in (weights if weights is not None else [1.0] * len(gens)))
    if len(w) != len(gens) or any(x < 0 for x in w):
        raise ConfigError("one nonnegative weight per generator")
    nm = tuple(names) if names is not None else tuple(f"A{i + 1}" for i in range(len(gens)))
    return MatrixSemigroup(gens, field, ok if abelian is None else bool(abelian), w, nm, dict(info or {}))


# orbit engine ------------------------------------------------------------

def _support(A: np.ndarray, tol: float) -> set[int]:
    D = np.abs(as_float(A) - np.eye(A.shape[0]))
    rows = np.flatnonzero(D.max(axis=1) > tol)
    cols = np.flatnonzero(D.max(axis=0) > tol)
    return set(rows.tolist()) | set(cols.tolist())


def factor_groups(gens: Sequence[np.ndarray], tol: float = 1e-12) -> tuple[list[list[int]], list[int]]:
    """Coordinate groups left invariant by every generator.

    Returns the groups and, per generator, the index of the group it acts on
    (``-1`` for generators equal to the identity).  Every off-group entry of a
    generator must vanish, so the orbit is a product across groups.
    """
    n = gens[0].shape[0]
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    supports = [_support(A, tol) for A in gens]
    for s in supports:
        s = sorted(s)
        for a in s[1:]:
            ra, rb = find(s[0]), find(a)
            if ra != rb:
                parent[rb] = ra
    roots: dict[int, list[int]] = {}
    for i in range(n):
        roots.setdefault(find(i), []).append(i)
    groups = sorted(roots.values(), key=lambda g: g[0])
    where = {i: gi for gi, g in enumerate(groups) for i in g}
    owner = [where[min(s)] if s else -1 for s in supports]
    return groups, owner


def _approx_norms(W: np.ndarray) -> np.ndarray:
    if W.dtype == object:
        W = as_float(W)
    # scaled so huge but finite entries do not overflow when squared
    m = np.max(np.abs(W), axis=1, initial=0.0)
    safe = np.where(m > 0, m, 1.0)
    return m * np.linalg.norm(W / safe[:, None], axis=1)


def _check_overflow(W: np.ndarray) -> None:
    if W.dtype == object:
        return
    m = np.max(np.abs(W), initial=0.0)
    if not np.isfinite(m) or m > OVERFLOW_LIMIT:
        raise Overflow(f"orbit magnitude {m:.3g} exceeds {OVERFLOW_LIMIT:g}")


def _singular_range(A: np.ndarray) -> tuple[float, float]:
    s = np.linalg.svd(as_float(A), compute_uv=False)
    return float(s[-1]), float(s[0])


def _safe_pow(x: float, k: int) -> float:
    try:
        return x**k
    except OverflowError:
        return math.inf


def _group_orbit(mats: Sequence[tuple[int, np.ndarray]], v: np.ndarray, bounds: Sequence[int], g_total: int,
                 reach: float, floor: float = 0.0,
                 sink: Optional[Callable[[np.ndarray, np.ndarray], None]] = None):
    """Pruned enumeration of one group's orbit.

    ``mats`` lists ``(generator index, restricted matrix)``; ``bounds`` the
    exponent bound of each.  Returns ``(meta, points)``, or streams the last
    level into ``sink`` and returns only the earlier levels' rows when the
    caller wants no materialization.
    """
    W = v[None, :].copy()
    M = np.zeros((1, g_total), dtype=np.int64)
    if not mats or not np.any(as_float(v)):
        if sink is not None:
            sink(M, W)
            return M[:0], W[:0]
        return M, W
    srange = [_singular_range(A) for _, A in mats]
    lo_f = [_safe_pow(min(1.0, s[0]), K) for s, K in zip(srange, bounds)]
    hi_f = [_safe_pow(s[1], K) if s[1] > 1 else 1.0 for s, K in zip(srange, bounds)]
    for j, ((gi, A), K) in enumerate(zip(mats, bounds)):
        suf_lo = math.prod(lo_f[j + 1:])
        suf_hi = math.prod(hi_f[j + 1:]) if all(np.isfinite(hi_f[j + 1:])) else math.inf
        smin, smax = srange[j]
        last = j == len(mats) - 1
        outs_M, outs_W = [], []
        cur, curM = W, M
        AT = A.T
        for k in range(K + 1):
            if k:
                cur = cur.dot(AT)
                _check_overflow(cur)
                curM = curM.copy()
                curM[:, gi] = k
            norms = _approx_norms(cur)
            dead_hi = norms * suf_lo > reach * (1 + 1e-12)
            dead_lo = (norms * suf_hi < floor * (1 - 1e-12)) if floor > 0 else np.zeros(len(norms), bool)
            keep = ~(dead_hi | dead_lo)
            if keep.any():
                if last and sink is not None:
                    sink(curM[keep], cur[keep])
                else:
                    outs_M.append(curM[keep])
                    outs_W.append(cur[keep])
            stop = (dead_hi & (smin >= 1.0)) | (dead_lo & (smax <= 1.0))
            if stop.any():
                cur, curM = cur[~stop], curM[~stop]
            if cur.shape[0] == 0:
                break
        if last and sink is not None:
            return M[:0], W[:0]
        if not outs_W:
            return np.zeros((0, g_total), dtype=np.int64), W[:0]
        W = np.concatenate(outs_W)
        M = np.concatenate(outs_M)
    return M, W


@dataclass
class _Plan:
    groups: list[list[int]]
    members: list[list[tuple[int, np.ndarray]]]
    field: str

    def real_axes(self, gi: int) -> list[int]:
        if self.field == "C":
            return [a for c in self.groups[gi] for a in (2 * c, 2 * c + 1)]
        return list(self.groups[gi])


def _plan(gens: Sequence[np.ndarray], field: str, tol: float) -> _Plan:
    groups, owner = factor_groups(gens, tol)
    members: list[list[tuple[int, np.ndarray]]] = [[] for _ in groups]
    for i, (A, o) in enumerate(zip(gens, owner)):
        if o >= 0:
            idx = groups[o]
            members[o].append((i, A[np.ix_(idx, idx)]))
    return _Plan(groups, members, field)


def _box_reach(window: Window) -> tuple[float, float]:
    lo, hi = np.array(window.lo), np.array(window.hi)
    reach = float(np.linalg.norm(np.maximum(np.abs(lo), np.abs(hi))))
    near = np.where((lo <= 0) & (hi >= 0), 0.0, np.minimum(np.abs(lo), np.abs(hi)))
    return reach, float(np.linalg.norm(near))


def _prep_vector(G: MatrixSemigroup, v, mode: str) -> np.ndarray:
    v = np.asarray(v)
    if v.shape != (G.n,):
        raise DimensionMismatch(f"vector of shape {v.shape} for n={G.n}")
    if mode == "exact":
        return np.array([x if isinstance(x, (Surd, Fraction, int)) else Fraction(x) for x in v], dtype=object)
    v = as_float(v)
    return v.astype(complex) if G.field == "C" else np.real(v).astype(float)


def _gens_for(G: MatrixSemigroup, mode: str) -> list[np.ndarray]:
    if mode == "exact":
        if not G.exact:
            raise ConfigError("exact orbits need exact (rational or surd) generators")
        return [np.asarray(A, dtype=object) for A in G.generators]
    return G.float_generators()


def _group_runs(G, v, K, window: Optional[Window], mode, tol, reach=None):
    gens = _gens_for(G, mode)
    plan = _plan(gens, G.field, tol)
    bounds = G.bounds(K)
    runs = []
    for gi, idx in enumerate(plan.groups):
        if window is not None:
            r, f = _box_reach(window.sub(plan.real_axes(gi)))
        else:
            r, f = (reach if reach is not None else math.inf), 0.0
        mats = plan.members[gi]
        runs.append((gi, idx, mats, [bounds[i] for i, _ in mats], r, f))
    return plan, runs, v


def orbit(G: MatrixSemigroup, v, K: int, window: Optional[Window] = None, mode: str = "float",
          tol: float = 1e-12) -> PointSample:
    """All ``A_1^{k_1} ... A_g^{k_g} v`` with ``k_i <= bound_i(K)`` inside ``window``.

    Metadata rows are the exponent vectors, in lexicographic order.
    """
    if not G.abelian:
        raise NotCommuting("exponent enumeration needs an abelian semigroup; use javaheri_orbit for words")
    v = _prep_vector(G, v, mode)
    if window is not None and window.dim != (2 * G.n if G.field == "C" else G.n):
        raise DimensionMismatch("window dimension does not match the (realified) space")
    plan, runs, v = _group_runs(G, v, K, window, mode, tol)
    parts = []
    for gi, idx, mats, bnds, r, f in runs:
        M, W = _group_orbit(mats, v[idx], bnds, G.g, r, f)
        parts.append((idx, M, W))
    meta, pts = _product(parts, G.n, G.g, v.dtype)
    if window is not None and len(pts):
        real = complex_to_real_embedding(as_float(pts)) if G.field == "C" else as_float(pts)
        keep = window.contains(np.real(real))
        meta, pts = meta[keep], pts[keep]
    order = np.lexsort(meta.T[::-1]) if len(meta) else np.zeros(0, int)
    meta, pts = meta[order], pts[order]
    exact = None
    if mode == "exact":
        exact = SurdArray.from_rows([list(p) for p in pts], G.n)
        pts = as_float(pts) if len(pts) else np.zeros((0, G.n))
    if G.field == "C":
        pts = pts.astype(complex)
    src = {"kind": "orbit", "K": K, "bounds": list(G.bounds(K))}
    if window is not None:
        src["window"] = window.to_json()
    return PointSample(pts, meta, tuple(f"k{i + 1}" for i in range(G.g)), src, (), exact)


def _product(parts, n, g, dtype):
    pts = np.zeros((1, n), dtype=dtype)
    meta = np.zeros((1, g), dtype=np.int64)
    for idx, M, W in parts:
        a, b = pts.shape[0], W.shape[0]
        pts = np.repeat(pts, b, axis=0)
        meta = np.repeat(meta, b, axis=0)
        pts[:, idx] = np.tile(W, (a, 1))
        meta = meta + np.tile(M, (a, 1))
    return meta, pts


def iter_orbit_chunks(G: MatrixSemigroup, v, K: int, reach: float, tol: float = 1e-12,
                      chunk: int = CHUNK) -> Iterator[tuple[np.ndarray, np.ndarray]]:
    """Orbit points within distance ``reach`` of 0, as ``(meta, points)`` chunks."""
    v = _prep_vector(G, v, "float")
    plan, runs, v = _group_runs(G, v, K, None, "float", tol, reach=reach)
    parts = []
    for gi, idx, mats, bnds, r, f in runs:
        M, W = _group_orbit(mats, v[idx], bnds, G.g, reach, 0.0)
        parts.append((idx, M, W))
    # stream over the largest factor, materialize the rest
    big = max(range(len(parts)), key=lambda i: parts[i][2].shape[0])
    rest_meta, rest_pts = _product([p for i, p in enumerate(parts) if i != big], G.n, G.g, v.dtype)
    idx, M, W = parts[big]
    step = max(1, chunk // max(1, rest_pts.shape[0]))
    for s in range(0, W.shape[0], step):
        Wc, Mc = W[s:s + step], M[s:s + step]
        pts = np.repeat(rest_pts, Wc.shape[0], axis=0)
        meta = np.repeat(rest_meta, Wc.shape[0], axis=0)
        pts[:, idx] = np.tile(Wc, (rest_pts.shape[0], 1))
        meta = meta + np.tile(Mc, (rest_pts.shape[0], 1))
        norms = np.linalg.norm(pts, axis=1)
        keep = norms <= reach * (1 + 1e-12)
        yield meta[keep], pts[keep]


def orbit_cover(G: MatrixSemigroup, v, K: int, window: Window, eps: float, tol: float = 1e-12):
    """Coverage of ``window`` by the orbit of ``v`` (a product cover when the
    generators split into independent coordinate groups)."""
    if not G.abelian:
        raise NotCommuting("exponent enumeration needs an abelian semigroup")
    v = _prep_vector(G, v, "float")
    d = 2 * G.n if G.field == "C" else G.n
    if window.dim != d:
        raise DimensionMismatch("window dimension does not match the (realified) space")
    plan, runs, v = _group_runs(G, v, K, window, "float", tol)
    covers, axes = [], []
    for gi, idx, mats, bnds, r, f in runs:
        ax = plan.real_axes(gi)
        acc = CoverAccumulator(window.sub(ax), eps)

        def sink(M, W, acc=acc):
            acc.add(complex_to_real_embedding(W) if G.field == "C" else W)

        _group_orbit(mats, v[idx], bnds, G.g, r, f, sink=sink)
        covers.append(acc.seal())
        axes.append(tuple(ax))
    if len(covers) == 1:
        return covers[0]
    return ProductCover(tuple(covers), tuple(axes))


# probes ------------------------------------------------------------------

def _clean_conjugates(nf: NormalForm) -> list[np.ndarray]:
    """Conjugated generators with the structurally zero entries set to zero."""
    n = nf.n
    mask = np.zeros((n, n), dtype=bool)
    for b in nf.blocks:
        o, w = b.offset, b.span
        if b.kind == "T":
            mask[o:o + w, o:o + w] = np.tril(np.ones((w, w), dtype=bool))
        else:
            for i in range(b.size):
                for j in range(i + 1):
                    mask[o + 2 * i:o + 2 * i + 2, o + 2 * j:o + 2 * j + 2] = True
    return [np.where(mask, M, 0) for M in nf.conjugated]


@dataclass
class ProbeResult:
    report: CoverageReport
    u: np.ndarray
    normal_form: Optional[NormalForm] = None
    cross_checks: list = field(default_factory=list)
    message: str = ""

    def to_json(self) -> dict:
        out = {"report": self.report.to_json(), "vector": _vec_json(self.u), "message": self.message,
               "cross_checks": self.cross_checks}
        if self.normal_form is not None:
            out["normal_form"] = self.normal_form.to_json()
        return out


def _vec_json(v):
    v = np.asarray(v)
    if np.iscomplexobj(v):
        return [[float(z.real), float(z.imag)] for z in v]
    return [float(x) for x in v]


def _default_window(G: MatrixSemigroup, radius: float = 2.0) -> Window:
    d = 2 * G.n if G.field == "C" else G.n
    return Window.cube(d, -radius, radius)


def hypercyclicity_probe(G: MatrixSemigroup, window: Optional[Window] = None, eps: float = 0.1,
                         schedule: Sequence[int] = (10, 20, 40), thresholds: VerdictThresholds = VerdictThresholds(),
                         cross_checks: int = 0, seed: int = 0) -> ProbeResult:
    """Density evidence for the orbit of ``u_eta`` under the normal form.

    The family is conjugated into block form and the orbit of the canonical
    vector is covered in ``window`` (read in the conjugated coordinates; a
    linear change of coordinates does not affect density).  ``cross_checks``
    random starting vectors are also run on the original generators at the
    final budget and reported alongside.
    """
    if not G.abelian:
        raise NotCommuting("hypercyclicity probe needs an abelian semigroup")
    window = window or _default_window(G)
    nf = normal_form(G.float_generators(), G.field)
    conj = make_semigroup(_clean_conjugates(nf), G.field, True, G.weights, G.names)
    u = canonical_vector_u_eta(nf.eta).astype(complex if G.field == "C" else float)
    report = density_trend(lambda K: orbit_cover(conj, u, K, window, eps), window, eps, schedule, thresholds)
    checks = []
    if cross_checks:
        rng = np.random.default_rng(seed)
        for _ in range(cross_checks):
            x = rng.uniform(-1, 1, G.n)
            if G.field == "C":
                x = x + 1j * rng.uniform(-1, 1, G.n)
            cov = orbit_cover(G, x, schedule[-1], window, eps).coverage
            checks.append({"vector": _vec_json(x), "coverage": cov})
    msg = "hypercyclic (evidence)" if report.verdict == DENSE else report.verdict
    return ProbeResult(report, u, nf, checks, msg)


def canonical_invariant_subspace(nf: NormalForm) -> Subspace:
    """The invariant subspace built from the first diagonal block.

    Over C, or over R with a triangular block: the line through ``P e_{n1}``
    (``n1`` = size of the first block; ``e_{n1}`` is a common eigenvector of
    the lower-triangular block).  Over R with only rotation-scaling blocks:
    the plane ``P span(e_{2m1-1}, e_{2m1})``, which is the whole space when
    ``n == 2``.
    """
    n = nf.n
    if n < 2:
        raise NoNontrivialCanonical("dimension 1 has no nontrivial proper subspace")
    first = nf.blocks[0]
    if first.kind == "T":
        cols = [first.offset + first.size - 1]
    else:
        if n == 2:
            raise NoNontrivialCanonical("R^2 with a single rotation-scaling block: the canonical plane is R^2")
        last = first.offset + 2 * first.size - 2
        cols = [last, last + 1]
    B = nf.P[:, cols]
    Q, _ = np.linalg.qr(B)
    if nf.field == "R":
        Q = np.real(Q)
    return Subspace(Q, nf.field)


def is_invariant(G: MatrixSemigroup, M: Subspace, tol: Optional[float] = None) -> tuple[bool, float]:
    worst = 0.0
    for A in G.float_generators():
        for m in M.basis.T:
            worst = max(worst, float(membership_distance(A @ m, M)))
    if tol is None:
        tol = 1e-8 * (1 + max(float(np.abs(A).max()) for A in G.float_generators()))
    return worst <= tol, worst


def _trace_window_dim(M: Subspace) -> int:
    return M.dim * (2 if M.field == "C" or np.iscomplexobj(M.basis) else 1)


def subspace_trace_cover(G: MatrixSemigroup, M: Subspace, x, K: int, window: Window, eps: float,
                         tol: Optional[float] = None) -> GridCover:
    """Coverage, in M-coordinates, of the orbit of ``x`` intersected with M."""
    reach, _ = _box_reach(window)
    acc = CoverAccumulator(window, eps)
    for meta, pts in iter_orbit_chunks(G, x, K, reach):
        if not len(pts):
            continue
        on = pts[on_subspace(pts, M, tol)]
        if not len(on):
            continue
        c = on @ M.basis.conj()
        acc.add(complex_to_real_embedding(c) if _trace_window_dim(M) != M.dim else np.real(c))
    return acc.seal()


def subspace_hypercyclicity_probe(G: MatrixSemigroup, M: Subspace, x, window: Optional[Window] = None,
                                  eps: float = 0.1, schedule: Sequence[int] = (10, 20, 40),
                                  thresholds: VerdictThresholds = VerdictThresholds()) -> CoverageReport:
    """Density evidence for ``G(x) ∩ M`` inside M (orthonormal M-coordinates)."""
    if not G.abelian:
        raise NotCommuting("probe needs an abelian semigroup")
    if M.dim == 0:
        raise ConfigError("M must be nontrivial")
    if M.ambient_dim != G.n:
        raise DimensionMismatch("subspace and semigroup dimensions differ")
    d = _trace_window_dim(M)
    window = window or Window.cube(d, -2.0, 2.0)
    if window.dim != d:
        raise DimensionMismatch(f"window must have dimension {d}")
    return density_trend(lambda K: subspace_trace_cover(G, M, x, K, window, eps), window, eps, schedule, thresholds)


def witness_in_subspace(G: MatrixSemigroup, M: Subspace, window: Optional[Window] = None, eps: float = 0.1,
                        schedule: Sequence[int] = (10, 20, 40), candidates: int = 12,
                        prior: Sequence = (), scales: Sequence[float] = (1.0, 0.5, 2.0)):
    """Search ``y`` in M whose orbit trace on M gives dense evidence.

    Candidates: projections onto M of ``prior`` vectors, then M-grid points
    (basis vectors and their sums and differences) at three scales.  Returns
    ``(y, report)`` for the first success or ``(None, last report)``.
    """
    from .linalg import project
    cands = []
    for x in prior:
        p = project(np.asarray(x), M)
        if np.linalg.norm(p) > 1e-12:
            cands.append(p)
    B = M.basis.T
    combos = [b for b in B]
    for i in range(len(B)):
        for j in range(i + 1, len(B)):
            combos += [B[i] + B[j], B[i] - B[j]]
    for s in scales:
        cands += [s * c for c in combos]
    report = None
    for y in cands[:max(candidates, len(prior))]:
        report = subspace_hypercyclicity_probe(G, M, y, window, eps, schedule)
        if report.verdict == DENSE:
            return y, report
    return None, report


# spectra -----------------------------------------------------------------

@dataclass
class SpectrumSet:
    block: int
    values: np.ndarray
    exponents: np.ndarray

    def to_json(self) -> dict:
        return {"block": self.block, "count": int(len(self.values))}


def spectrum(G: MatrixSemigroup, nf: NormalForm, block: int, K: int, window: Optional[Window] = None,
             eps: float = 0.1, schedule: Optional[Sequence[int]] = None, modulus: bool = False):
    """Eigenvalues of diagonal block ``block`` over the enumerated products.

    Each product's block has the single eigenvalue ``prod lambda_i^{k_i}``
    (its complex representative for rotation-scaling blocks), so the set is
    the orbit of 1 under the scalar semigroup of block eigenvalues.  With a
    window, also returns a coverage report (of moduli when ``modulus``).
    """
    if not 0 <= block < len(nf.blocks):
        raise ConfigError(f"block index {block} out of range")
    lams = [complex(z) for z in nf.block_eigenvalues[block]]
    real = nf.field == "R" and nf.blocks[block].kind == "T" or all(abs(z.imag) <= 1e-12 for z in lams)
    scal = [np.array([[z.real if real else z]]) for z in lams]
    S = make_semigroup(scal, "R" if real else "C", True, G.weights, G.names)
    one = np.array([1.0]) if real else np.array([1.0 + 0j])
    samp = orbit(S, one, K)
    vals = samp.points[:, 0]
    out = SpectrumSet(block, vals, samp.meta)
    if window is None:
        return out, None

    def sampler(k):
        pts = orbit(S, one, k).points[:, 0]
        if modulus:
            return np.abs(pts)[:, None]
        return complex_to_real_embedding(pts[:, None]) if not real else np.real(pts)[:, None]

    sched = schedule or (max(1, K // 4), max(2, K // 2), K)
    return out, density_trend(sampler, window, eps, sched)


# Example semigroups --------------------------------------------------------

def rotation(angle: float) -> np.ndarray:
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[c, -s], [s, c]])


def _theta_float(theta) -> tuple[float, bool]:
    if isinstance(theta, Surd):
        if theta.is_rational():
            raise RationalTheta(f"theta = {theta} is rational")
        return float(theta), True
    if isinstance(theta, (int, Fraction)):
        raise RationalTheta(f"theta = {theta} is rational")
    if isinstance(theta, str):
        from .surd import parse_scalar
        val, cert = parse_scalar(theta)
        return _theta_float(val) if cert else (float(val), False)
    return float(theta), False


def _reduce_mod2(s: int, theta) -> float:
    """``s*theta mod 2`` computed in high precision for surd ``theta``."""
    if isinstance(theta, Surd):
        from decimal import Decimal, localcontext
        with localcontext() as ctx:
            ctx.prec = 60
            t = sum(Decimal(v.numerator) / Decimal(v.denominator) * Decimal(d).sqrt() for d, v in theta.coeffs.items())
            x = Decimal(s) * t
            return float(x - 2 * (x / 2).to_integral_value(rounding="ROUND_FLOOR"))
    return math.fmod(s * float(theta), 2.0) % 2.0


def example_G_theta(p: int, q: int, theta, weights: Sequence[float] = (1.0, 1.0, 8.0)) -> MatrixSemigroup:
    """``B1 = p I``, ``B2 = I / q``, ``B3`` = rotation by ``pi theta`` on R^2."""
    if int(p) != p or int(q) != q or p < 2 or q < 2:
        raise ConfigError("p and q must be integers >= 2")
    if math.gcd(int(p), int(q)) != 1:
        raise NotCoprime(f"gcd({p}, {q}) != 1")
    th, certified = _theta_float(theta)
    B1 = np.array([[Fraction(p), Fraction(0)], [Fraction(0), Fraction(p)]], dtype=object)
    B2 = np.array([[Fraction(1, q), Fraction(0)], [Fraction(0), Fraction(1, q)]], dtype=object)
    B3 = rotation(math.pi * th)
    info = {"kind": "G_theta", "p": int(p), "q": int(q), "theta": theta.to_json() if isinstance(theta, Surd) else th,
            "certified": certified}
    G = make_semigroup([as_float(B1), as_float(B2), B3], "R", True, weights, ("B1", "B2", "B3"), info=info)
    G.info["exact_generators"] = [B1, B2]
    return G


def example_dense_spectrum_C2(theta: float = math.sqrt(2)) -> MatrixSemigroup:
    """Diagonal family on C^2 whose coordinate spectra are ``{2^k 3^-m e^{i pi s theta}}``."""
    e = complex(np.exp(1j * math.pi * theta))
    diag = [(2, 1), (1 / 3, 1), (e, 1), (1, 2), (1, 1 / 3), (1, e)]
    gens = [np.diag(np.array(d, dtype=complex)) for d in diag]
    return make_semigroup(gens, "C", True, (1.0, 1.0, 8.0) * 2, ("A1", "A2", "A3", "B1", "B2", "B3"),
                          info={"kind": "dense_spectrum_C2", "theta": theta})


def example_R3(theta: float = math.sqrt(2)) -> MatrixSemigroup:
    """Family on R^3 with one triangular block (signed ``2^k 3^-m``) and one
    rotation-scaling block (``G_theta`` on the last two axes)."""
    def blocks(a, B):
        M = np.zeros((3, 3))
        M[0, 0] = a
        M[1:, 1:] = B
        return M
    I2 = np.eye(2)
    gens = [blocks(2, I2), blocks(1 / 3, I2), blocks(-1, I2), blocks(1, 2 * I2), blocks(1, I2 / 3),
            blocks(1, rotation(math.pi * theta))]
    return make_semigroup(gens, "R", True, (1.0, 1.0, 1.0, 1.0, 1.0, 8.0), ("A1", "A2", "S", "B1", "B2", "B3"),
                          info={"kind": "R3", "theta": theta})


@dataclass
class GThetaTrace:
    scalars: list[Fraction]
    exponents: list[tuple[int, int]]
    guard: float

    def to_json(self) -> dict:
        return {"scalars": [str(x) for x in self.scalars], "guard": self.guard}


def rotation_guard(theta, bound: int) -> float:
    """``min_{1 <= s <= bound} |sin(pi s theta)|`` (``inf`` for bound 0)."""
    if bound < 1:
        return math.inf
    return min(abs(math.sin(math.pi * _reduce_mod2(s, theta))) for s in range(1, bound + 1))


def line_trace_G_theta(p: int, q: int, theta, v, bound: int) -> GThetaTrace:
    """Structured trace of the ``G_theta`` orbit of ``v`` on the line ``R v``.

    An orbit point ``(p^k/q^m) R(pi s theta) v`` lies on ``R v`` only if
    ``sin(pi s theta) = 0``, i.e. ``s = 0`` for irrational theta, so the trace
    is ``{(p^k / q^m) v}``.  The guard records how far the rotations stay from
    the line at this bound.
    """
    v = np.asarray(v, dtype=float)
    if not np.any(v):
        raise ConfigError("v must be nonzero")
    _theta_float(theta)
    pairs = [(k, m) for k in range(bound + 1) for m in range(bound + 1)]
    scalars = [Fraction(p**k, q**m) for k, m in pairs]
    return GThetaTrace(scalars, pairs, rotation_guard(theta, bound))


# Non-abelian example -----------------------------------------------------

def javaheri_semigroup(A, B, with_sign: bool = False) -> MatrixSemigroup:
    """Semigroup of ``A``, ``B``, ``A' = I / a11`` and ``B' = I / b1``
    (optionally ``-I``); ``A`` lower triangular, ``B`` diagonal."""
    A = np.asarray(A)
    B = np.asarray(B)
    n = A.shape[0]
    if A.shape != (n, n) or B.shape != (n, n):
        raise DimensionMismatch("A and B must be square of equal size")
    Af, Bf = as_float(A), as_float(B)
    if np.any(np.abs(np.triu(Af, 1)) > 0):
        raise ConfigError("A must be lower triangular")
    if np.any(np.abs(Bf - np.diag(np.diag(Bf))) > 0):
        raise ConfigError("B must be diagonal")
    exact = A.dtype == object and B.dtype == object
    one = Fraction(1) if exact else 1.0
    eye = np.array([[one if i == j else 0 * one for j in range(n)] for i in range(n)], dtype=object if exact else float)
    Ap = eye * (one / A[0, 0])
    Bp = eye * (one / B[0, 0])
    gens = [A, B, Ap, Bp]
    names = ["A", "B", "A'", "B'"]
    if with_sign:
        gens.append(-eye)
        names.append("-I")
    field = "C" if np.iscomplexobj(Af) or np.iscomplexobj(Bf) else "R"
    return make_semigroup(gens, field, None, names=names, info={"kind": "javaheri"})


def _vkey(w: np.ndarray, digits: int = 12) -> bytes:
    w = as_float(w)
    scale = max(float(np.max(np.abs(w))), 1e-300)
    e = math.floor(math.log10(scale))
    return np.round(w / 10.0**e, digits).tobytes() + e.to_bytes(4, "little", signed=True)


def javaheri_orbit(G: MatrixSemigroup, L: int, v, exact: bool = False) -> PointSample:
    """Orbit points ``W v`` over words ``W`` of length ``<= L``.

    Breadth-first over vectors: ``W v`` for ``W = g W'`` is ``g (W' v)``, so
    expanding deduplicated vectors level by level gives exactly the orbit
    restricted to word length ``L``.  Metadata: word length and the letter
    counts of the first word that reached each point.
    """
    gens = [np.asarray(A, dtype=object) for A in G.generators] if exact else G.float_generators()
    v = np.asarray(v, dtype=object) if exact else as_float(v).astype(complex if G.field == "C" else float)
    seen = {_vkey(v): 0}
    pts = [v]
    counts = [np.zeros(G.g, dtype=np.int64)]
    lengths = [0]
    frontier = [0]
    for ell in range(1, L + 1):
        nxt = []
        for i in frontier:
            for gi, A in enumerate(gens):
                w = A.dot(pts[i])
                key = _vkey(w)
                if key in seen:
                    continue
                seen[key] = len(pts)
                c = counts[i].copy()
                c[gi] += 1
                pts.append(w)
                counts.append(c)
                lengths.append(ell)
                nxt.append(len(pts) - 1)
        frontier = nxt
        if not frontier:
            break
    meta = np.column_stack([np.array(lengths, dtype=np.int64), np.array(counts)])
    exact_rows = SurdArray.from_rows([list(p) for p in pts], G.n) if exact else None
    P = np.array([as_float(p) for p in pts])
    return PointSample(P, meta, ("length",) + G.names, {"kind": "javaheri_orbit", "L": L}, (), exact_rows)


def log_coverage(values: np.ndarray, R: float, eps: float) -> GridCover:
    """Coverage of ``[1/R, R]`` by positive scalars, measured in log coordinates."""
    vals = np.asarray(values, dtype=float)
    vals = vals[vals > 0]
    return coverage(np.log(vals)[:, None], Window((-math.log(R),), (math.log(R),)), eps)


def javaheri_trace(G: MatrixSemigroup, L: int, exact: bool = False) -> tuple[PointSample, np.ndarray]:
    """Orbit of ``e_n`` and its scalars on the line ``K e_n``."""
    n = G.n
    e = np.zeros(n, dtype=object if exact else float)
    if exact:
        e[:] = Fraction(0)
        e[-1] = Fraction(1)
    else:
        e[-1] = 1.0
    samp = javaheri_orbit(G, L, e, exact)
    en = np.zeros(n)
    en[-1] = 1.0
    M = Subspace(en[:, None], G.field)
    tr = samp.subset(on_subspace(samp.points, M))
    return tr, tr.points[:, -1]


def planted_javaheri(n: int = 3, with_sign: bool = False, exact: bool = True) -> MatrixSemigroup:
    """Instance with ``a11 = 1, a_nn = 2, b1 = 3, b_n = 1`` and a non-commuting pair."""
    F = Fraction if exact else float
    A = np.array([[F(0)] * n for _ in range(n)], dtype=object if exact else float)
    B = np.array([[F(0)] * n for _ in range(n)], dtype=object if exact else float)
    for i in range(n):
        A[i, i] = F(1) if i < n - 1 else F(2)
        for j in range(i):
            A[i, j] = F(1)
        B[i, i] = F(3) if i == 0 else F(1)
    B[n - 1, n - 1] = F(1)
    return javaheri_semigroup(A, B, with_sign)
