"""Samplers for the explicit dense and non-dense point sets.

* ``A_alpha = N^n + N*alpha`` with ``alpha_i = -sqrt(p_i)`` (Kronecker sets),
* its complex sibling ``N^n + i N^n + N*(alpha + i beta)``,
* ``A2``: pairs ``(r1 e^{2 pi i n1 t1}, r2 e^{2 pi i n2 t2})``,
* ``B``: rays at angles in ``[0, 1/2)`` plus irrational angles in ``[1/2, 1)``,
* finitely generated Z-modules.

Every sampler returns a :class:`PointSample` whose integer metadata
reproduces each point bit for bit (see :func:`reconstruct`).  Exact mode
additionally carries the points as a :class:`~hyperlab.surd.SurdArray`
(complex points in the realified layout).
"""

from __future__ import annotations

import csv
import io
import itertools
import json
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Optional, Sequence, Union

import numpy as np

from .density import PolyDisc, ProductCover, Region, coverage
from .errors import ConfigError, DimensionMismatch, Duplicate, NotSquarefree, SearchBoundExceeded
from .linalg import Subspace, annihilator, as_float, complex_to_real_embedding, on_subspace
from .surd import Surd, SurdArray, is_squarefree

Scalar = Union[int, Fraction, Surd, float]


@dataclass(frozen=True)
class IrrationalBasis:
    """Negative irrationals ``alpha_i = -sqrt(p_i)``.

    With distinct squarefree ``p_i >= 2`` the numbers ``1, sqrt(p_1), ...``
    are linearly independent over Q (their field has degree ``2^n``), which
    is what the density results need.  Bases built from raw floats carry
    ``verified=False``.
    """

    values: tuple[float, ...]
    primes: tuple[int, ...] = ()
    exact: tuple[Surd, ...] = ()
    verified: bool = True

    @property
    def n(self) -> int:
        return len(self.values)

    def array(self) -> np.ndarray:
        return np.array(self.values, dtype=float)

    @classmethod
    def from_values(cls, values: Sequence[float]) -> "IrrationalBasis":
        vals = tuple(float(v) for v in values)
        if any(v >= 0 for v in vals):
            raise ConfigError("basis values must be negative")
        return cls(vals, (), (), False)

    def to_json(self) -> dict:
        if self.verified:
            return {"primes": list(self.primes)}
        return {"values": list(self.values), "verified": False}

    @classmethod
    def from_json(cls, obj) -> "IrrationalBasis":
        if "primes" in obj:
            return make_alpha(len(obj["primes"]), obj["primes"])
        return cls.from_values(obj["values"])


def make_alpha(n: int, primes: Sequence[int]) -> IrrationalBasis:
    primes = [int(p) for p in primes]
    if len(primes) != n:
        raise DimensionMismatch(f"need {n} radicands, got {len(primes)}")
    for p in primes:
        if p < 2 or not is_squarefree(p):
            raise NotSquarefree(f"{p} is not a squarefree integer >= 2")
    if len(set(primes)) != len(primes):
        raise Duplicate(f"repeated radicand in {primes}")
    return IrrationalBasis(
        tuple(-math.sqrt(p) for p in primes),
        tuple(primes),
        tuple(Surd.sqrt(p, -1) for p in primes),
        True,
    )


@dataclass
class PointSample:
    """Points (rows) with the integer metadata that generated them."""

    points: np.ndarray
    meta: np.ndarray
    meta_names: tuple[str, ...]
    source: dict = field(default_factory=dict)
    flags: tuple[str, ...] = ()
    exact: Optional[list] = None
    coords: Optional[np.ndarray] = None

    def __len__(self) -> int:
        return int(self.points.shape[0])

    @property
    def dim(self) -> int:
        return int(self.points.shape[1])

    @property
    def is_complex(self) -> bool:
        return np.iscomplexobj(self.points)

    def real_points(self) -> np.ndarray:
        """Points in R^d (complex points through the interleaving embedding)."""
        if self.is_complex:
            return complex_to_real_embedding(self.points)
        return self.points

    def exact_rows(self) -> list[tuple[Surd, ...]]:
        """Exact points as surd tuples (complex samples in realified layout)."""
        if self.exact is None:
            raise ValueError("sample carries no exact points")
        return self.exact.to_rows()

    def subset(self, mask) -> "PointSample":
        idx = np.flatnonzero(np.asarray(mask)) if np.asarray(mask).dtype == bool else np.asarray(mask, dtype=int)
        return replace(
            self,
            points=self.points[idx],
            meta=self.meta[idx],
            exact=None if self.exact is None else self.exact[idx],
            coords=None if self.coords is None else self.coords[idx],
        )

    @classmethod
    def concat(cls, parts: Sequence["PointSample"]) -> "PointSample":
        first = parts[0]
        return replace(
            first,
            points=np.concatenate([p.points for p in parts]),
            meta=np.concatenate([p.meta for p in parts]),
            exact=None if any(p.exact is None for p in parts) else SurdArray.concat([p.exact for p in parts]),
            coords=None if any(p.coords is None for p in parts) else np.concatenate([p.coords for p in parts]),
        )

    def _columns(self) -> list[str]:
        d = self.dim
        if self.is_complex:
            return [f"{c}{j + 1}" for j in range(d) for c in ("re", "im")]
        return [f"x{j + 1}" for j in range(d)]

    def to_csv(self, fh=None) -> Optional[str]:
        """One row per point, metadata columns first."""
        out = fh if fh is not None else io.StringIO()
        w = csv.writer(out)
        w.writerow(list(self.meta_names) + self._columns())
        real = self.real_points()
        for m, p in zip(self.meta, real):
            w.writerow([int(x) for x in m] + [repr(float(x)) for x in p])
        return out.getvalue() if fh is None else None

    def to_json(self) -> dict:
        return {
            "source": self.source,
            "flags": list(self.flags),
            "meta_names": list(self.meta_names),
            "meta": self.meta.tolist(),
            "points": self.real_points().tolist(),
        }


@dataclass(frozen=True)
class LatticeCosetSet:
    """Descriptor of one of the sampled sets, serializable to JSON."""

    kind: str
    params: dict
    S: int

    KINDS = ("A_alpha", "A_alpha_beta", "A2", "B", "Z_module")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ConfigError(f"unknown set kind {self.kind!r}")
        if self.S < 0:
            raise ConfigError("bound must be >= 0")

    def to_json(self, window: Optional[Region] = None) -> dict:
        out = {"kind": self.kind, **self.params, "S": self.S}
        if window is not None:
            out["window"] = window.to_json()
        return out

    def sample(self, window: Region, mode: str = "float", S: Optional[int] = None) -> PointSample:
        S = self.S if S is None else S
        p = self.params
        if self.kind == "A_alpha":
            alpha = make_alpha(len(p["alpha_primes"]), p["alpha_primes"])
            return sample_A_alpha(alpha, S, window, mode)
        if self.kind == "A_alpha_beta":
            a = make_alpha(len(p["alpha_primes"]), p["alpha_primes"])
            b = make_alpha(len(p["beta_primes"]), p["beta_primes"])
            return sample_A_alpha_beta(a, b, S, window, mode)
        if self.kind == "A2":
            return sample_A2(p.get("theta1", math.sqrt(2)), p.get("theta2", math.sqrt(3)),
                             radial_grid(p.get("radial_step", 0.05), p.get("radial_max", 1.0)), S, window)
        if self.kind == "B":
            return sample_B(radial_grid(p.get("radial_step", 1.0 / S), p.get("radial_max", 1.5)),
                            angle_grid(p.get("angles", 4 * S)))
        gens = [[parse_token(x) for x in g] for g in p["generators"]]
        return sample_Z_module(gens, S, window, mode)


def parse_token(x):
    from .surd import parse_scalar
    v, _ = parse_scalar(x) if isinstance(x, str) else (x, True)
    return v


# exact window tests -------------------------------------------------------

def _exact_window_mask(X: SurdArray, region: Region) -> np.ndarray:
    """Exact closed-region membership of the rows of ``X``."""
    if len(X) == 0:
        return np.zeros(0, dtype=bool)
    if isinstance(region, PolyDisc):
        approx = X.approx()
        r2 = approx[:, 0::2] ** 2 + approx[:, 1::2] ** 2
        R2 = region.radius ** 2
        mask = np.all(r2 <= R2, axis=1)
        for i in np.flatnonzero(np.any(np.abs(r2 - R2) <= 1e-9 * (1 + R2), axis=1)):
            row = X.row(i)
            mask[i] = all(row[2 * j] * row[2 * j] + row[2 * j + 1] * row[2 * j + 1] <= Fraction(region.radius) ** 2
                          for j in range(region.n))
        return mask
    mask = np.ones(len(X), dtype=bool)
    for j, (lo, hi) in enumerate(zip(region.lo, region.hi)):
        mask &= X.compare_column(j, Fraction(lo)) >= 0
        mask &= X.compare_column(j, Fraction(hi)) <= 0
    return mask


def _candidate_range(lo: float, hi: float, shift: float, S: int) -> range:
    # integers m in [0, S] with lo <= m + shift <= hi, padded by one for rounding
    a = max(0, math.ceil(lo - shift) - 1)
    b = min(S, math.floor(hi - shift) + 1)
    return range(a, b + 1)


# A_alpha -----------------------------------------------------------------

def _index_cap(S: int, index_bound: str) -> int:
    # "all": every index in [0, S]; "s": only s <= S, the s_i limited by the window
    if index_bound == "all":
        return S
    if index_bound == "s":
        return 2**62
    raise ConfigError(f"index_bound must be 'all' or 's', got {index_bound!r}")


def sample_A_alpha(alpha: IrrationalBasis, S: int, window: Region, mode: str = "float",
                   index_bound: str = "all") -> PointSample:
    """All ``[s_1..s_n] + s*alpha`` with ``0 <= s, s_i <= S`` inside ``window``.

    With ``index_bound="s"`` only ``s`` is capped and the ``s_i`` range over
    every value the window admits (so ``S=0`` gives the integer grid points).
    Metadata rows are ``(s, s_1, ..., s_n)`` in lexicographic order.
    """
    n = alpha.n
    if window.dim != n:
        raise DimensionMismatch(f"window of dimension {window.dim} for n={n}")
    if S < 0:
        raise ConfigError("bound must be >= 0")
    cap = _index_cap(S, index_bound)
    a = alpha.array()
    lo, hi = window.lo, window.hi
    metas, pts = [], []
    for s in range(S + 1):
        shift = s * a
        # alpha < 0: once s*alpha_i + cap drops below lo_i it stays below
        if np.any(shift + cap < np.array(lo)):
            break
        ranges = [_candidate_range(lo[i], hi[i], shift[i], cap) for i in range(n)]
        if any(len(r) == 0 for r in ranges):
            continue
        grid = np.array(list(itertools.product(*ranges)), dtype=np.int64)
        meta = np.column_stack([np.full(len(grid), s, dtype=np.int64), grid])
        metas.append(meta)
    meta = np.concatenate(metas) if metas else np.zeros((0, n + 1), dtype=np.int64)
    pts = _a_alpha_points(meta, a)
    keep = window.contains(pts) if len(pts) else np.zeros(0, bool)
    exact = None
    if mode == "exact":
        if not alpha.exact:
            raise ConfigError("exact mode needs a surd-certified basis")
        terms = [(i + 1, i, Surd(1)) for i in range(n)] + [(0, i, alpha.exact[i]) for i in range(n)]
        X = SurdArray.affine(meta, terms, n)
        keep = _exact_window_mask(X, window)
        exact = X[keep]
    flags = () if alpha.verified else ("independence unverified",)
    return PointSample(pts[keep], meta[keep], ("s",) + tuple(f"s{i + 1}" for i in range(n)),
                       {"kind": "A_alpha", **alpha.to_json(), "S": S, "index_bound": index_bound,
                        "window": window.to_json()}, flags, exact)


def _a_alpha_points(meta: np.ndarray, a: np.ndarray) -> np.ndarray:
    if meta.shape[0] == 0:
        return np.zeros((0, len(a)))
    return meta[:, 1:] + meta[:, :1] * a


# A_{alpha, beta} ---------------------------------------------------------

def sample_A_alpha_beta(alpha: IrrationalBasis, beta: IrrationalBasis, S: int, window: Region,
                        mode: str = "float", index_bound: str = "all") -> PointSample:
    """Points ``[m_j + i m'_j]_j + s*(alpha + i beta)`` with indices in ``[0, S]``.

    ``index_bound`` works as in :func:`sample_A_alpha`.
    ``window`` lives in the realified coordinates ``(re z_1, im z_1, ...)``.
    Metadata rows are ``(s, m_1, m'_1, ..., m_n, m'_n)``.
    """
    n = alpha.n
    if beta.n != n:
        raise DimensionMismatch("alpha and beta differ in length")
    if window.dim != 2 * n:
        raise DimensionMismatch(f"window of dimension {window.dim} for C^{n}")
    if alpha.verified and beta.verified and len(set(alpha.primes) | set(beta.primes)) != 2 * n:
        raise Duplicate("alpha and beta radicands must be distinct")
    cap = _index_cap(S, index_bound)
    c = alpha.array() + 1j * beta.array()
    lo, hi = window.lo, window.hi
    metas = []
    for s in range(S + 1):
        w = s * c
        if np.any(w.real + cap < np.array(lo[0::2])) or np.any(w.imag + cap < np.array(lo[1::2])):
            break
        ranges = []
        for j in range(n):
            ranges.append(_candidate_range(lo[2 * j], hi[2 * j], w[j].real, cap))
            ranges.append(_candidate_range(lo[2 * j + 1], hi[2 * j + 1], w[j].imag, cap))
        if any(len(r) == 0 for r in ranges):
            continue
        grid = np.array(list(itertools.product(*ranges)), dtype=np.int64)
        metas.append(np.column_stack([np.full(len(grid), s, dtype=np.int64), grid]))
    meta = np.concatenate(metas) if metas else np.zeros((0, 2 * n + 1), dtype=np.int64)
    pts = _a_alpha_beta_points(meta, c)
    keep = window.contains(complex_to_real_embedding(pts)) if len(pts) else np.zeros(0, bool)
    exact = None
    if mode == "exact":
        # realified layout (re z_1, im z_1, ...), matching the embedding
        terms = [(k + 1, k, Surd(1)) for k in range(2 * n)]
        terms += [(0, 2 * j, alpha.exact[j]) for j in range(n)] + [(0, 2 * j + 1, beta.exact[j]) for j in range(n)]
        X = SurdArray.affine(meta, terms, 2 * n)
        keep = _exact_window_mask(X, window)
        exact = X[keep]
    names = ("s",) + tuple(x for j in range(n) for x in (f"m{j + 1}", f"m{j + 1}'"))
    flags = () if alpha.verified and beta.verified else ("independence unverified",)
    src = {"kind": "A_alpha_beta", "alpha": alpha.to_json(), "beta": beta.to_json(), "S": S,
           "index_bound": index_bound, "window": window.to_json()}
    return PointSample(pts[keep], meta[keep], names, src, flags, exact)


def _a_alpha_beta_points(meta: np.ndarray, c: np.ndarray) -> np.ndarray:
    if meta.shape[0] == 0:
        return np.zeros((0, len(c)), dtype=complex)
    gauss = meta[:, 1::2] + 1j * meta[:, 2::2]
    return gauss + meta[:, :1] * c


def interleave(alpha: IrrationalBasis, beta: IrrationalBasis) -> IrrationalBasis:
    """The real basis ``mu = (alpha_1, beta_1, alpha_2, beta_2, ...)``."""
    primes = tuple(p for pair in zip(alpha.primes, beta.primes) for p in pair)
    return make_alpha(len(primes), primes)


# A2 ----------------------------------------------------------------------

def radial_grid(step: float, r_max: float) -> np.ndarray:
    """``step, 2*step, ...`` up to ``r_max`` (inclusive, to rounding)."""
    k = int(math.floor(r_max / step + 1e-9))
    return step * np.arange(1, k + 1)


def angle_grid(count: int) -> list[Fraction]:
    return [Fraction(j, count) for j in range(count)]


def unit_phase(n, theta: float):
    """``exp(2 pi i n theta)`` with ``n*theta`` reduced mod 1 first."""
    return np.exp(2j * np.pi * np.mod(np.multiply(n, theta), 1.0))


def sample_A2(theta1: float, theta2: float, radii: Sequence[float], S: int,
              window: Optional[Region] = None) -> PointSample:
    """Points ``[r1 e^{2 pi i n1 t1}, r2 e^{2 pi i n2 t2}]``, ``0 <= n1, n2 <= S``.

    Metadata rows are ``(n1, n2, i1, i2)`` with ``r_k = radii[i_k]``.
    """
    radii = np.asarray(radii, dtype=float)
    if np.any(radii <= 0):
        raise ConfigError("radii must be positive")
    z1 = _a2_factor(float(theta1), radii, S)
    z2 = _a2_factor(float(theta2), radii, S)
    if window is not None:
        k1, k2 = _factor_masks(window, z1[0], z2[0])
    else:
        k1, k2 = np.ones(len(z1[0]), bool), np.ones(len(z2[0]), bool)
    i1, i2 = np.flatnonzero(k1), np.flatnonzero(k2)
    I1, I2 = np.meshgrid(i1, i2, indexing="ij")
    I1, I2 = I1.ravel(), I2.ravel()
    pts = np.column_stack([z1[0][I1], z2[0][I2]])
    meta = np.column_stack([z1[1][I1, 0], z2[1][I2, 0], z1[1][I1, 1], z2[1][I2, 1]]).astype(np.int64)
    order = np.lexsort(meta.T[::-1])
    src = {"kind": "A2", "theta1": float(theta1), "theta2": float(theta2), "radii": radii.tolist(), "S": S}
    if window is not None:
        src["window"] = window.to_json()
    return PointSample(pts[order], meta[order], ("n1", "n2", "i1", "i2"), src)


def _a2_factor(theta: float, radii: np.ndarray, S: int):
    n = np.arange(S + 1)
    N, I = np.meshgrid(n, np.arange(len(radii)), indexing="ij")
    z = radii[I.ravel()] * unit_phase(N.ravel(), theta)
    return z, np.column_stack([N.ravel(), I.ravel()])


def _factor_masks(window: Region, z1: np.ndarray, z2: np.ndarray):
    # both supported regions are products over the two complex coordinates
    if isinstance(window, PolyDisc):
        r = window.radius
        return np.abs(z1) <= r, np.abs(z2) <= r
    w1, w2 = window.sub((0, 1)), window.sub((2, 3))
    return (w1.contains(complex_to_real_embedding(z1[:, None])),
            w2.contains(complex_to_real_embedding(z2[:, None])))


def a2_factors(theta1: float, theta2: float, radii: Sequence[float], S: int) -> tuple[np.ndarray, np.ndarray]:
    """Per-coordinate point sets of A2; A2 is their Cartesian product."""
    radii = np.asarray(radii, dtype=float)
    return _a2_factor(float(theta1), radii, S)[0], _a2_factor(float(theta2), radii, S)[0]


@dataclass(frozen=True)
class RayDescription:
    """Trace of A2 on the complex line C*u: empty, or the open ray R_+^* v."""

    kind: str  # "empty" or "ray"
    n1: Optional[int] = None
    n2: Optional[int] = None
    k: Optional[int] = None
    v: Optional[np.ndarray] = None
    matches: int = 0

    def to_json(self) -> dict:
        if self.kind == "empty":
            return {"kind": "empty"}
        return {"kind": "ray", "n1": self.n1, "n2": self.n2, "k": self.k,
                "v": [[float(z.real), float(z.imag)] for z in self.v]}


def ray_direction(theta1: float, theta2: float, n1: int, n2: int, rho: float) -> np.ndarray:
    return np.array([unit_phase(n1, theta1), rho * unit_phase(n2, theta2)], dtype=complex)


def line_trace_A2(theta1: float, theta2: float, u: Sequence[complex], bound: int = 10,
                  theta: Optional[float] = None, tol: float = 1e-9) -> RayDescription:
    """Structure of ``A2 ∩ C u``.

    The phase ``theta`` of ``a2/a1`` (taken in ``[0, 1)`` from ``u`` unless
    given) must equal ``n2*t2 - n1*t1 + k``; the triple is searched with
    ``0 <= n1, n2 <= bound``.  Raises :class:`SearchBoundExceeded` when no
    triple exists up to the bound, which is not the same as an empty trace.
    """
    a1, a2 = complex(u[0]), complex(u[1])
    if a1 == 0 or a2 == 0:
        return RayDescription("empty")
    q = a2 / a1
    if theta is None:
        theta = (math.atan2(q.imag, q.real) / (2 * math.pi)) % 1.0
    n = np.arange(bound + 1)
    N1, N2 = np.meshgrid(n, n, indexing="ij")
    base = N2 * float(theta2) - N1 * float(theta1)
    diff = theta - base
    k = np.rint(diff)
    scale = 1.0 + bound * (abs(float(theta1)) + abs(float(theta2))) + abs(theta)
    hit = np.abs(diff - k) <= tol * scale
    if not hit.any():
        raise SearchBoundExceeded(f"no trace found up to bound {bound}")
    idx = np.argwhere(hit)
    i, j = idx[np.argmin(np.abs((diff - k)[hit]))]
    v = ray_direction(theta1, theta2, int(i), int(j), abs(a2) / abs(a1))
    return RayDescription("ray", int(i), int(j), int(k[i, j]), v, int(hit.sum()))


# B -----------------------------------------------------------------------

PLANT_OFFSET = Surd.sqrt(2) / 2  # 1/sqrt(2)


def planted_angle(a: Fraction) -> Surd:
    """Map a grid angle in ``[1/2, 1)`` to an irrational one in the same interval."""
    half = Fraction(1, 2)
    t = Surd(a - half) + PLANT_OFFSET
    k = math.floor(float(t) / 0.5)
    out = t - Fraction(k, 2) + half
    # guard the floor against rounding at interval edges
    while out >= 1:
        out = out - half
    while out < half:
        out = out + half
    return out


def in_B(r, theta) -> bool:
    """Literal membership of ``r e^{2 pi i theta}`` (``theta`` exact, in [0,1))."""
    if r <= 0:
        return False
    th = theta if isinstance(theta, Surd) else Surd(Fraction(theta))
    if th < 0 or th >= 1:
        raise ConfigError("angle must lie in [0, 1)")
    if th < Fraction(1, 2):
        return True
    return not th.is_rational()


def sample_B(radii: Sequence[float], angles: Sequence[Fraction]) -> PointSample:
    """Points ``r (cos 2 pi t, sin 2 pi t)`` over the grids.

    Grid angles in ``[0, 1/2)`` are used as given; grid angles in
    ``[1/2, 1)`` are rational, hence excluded from the set, and are replaced
    by planted irrational angles (shifted by ``1/sqrt(2)`` modulo the
    half-interval).  Metadata rows are ``(i_r, i_angle, planted)``.
    """
    radii = np.asarray(radii, dtype=float)
    if np.any(radii <= 0):
        raise ConfigError("radii must be positive")
    exact_angles: list[Surd] = []
    planted = []
    for a in angles:
        a = Fraction(a)
        if not 0 <= a < 1:
            raise ConfigError("angles must lie in [0, 1)")
        if a < Fraction(1, 2):
            exact_angles.append(Surd(a))
            planted.append(0)
        else:
            exact_angles.append(planted_angle(a))
            planted.append(1)
    t = np.array([float(x) for x in exact_angles])
    I, J = np.meshgrid(np.arange(len(radii)), np.arange(len(t)), indexing="ij")
    I, J = I.ravel(), J.ravel()
    meta = np.column_stack([I, J, np.asarray(planted, dtype=np.int64)[J]]).astype(np.int64)
    pts = _b_points(meta, radii, t)
    src = {"kind": "B", "radii": radii.tolist(), "angles": [x.to_json() for x in exact_angles]}
    return PointSample(pts, meta, ("i_r", "i_angle", "planted"), src)


def _b_points(meta, radii, t):
    r = radii[meta[:, 0]]
    ang = 2 * np.pi * t[meta[:, 1]]
    return np.column_stack([r * np.cos(ang), r * np.sin(ang)])


def line_through_origin(phi) -> Subspace:
    """The real line at angle ``2 pi phi``."""
    from .linalg import subspace_from_basis
    a = 2 * math.pi * float(phi)
    return subspace_from_basis([[math.cos(a), math.sin(a)]])


# Z-modules ---------------------------------------------------------------

def sample_Z_module(generators: Sequence[Sequence[Scalar]], bound: int, window: Optional[Region] = None,
                    mode: str = "float") -> PointSample:
    """All ``sum k_i u_i`` with ``|k_i| <= bound`` (inside ``window`` if given).

    Flags ``"m>n"`` when there are more generators than dimensions, where the
    set may well be dense.
    """
    m = len(generators)
    if m == 0:
        raise ConfigError("need at least one generator")
    n = len(generators[0])
    if any(len(g) != n for g in generators):
        raise DimensionMismatch("generators of differing dimensions")
    if window is not None and window.dim != n:
        raise DimensionMismatch("window dimension differs from generators")
    U = as_float(np.array([[x for x in g] for g in generators], dtype=object)).astype(float)
    ks = np.arange(-bound, bound + 1)
    K = np.stack(np.meshgrid(*([ks] * m), indexing="ij"), axis=-1).reshape(-1, m).astype(np.int64)
    pts = _z_points(K, U)
    keep = window.contains(pts) if window is not None else np.ones(len(K), bool)
    exact = None
    if mode == "exact":
        if any(isinstance(x, float) for g in generators for x in g):
            raise ConfigError("exact mode needs rational or surd generators")
        X = SurdArray.affine(K, [(i, j, generators[i][j]) for i in range(m) for j in range(n)], n)
        if window is not None:
            keep = _exact_window_mask(X, window)
        exact = X[keep]
    flags = ("m>n",) if m > n else ()
    src = {"kind": "Z_module", "generators": [[_scalar_json(x) for x in g] for g in generators], "S": bound}
    if window is not None:
        src["window"] = window.to_json()
    return PointSample(pts[keep], K[keep], tuple(f"k{i + 1}" for i in range(m)), src, flags, exact)


def _z_points(K: np.ndarray, U: np.ndarray) -> np.ndarray:
    # explicit sum keeps the rounding independent of batch size
    out = np.zeros((K.shape[0], U.shape[1]))
    for i in range(U.shape[0]):
        out = out + K[:, i:i + 1] * U[i]
    return out


def _scalar_json(x):
    if isinstance(x, Surd):
        return x.to_json()
    if isinstance(x, Fraction):
        return str(x)
    return x


def _scalar_from_json(x):
    if isinstance(x, dict):
        return Surd.from_json(x)
    if isinstance(x, str):
        return Fraction(x)
    return x


# traces ------------------------------------------------------------------

def subspace_trace(sample: PointSample, M: Subspace, tol: Optional[float] = None,
                   mode: str = "float") -> PointSample:
    """Points of ``sample`` lying in M, with their orthonormal M-coordinates.

    Float mode keeps points ``p`` with ``dist(p, M) <= 1e-9 |p|`` (or within an
    absolute ``tol`` when given).  Exact mode decides membership in exact arithmetic and
    needs exact points and an exactly spanned M.
    """
    if sample.dim != M.ambient_dim:
        raise DimensionMismatch(f"sample in dimension {sample.dim}, subspace in {M.ambient_dim}")
    if len(sample) == 0:
        out = sample.subset(np.zeros(0, dtype=int))
        out.coords = np.zeros((0, M.dim), dtype=M.basis.dtype)
        return out
    if mode == "exact":
        if sample.exact is None:
            raise ConfigError("exact trace needs an exact sample")
        if sample.is_complex:
            raise ConfigError("exact traces are real only")
        mask = np.ones(len(sample), dtype=bool)
        for nu in annihilator(M):
            mask &= sample.exact.dot(nu).is_zero_rows()
    else:
        mask = on_subspace(sample.points, M, tol)
    out = sample.subset(mask)
    out.coords = M.coordinates(out.points) if len(out) else np.zeros((0, M.dim), dtype=M.basis.dtype)
    out.source = {**sample.source, "trace_dim": M.dim}
    return out


# reproducibility ---------------------------------------------------------

def reconstruct(sample: PointSample) -> np.ndarray:
    """Recompute every point of ``sample`` from its metadata and source."""
    src = sample.source
    kind = src.get("kind")
    if kind == "A_alpha":
        alpha = IrrationalBasis.from_json(src)
        return _a_alpha_points(sample.meta, alpha.array())
    if kind == "A_alpha_beta":
        a = IrrationalBasis.from_json(src["alpha"])
        b = IrrationalBasis.from_json(src["beta"])
        return _a_alpha_beta_points(sample.meta, a.array() + 1j * b.array())
    if kind == "A2":
        radii = np.asarray(src["radii"])
        m = sample.meta
        z1 = radii[m[:, 2]] * unit_phase(m[:, 0], src["theta1"])
        z2 = radii[m[:, 3]] * unit_phase(m[:, 1], src["theta2"])
        return np.column_stack([z1, z2])
    if kind == "B":
        t = np.array([float(Surd.from_json(x)) for x in src["angles"]])
        return _b_points(sample.meta, np.asarray(src["radii"]), t)
    if kind == "Z_module":
        gens = [[_scalar_from_json(x) for x in g] for g in src["generators"]]
        U = as_float(np.array(gens, dtype=object)).astype(float)
        return _z_points(sample.meta, U)
    raise ConfigError(f"cannot reconstruct a sample of kind {kind!r}")


def dump_json(sample: PointSample) -> str:
    return json.dumps(sample.to_json())


def a2_cover(theta1: float, theta2: float, radii: Sequence[float], S: int, window: Region, eps: float):
    """Grid cover of the A2 sample, built as a product of the two factor covers."""
    z1, z2 = a2_factors(theta1, theta2, radii, S)
    if isinstance(window, PolyDisc):
        regions = (PolyDisc(1, window.radius), PolyDisc(1, window.radius))
    else:
        if window.dim != 4:
            raise ConfigError("A2 lives in C^2; the window needs 4 real axes")
        regions = (window.sub((0, 1)), window.sub((2, 3)))
    f1 = coverage(complex_to_real_embedding(z1[:, None]), regions[0], eps)
    f2 = coverage(complex_to_real_embedding(z2[:, None]), regions[1], eps)
    return ProductCover((f1, f2), ((0, 1), (2, 3)))
