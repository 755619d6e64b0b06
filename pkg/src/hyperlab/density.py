"""Epsilon-grid covering of point samples and graded density verdicts.

A window ``[lo_1, hi_1] x ... x [lo_d, hi_d]`` is cut into half-open cells of
side ``eps``; a point ``x`` falls in cell ``floor((x - lo) / eps)`` per axis
and points with any index past the last cell (in particular points exactly
at ``hi``) are dropped.  Coverage is the fraction of cells hit.

Hit sets are kept as sorted arrays of unique flat cell indices (or unique
index rows when the cell count does not fit an int64).  An accumulator
collects shards and a seal step dedups them into an immutable
:class:`GridCover`.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Callable, Optional, Sequence, Union

import numpy as np

from .errors import ConfigError, DimensionMismatch, IncompatibleGrids
from .linalg import Subspace, complex_to_real_embedding

DENSE = "DenseEvidence"
NOT_DENSE = "NotDenseEvidence"
INCONCLUSIVE = "Inconclusive"

_FLAT_LIMIT = 2**62


@dataclass(frozen=True)
class Window:
    """Axis-aligned box ``prod [lo_i, hi_i]``."""

    lo: tuple[float, ...]
    hi: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "lo", tuple(float(x) for x in self.lo))
        object.__setattr__(self, "hi", tuple(float(x) for x in self.hi))
        if len(self.lo) != len(self.hi) or not self.lo:
            raise ConfigError("window needs matching, nonempty lo/hi")
        if any(not (a < b) for a, b in zip(self.lo, self.hi)):
            raise ConfigError("window needs lo < hi on every axis")

    @classmethod
    def cube(cls, d: int, lo: float, hi: float) -> "Window":
        return cls((lo,) * d, (hi,) * d)

    @classmethod
    def parse(cls, text: str) -> "Window":
        """Parse ``"0,1x0,1"`` (one ``lo,hi`` pair per axis, ``x``-separated)."""
        lo, hi = [], []
        for part in text.lower().split("x"):
            bits = part.split(",")
            if len(bits) != 2:
                raise ConfigError(f"bad window axis {part!r}")
            try:
                lo.append(float(bits[0]))
                hi.append(float(bits[1]))
            except ValueError:
                raise ConfigError(f"bad window axis {part!r}") from None
        return cls(tuple(lo), tuple(hi))

    @property
    def dim(self) -> int:
        return len(self.lo)

    @property
    def diameter(self) -> float:
        return math.dist(self.lo, self.hi)

    def contains(self, pts: np.ndarray) -> np.ndarray:
        """Closed-box membership mask for the rows of ``pts``."""
        pts = np.atleast_2d(pts)
        lo, hi = np.array(self.lo), np.array(self.hi)
        return np.all((pts >= lo) & (pts <= hi), axis=1)

    def shape(self, eps: float) -> tuple[int, ...]:
        return tuple(max(1, math.ceil((b - a) / eps - 1e-9)) for a, b in zip(self.lo, self.hi))

    def sub(self, axes: Sequence[int]) -> "Window":
        return Window(tuple(self.lo[i] for i in axes), tuple(self.hi[i] for i in axes))

    def to_json(self) -> dict:
        return {"lo": list(self.lo), "hi": list(self.hi)}

    @classmethod
    def from_json(cls, obj) -> "Window":
        if isinstance(obj, str):
            return cls.parse(obj)
        return cls(tuple(obj["lo"]), tuple(obj["hi"]))


@dataclass(frozen=True)
class PolyDisc:
    """Product of closed discs ``|z_j| <= radius`` in C^n, seen in R^{2n}.

    Coverage over a polydisc counts only grid cells (of the bounding box)
    whose centre lies in the polydisc.
    """

    n: int
    radius: float

    @property
    def dim(self) -> int:
        return 2 * self.n

    @property
    def box(self) -> Window:
        return Window.cube(2 * self.n, -self.radius, self.radius)

    @property
    def lo(self):
        return self.box.lo

    @property
    def hi(self):
        return self.box.hi

    @property
    def diameter(self) -> float:
        return self.box.diameter

    def contains(self, pts: np.ndarray) -> np.ndarray:
        pts = np.atleast_2d(pts)
        r2 = pts[:, 0::2] ** 2 + pts[:, 1::2] ** 2
        return np.all(r2 <= self.radius**2, axis=1)

    def to_json(self) -> dict:
        return {"polydisc": self.n, "radius": self.radius}


Region = Union[Window, PolyDisc]


def _real_points(points) -> np.ndarray:
    if hasattr(points, "real_points"):
        points = points.real_points()
    pts = np.asarray(points)
    if pts.size == 0:
        return np.zeros((0, pts.shape[-1] if pts.ndim == 2 else 0))
    if np.iscomplexobj(pts):
        pts = complex_to_real_embedding(np.atleast_2d(pts))
    return np.atleast_2d(pts.astype(float, copy=False))


def cell_indices(pts: np.ndarray, window: Window, eps: float) -> np.ndarray:
    """Integer cell indices of the in-window rows of ``pts`` (others dropped)."""
    lo = np.array(window.lo)
    idx = np.floor((pts - lo) / eps)
    shape = np.array(window.shape(eps))
    ok = np.all((idx >= 0) & (idx < shape), axis=1)
    return idx[ok].astype(np.int64)


@dataclass(frozen=True)
class GridCover:
    window: Window
    eps: float
    hits: np.ndarray  # sorted unique flat indices, or unique index rows
    region: Optional[PolyDisc] = None

    @property
    def shape(self) -> tuple[int, ...]:
        return self.window.shape(self.eps)

    @property
    def flat(self) -> bool:
        return self.hits.ndim == 1

    @property
    def total(self) -> int:
        if self.region is not None:
            return int(self.valid_mask().sum())
        return math.prod(self.shape)

    @property
    def hit_count(self) -> int:
        return int(self.hits.shape[0])

    @property
    def coverage(self) -> float:
        return self.hit_count / self.total if self.total else 0.0

    def valid_mask(self) -> np.ndarray:
        grids = np.meshgrid(*[lo + (np.arange(m) + 0.5) * self.eps for lo, m in zip(self.window.lo, self.shape)],
                            indexing="ij")
        centres = np.column_stack([g.ravel() for g in grids])
        return self.region.contains(centres)

    def hit_rows(self) -> np.ndarray:
        if not self.flat:
            return self.hits
        return np.column_stack(np.unravel_index(self.hits, self.shape)) if self.hit_count else np.zeros((0, len(self.shape)), dtype=np.int64)

    def cell_measure(self) -> float:
        return self.hit_count * self.eps ** len(self.shape)

    def to_json(self) -> dict:
        return {"window": self.window.to_json(), "epsilon": self.eps, "hits": self.hit_count,
                "total": self.total, "coverage": self.coverage}


class CoverAccumulator:
    """Collects hit shards; :meth:`seal` dedups them into a :class:`GridCover`."""

    def __init__(self, window: Region, eps: float):
        if eps <= 0:
            raise ConfigError("eps must be positive")
        self.region = window if isinstance(window, PolyDisc) else None
        self.window = window.box if isinstance(window, PolyDisc) else window
        if eps > min(b - a for a, b in zip(self.window.lo, self.window.hi)) + 1e-12:
            raise ConfigError("eps exceeds the shortest window side")
        self.eps = float(eps)
        self._shape = self.window.shape(self.eps)
        self._flat = math.prod(self._shape) < _FLAT_LIMIT
        self._shards: list[np.ndarray] = []
        self._sealed: Optional[GridCover] = None

    def add(self, points) -> None:
        if self._sealed is not None:
            raise RuntimeError("accumulator already sealed")
        pts = _real_points(points)
        if pts.shape[0] == 0:
            return
        if pts.shape[1] != self.window.dim:
            raise DimensionMismatch(f"points of dimension {pts.shape[1]} for a {self.window.dim}-d window")
        if self.region is not None:
            pts = pts[self.region.contains(pts)]
        idx = cell_indices(pts, self.window, self.eps)
        if self._flat:
            idx = np.ravel_multi_index(tuple(idx.T), self._shape) if idx.shape[0] else np.zeros(0, np.int64)
            self._shards.append(np.unique(idx))
        else:
            self._shards.append(np.unique(idx, axis=0))

    def seal(self) -> GridCover:
        if self._sealed is None:
            if self._flat:
                hits = np.unique(np.concatenate(self._shards)) if self._shards else np.zeros(0, np.int64)
            else:
                hits = (np.unique(np.concatenate(self._shards), axis=0) if self._shards
                        else np.zeros((0, len(self._shape)), np.int64))
            cover = GridCover(self.window, self.eps, hits.astype(np.int64), self.region)
            if self.region is not None and cover.hit_count:
                # cells count only when their centre lies in the region
                valid = cover.valid_mask()
                flat = cover.hits if cover.flat else np.ravel_multi_index(tuple(cover.hits.T), self._shape)
                cover = GridCover(self.window, self.eps, cover.hits[valid[flat]], self.region)
            self._sealed = cover
            self._shards = []
        return self._sealed


def coverage(points, window: Region, eps: float) -> GridCover:
    acc = CoverAccumulator(window, eps)
    acc.add(points)
    return acc.seal()


def coverage_in_subspace(points, M: Subspace, window: Window, eps: float) -> GridCover:
    """Coverage in the orthonormal coordinates of M (realified when M is complex).

    ``points`` are ambient vectors (or a sample) already traced onto M.
    """
    pts = points.points if hasattr(points, "points") else np.asarray(points)
    pts = np.atleast_2d(pts) if np.size(pts) else np.zeros((0, M.ambient_dim))
    if pts.shape[1] != M.ambient_dim:
        raise DimensionMismatch("points do not live in M's ambient space")
    real_dim = M.dim * (2 if M.field == "C" or np.iscomplexobj(M.basis) else 1)
    if window.dim != real_dim:
        raise DimensionMismatch(f"window of dimension {window.dim} for a {real_dim}-d (real) subspace")
    coords = M.coordinates(pts) if pts.shape[0] else np.zeros((0, M.dim))
    if real_dim == M.dim:
        coords = np.real(coords)
    return coverage(coords, window, eps)


def merge(a: GridCover, b: GridCover) -> GridCover:
    if a.window != b.window or a.eps != b.eps or a.region != b.region:
        raise IncompatibleGrids("covers over different grids")
    if a.flat != b.flat:
        raise IncompatibleGrids("mixed hit representations")
    if a.flat:
        hits = np.union1d(a.hits, b.hits)
    else:
        hits = np.unique(np.concatenate([a.hits, b.hits]), axis=0)
    return GridCover(a.window, a.eps, hits, a.region)


@dataclass(frozen=True)
class ProductCover:
    """Cover of a point set that is a Cartesian product across axis groups.

    Each factor covers the window restricted to its axes; the hit set of the
    product is the product of the factor hit sets, so counts multiply.
    """

    factors: tuple[GridCover, ...]
    axes: tuple[tuple[int, ...], ...]

    @property
    def hit_count(self) -> int:
        return math.prod(f.hit_count for f in self.factors)

    @property
    def total(self) -> int:
        return math.prod(f.total for f in self.factors)

    @property
    def coverage(self) -> float:
        return math.prod(f.coverage for f in self.factors)

    @property
    def eps(self) -> float:
        return self.factors[0].eps

    def materialize(self) -> GridCover:
        """Explicit cover over the full window (small grids only)."""
        d = sum(len(a) for a in self.axes)
        lo, hi = [0.0] * d, [0.0] * d
        for f, ax in zip(self.factors, self.axes):
            for k, i in enumerate(ax):
                lo[i], hi[i] = f.window.lo[k], f.window.hi[k]
        window = Window(tuple(lo), tuple(hi))
        rows = [np.zeros((1, d), dtype=np.int64)]
        for f, ax in zip(self.factors, self.axes):
            fr = f.hit_rows()
            new = []
            for base in rows:
                rep = np.repeat(base, fr.shape[0], axis=0)
                rep[:, list(ax)] = np.tile(fr, (base.shape[0], 1))
                new.append(rep)
            rows = new
        allrows = np.concatenate(rows)
        hits = np.ravel_multi_index(tuple(allrows.T), window.shape(self.eps)) if allrows.shape[0] else np.zeros(0, np.int64)
        return GridCover(window, self.eps, np.unique(hits))

    def to_json(self) -> dict:
        return {"factors": [f.to_json() for f in self.factors], "axes": [list(a) for a in self.axes],
                "hits": self.hit_count, "total": self.total, "coverage": self.coverage}


Cover = Union[GridCover, ProductCover]


@dataclass(frozen=True)
class VerdictThresholds:
    dense: float = 0.9
    not_dense: float = 0.5
    plateau: float = 0.01


def verdict(trend: Sequence[float], th: VerdictThresholds = VerdictThresholds()) -> str:
    """Deterministic verdict from a coverage sequence."""
    if not trend:
        return INCONCLUSIVE
    last = trend[-1]
    if last >= th.dense:
        return DENSE
    # inclusive: a trace filling one half of a symmetric window sits at exactly 0.5
    if len(trend) >= 2 and trend[-1] - trend[-2] < th.plateau and last <= th.not_dense:
        return NOT_DENSE
    return INCONCLUSIVE


@dataclass
class CoverageReport:
    coverage: float
    epsilon: float
    schedule: list[int]
    trend: list[float]
    verdict: str
    budget: int = 0
    points: list[int] = field(default_factory=list)
    thresholds: VerdictThresholds = VerdictThresholds()
    monotone: bool = True
    window: Optional[dict] = None

    def to_json(self) -> dict:
        out = {
            "coverage": self.coverage,
            "epsilon": self.epsilon,
            "schedule": list(self.schedule),
            "trend": list(self.trend),
            "verdict": self.verdict,
            "budget": self.budget,
            "points": list(self.points),
            "thresholds": asdict(self.thresholds),
            "monotone": self.monotone,
        }
        if self.window is not None:
            out["window"] = self.window
        return out


def _to_cover(result, window, eps) -> tuple[Cover, int]:
    if isinstance(result, (GridCover, ProductCover)):
        return result, -1
    n = len(result) if hasattr(result, "__len__") else 0
    return coverage(result, window, eps), n


def density_trend(
    sampler: Callable[[int], object],
    window: Region,
    eps: float,
    schedule: Sequence[int],
    thresholds: VerdictThresholds = VerdictThresholds(),
) -> CoverageReport:
    """Run ``sampler(budget)`` along ``schedule`` and grade the coverage trend.

    The sampler may return points (array or sample) or a ready cover.  Plain
    grid covers are merged cumulatively, so the trend never decreases.
    """
    schedule = [int(b) for b in schedule]
    if len(schedule) < 3 or any(b >= c for b, c in zip(schedule, schedule[1:])):
        raise ConfigError("schedule must be strictly increasing with at least 3 entries")
    trend, counts = [], []
    prev: Optional[Cover] = None
    for b in schedule:
        cov, n = _to_cover(sampler(b), window, eps)
        if isinstance(cov, GridCover) and isinstance(prev, GridCover):
            cov = merge(prev, cov)
        prev = cov
        trend.append(cov.coverage)
        counts.append(n)
    monotone = all(x <= y for x, y in zip(trend, trend[1:]))
    return CoverageReport(
        coverage=trend[-1],
        epsilon=float(eps),
        schedule=schedule,
        trend=trend,
        verdict=verdict(trend, thresholds),
        budget=schedule[-1],
        points=counts,
        thresholds=thresholds,
        monotone=monotone,
        window=window.to_json(),
    )
