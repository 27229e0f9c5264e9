"""Integer frequency geometry: balls, annuli, shells, blocks and example sets.

All membership tests on shells/balls are done with exact rational bounds on
|k|^2 so that a lattice point is never misclassified by float rounding at a
boundary radius.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

MAX_DIM = 4
_ENUM_CELL_CAP = 300_000_000  # bounding-box cells


class LatticeError(ValueError):
    pass


# ---------------------------------------------------------------------------
# regions


@dataclass(frozen=True)
class Ball:
    center: tuple = (0,)
    radius: float = 1.0

    def __post_init__(self):
        if self.radius <= 0:
            raise LatticeError("radius must be positive")


@dataclass(frozen=True)
class Annulus:
    """Dyadic annulus |k| ~ N: N/2 < |k| <= N for N >= 2, |k| <= 1 for N = 1."""

    N: int = 1

    def __post_init__(self):
        if self.N < 1 or (self.N & (self.N - 1)) != 0:
            raise LatticeError("annulus parameter must be a dyadic integer >= 1")


@dataclass(frozen=True)
class Shell:
    """c_star - w <= |k| <= c_star + w."""

    c_star: float
    half_width: float = 1.0
    strict: bool = False

    def __post_init__(self):
        if self.half_width <= 0:
            raise LatticeError("half_width must be positive")
        if self.strict and self.c_star < self.half_width:
            lo = Fraction(self.c_star) - Fraction(self.half_width)
            hi = Fraction(self.c_star) + Fraction(self.half_width)
            if hi * hi < 0 or hi < 0:  # empty only if upper bound negative
                raise LatticeError("empty shell")


@dataclass(frozen=True)
class Box:
    """Axis-aligned box of closed integer intervals, one (lo, hi) per axis."""

    intervals: tuple

    def __post_init__(self):
        for lo, hi in self.intervals:
            if lo > hi:
                raise LatticeError("empty box interval")


@dataclass(frozen=True)
class Intersection:
    regions: tuple


FrequencyRegion = Ball | Annulus | Shell | Box | Intersection


def _sq_bounds(region, dim):
    """Exact rational bounds (lo, hi) on |k|^2, or None if not radial."""
    if isinstance(region, Annulus):
        N = region.N
        if N == 1:
            return Fraction(0), Fraction(1)
        return Fraction(N * N, 4), Fraction(N * N)  # exclusive lower handled by caller
    if isinstance(region, Shell):
        c = Fraction(region.c_star)
        w = Fraction(region.half_width)
        lo = max(c - w, Fraction(0))
        return lo * lo, (c + w) * (c + w)
    return None


def _bounding_box(region, dim):
    if isinstance(region, Box):
        if len(region.intervals) != dim:
            raise LatticeError("box dimension mismatch")
        return [tuple(iv) for iv in region.intervals]
    if isinstance(region, Ball):
        c = region.center if len(region.center) == dim else (0,) * dim
        r = region.radius
        return [(math.floor(c[i] - r), math.ceil(c[i] + r)) for i in range(dim)]
    if isinstance(region, Annulus):
        return [(-region.N, region.N)] * dim
    if isinstance(region, Shell):
        hi = math.ceil(region.c_star + region.half_width)
        return [(-hi, hi)] * dim
    if isinstance(region, Intersection):
        boxes = [_bounding_box(r, dim) for r in region.regions]
        out = []
        for axis in range(dim):
            lo = max(b[axis][0] for b in boxes)
            hi = min(b[axis][1] for b in boxes)
            if lo > hi:
                return None
            out.append((lo, hi))
        return out
    raise LatticeError(f"unbounded enumeration: {type(region).__name__}")


def _member_mask(points, region, dim):
    """Boolean mask of region membership; points is an (n, dim) int array."""
    if isinstance(region, Box):
        mask = np.ones(len(points), dtype=bool)
        for axis, (lo, hi) in enumerate(region.intervals):
            mask &= (points[:, axis] >= lo) & (points[:, axis] <= hi)
        return mask
    if isinstance(region, Intersection):
        mask = np.ones(len(points), dtype=bool)
        for r in region.regions:
            mask &= _member_mask(points, r, dim)
        return mask
    if isinstance(region, Ball):
        c = region.center if len(region.center) == dim else (0,) * dim
        cf = [Fraction(x) for x in c]
        r2 = Fraction(region.radius) ** 2
        if all(x.denominator == 1 for x in cf) and r2.denominator == 1:
            ci = np.array([int(x) for x in cf], dtype=np.int64)
            sq = ((points - ci) ** 2).sum(axis=1)
            return sq <= int(r2)
        # rational center/radius: clear denominators once, stay exact
        den = math.lcm(*[x.denominator for x in cf])
        ci = np.array([int(x * den) for x in cf], dtype=np.int64)
        sq = ((points * den - ci) ** 2).sum(axis=1)
        bound = r2 * den * den
        return sq * bound.denominator <= bound.numerator
    sq = (points.astype(np.int64) ** 2).sum(axis=1)
    if isinstance(region, Annulus):
        N = region.N
        if N == 1:
            return sq <= 1
        # N/2 < |k| <= N, exact on |k|^2: N^2/4 < sq <= N^2
        return (4 * sq > N * N) & (sq <= N * N)
    if isinstance(region, Shell):
        lo, hi = _sq_bounds(region, dim)
        m_min = math.ceil(lo) if lo.denominator > 1 else int(lo)
        m_max = math.floor(hi) if hi.denominator > 1 else int(hi)
        return (sq >= m_min) & (sq <= m_max)
    raise LatticeError(f"unsupported region {type(region).__name__}")


# ---------------------------------------------------------------------------
# frequency sets


@dataclass(frozen=True)
class FrequencySet:
    """Finite set of integer frequencies with complex coefficients.

    ``points`` is an (n, dim) int64 array in lexicographic order when built
    by :func:`enumerate_region`; ``coeffs`` is the parallel complex array.
    """

    dim: int
    points: np.ndarray
    coeffs: np.ndarray

    def __post_init__(self):
        pts = np.ascontiguousarray(np.atleast_2d(self.points), dtype=np.int64)
        cfs = np.ascontiguousarray(self.coeffs, dtype=np.complex128)
        if pts.shape[0] != cfs.shape[0]:
            raise LatticeError("points/coeffs length mismatch")
        if pts.shape[0] and pts.shape[1] != self.dim:
            raise LatticeError("point dimension mismatch")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "coeffs", cfs)

    def __len__(self):
        return self.points.shape[0]

    @property
    def k_max(self) -> int:
        if len(self) == 0:
            return 0
        return int(np.abs(self.points).max())

    def sq_norms(self) -> np.ndarray:
        """|k|^2 per point, exact integers."""
        return (self.points.astype(np.int64) ** 2).sum(axis=1)

    def coeff_l2(self) -> float:
        return float(np.sqrt((np.abs(self.coeffs) ** 2).sum()))

    def with_coeffs(self, coeffs) -> "FrequencySet":
        return FrequencySet(self.dim, self.points, np.asarray(coeffs))

    def translated(self, v) -> "FrequencySet":
        v = np.asarray(v, dtype=np.int64)
        return FrequencySet(self.dim, self.points + v, self.coeffs)

    def check_distinct(self):
        if len(self) != len(np.unique(self.points, axis=0)):
            raise LatticeError("points not pairwise distinct")


def frequency_set(points, coeffs=None, dim=None) -> FrequencySet:
    pts = np.atleast_2d(np.asarray(points, dtype=np.int64))
    d = dim if dim is not None else pts.shape[1]
    if coeffs is None:
        coeffs = np.ones(pts.shape[0], dtype=np.complex128)
    fs = FrequencySet(d, pts, coeffs)
    fs.check_distinct()
    return fs


def enumerate_region(region: FrequencyRegion, dim: int) -> FrequencySet:
    """All integer points of the region with unit coefficients, lex order."""
    if dim not in range(1, MAX_DIM + 1):
        raise LatticeError(f"dim must be in 1..{MAX_DIM}")
    box = _bounding_box(region, dim)
    if box is None:
        return FrequencySet(dim, np.empty((0, dim), dtype=np.int64),
                            np.empty(0, dtype=np.complex128))
    cells = 1
    for lo, hi in box:
        cells *= hi - lo + 1
    if cells > _ENUM_CELL_CAP:
        raise LatticeError(f"unbounded enumeration: bounding box has {cells} cells")
    axes = [np.arange(lo, hi + 1, dtype=np.int64) for lo, hi in box]
    grids = np.meshgrid(*axes, indexing="ij")
    pts = np.stack([g.ravel() for g in grids], axis=1)
    pts = pts[_member_mask(pts, region, dim)]
    return FrequencySet(dim, pts, np.ones(len(pts), dtype=np.complex128))


# ---------------------------------------------------------------------------
# block partitions


@dataclass(frozen=True)
class BlockPartition:
    parent: FrequencySet
    block_side: int
    block_ids: np.ndarray       # (n_blocks, dim) floor-div indices
    members: tuple              # tuple of index arrays into parent.points

    def n_blocks(self) -> int:
        return len(self.members)


def partition_blocks(fset: FrequencySet, block_side: int) -> BlockPartition:
    """Partition into axis-aligned cubes of side block_side (floor division)."""
    if block_side < 1:
        raise LatticeError("block_side must be >= 1")
    idx = np.floor_divide(fset.points, block_side)
    uniq, inverse = np.unique(idx, axis=0, return_inverse=True)
    members = tuple(np.flatnonzero(inverse == b) for b in range(len(uniq)))
    return BlockPartition(fset, block_side, uniq, members)


# ---------------------------------------------------------------------------
# example sets from the construction zoo


def slab_example(d: int, N: int) -> FrequencySet:
    """Unit data on {(N, kbar) : 1 <= kbar_j <= floor(sqrt(N/d))}."""
    if d < 2:
        raise LatticeError("slab example needs a transverse direction (d >= 2)")
    if N < 4:
        raise LatticeError("N must be >= 4")
    side = math.isqrt(N // d)
    axes = [np.arange(1, side + 1, dtype=np.int64)] * (d - 1)
    grids = np.meshgrid(*axes, indexing="ij")
    kbar = np.stack([g.ravel() for g in grids], axis=1)
    pts = np.concatenate(
        [np.full((len(kbar), 1), N, dtype=np.int64), kbar], axis=1
    )
    return FrequencySet(d, pts, np.ones(len(pts), dtype=np.complex128))


def trilinear_example(d: int, N: int):
    """The resonant plane-wave triple (N,0,..), (-N-1,0,..), (-2N-1,0,..)."""
    if d < 1 or N < 1:
        raise LatticeError("need d >= 1, N >= 1")

    def single(k1):
        p = np.zeros((1, d), dtype=np.int64)
        p[0, 0] = k1
        return FrequencySet(d, p, np.ones(1, dtype=np.complex128))

    return single(N), single(-N - 1), single(-2 * N - 1)


# ---------------------------------------------------------------------------
# serialization: header "dim d count n", then "k1 ... kd re im" per line


def dumps_frequency_set(fset: FrequencySet) -> str:
    lines = [f"dim {fset.dim} count {len(fset)}"]
    for p, c in zip(fset.points, fset.coeffs):
        ks = " ".join(str(int(x)) for x in p)
        lines.append(f"{ks} {float(c.real)!r} {float(c.imag)!r}")
    return "\n".join(lines) + "\n"


def loads_frequency_set(text: str) -> FrequencySet:
    lines = [ln for ln in text.strip().splitlines() if ln.strip()]
    head = lines[0].split()
    if head[0] != "dim" or head[2] != "count":
        raise LatticeError("bad frequency-set header")
    dim, count = int(head[1]), int(head[3])
    if len(lines) - 1 != count:
        raise LatticeError("frequency-set line count mismatch")
    pts = np.empty((count, dim), dtype=np.int64)
    cfs = np.empty(count, dtype=np.complex128)
    for i, ln in enumerate(lines[1:]):
        parts = ln.split()
        pts[i] = [int(x) for x in parts[:dim]]
        cfs[i] = complex(float(parts[dim]), float(parts[dim + 1]))
    return FrequencySet(dim, pts, cfs)


def save_frequency_set(fset: FrequencySet, path):
    with open(path, "w") as fh:
        fh.write(dumps_frequency_set(fset))


def load_frequency_set(path) -> FrequencySet:
    with open(path) as fh:
        return loads_frequency_set(fh.read())
