"""Counting solutions of the quadruple system in Z^3.

The system asks for vectors x, y, z, w in a constrained subset of Z^3 with

    x + y = z + w    (three linear equations)
    |x|^2 + |y|^2 = |z|^2 + |w|^2,

counted over ordered tuples.  Three independent methods must agree exactly:
nested brute force, hash aggregation over ordered pairs (sum Sigma r(s,m)^2),
and the integerized fourth power of the L^4 counting norm.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from ._kernels import BudgetError, dio_bruteforce_count, \
    resonance_quadruple_count
from .fields import l4_norm_by_counting
from .fitting import ExponentFit, fit_exponent
from .lattice import FrequencySet, frequency_set

TWO_PI = 2.0 * math.pi


class DioError(ValueError):
    pass


@dataclass(frozen=True)
class DioQuery:
    """Constraint for each of the four vectors; d is fixed to 3."""
    mode: str                     # 'box' (coords in [1, N]) or 'shell'
    N: int
    delta: int = 10               # shell width; lower bound is N - delta

    def __post_init__(self):
        if self.mode not in ("box", "shell"):
            raise DioError(f"unknown constraint mode {self.mode!r}")
        if self.N < 1:
            raise DioError("N >= 1 required")
        if self.mode == "shell" and self.delta < 0:
            raise DioError("delta >= 0 required")

    def lattice_points(self) -> np.ndarray:
        """All admissible vectors, lexicographic order, shape (n, 3)."""
        n = self.N
        if self.mode == "box":
            ax = np.arange(1, n + 1)
            grid = np.meshgrid(ax, ax, ax, indexing="ij")
            return np.stack([g.ravel() for g in grid], axis=1).astype(np.int64)
        lo = max(n - self.delta, 0)
        ax = np.arange(-n, n + 1)
        grid = np.meshgrid(ax, ax, ax, indexing="ij")
        pts = np.stack([g.ravel() for g in grid], axis=1).astype(np.int64)
        m = (pts * pts).sum(axis=1)
        keep = (m >= lo * lo) & (m <= n * n)
        return pts[keep]

    def frequency_set(self) -> FrequencySet:
        pts = self.lattice_points()
        return frequency_set(pts, np.ones(len(pts)))


@dataclass(frozen=True)
class DioCount:
    query: DioQuery
    count: int
    method: str
    seconds: float

    def csv_row(self) -> str:
        delta = self.query.delta if self.query.mode == "shell" else 0
        return (f"{self.query.N},{delta},{self.count},{self.method},"
                f"{self.seconds:.6f}")


CSV_HEADER = "N,delta,count,method,seconds"


def count_bruteforce(q: DioQuery, max_triples: float = 5e7) -> DioCount:
    """Exact count by enumerating (x, y, z) and solving for w."""
    t0 = time.perf_counter()
    pts = q.lattice_points()
    total = dio_bruteforce_count(pts, max_triples=max_triples)
    return DioCount(q, total, "bruteforce", time.perf_counter() - t0)


def count_pairhash(q: DioQuery, max_pairs: float = 4e8) -> DioCount:
    """Exact count as Sigma_{s,m} r(s,m)^2 over ordered pairs."""
    t0 = time.perf_counter()
    pts = q.lattice_points()
    total = resonance_quadruple_count(pts, max_pairs=max_pairs)
    return DioCount(q, total, "pairhash", time.perf_counter() - t0)


def count_l4(q: DioQuery, max_pairs: float = 4e8) -> DioCount:
    """(2pi)^{-4} ||u||_4^4 for the all-ones exponential sum, integerized."""
    t0 = time.perf_counter()
    fset = q.frequency_set()
    norm, _ = l4_norm_by_counting(fset, max_pairs=max_pairs)
    total = round(norm ** 4 / TWO_PI ** 4)
    return DioCount(q, int(total), "l4norm", time.perf_counter() - t0)


def triple_oracle(q: DioQuery, max_size: int = 200):
    """All three counting paths on one query; raises on disagreement."""
    size = len(q.lattice_points())
    if size > max_size:
        raise BudgetError(f"constrained set size {size} exceeds {max_size}")
    counts = (count_bruteforce(q), count_pairhash(q), count_l4(q))
    vals = {c.count for c in counts}
    if len(vals) != 1:
        raise DioError(f"oracle disagreement on {q}: "
                       + ", ".join(f"{c.method}={c.count}" for c in counts))
    return counts


def dio_exponent_sweep(Ns, delta: int = 2, max_pairs: float = 4e8):
    """Pairhash counts across Ns with slope and trivial-floor assertions.

    Returns (ExponentFit, counts).  Slope must land in [3, 5]; every count
    must be at least |S|^2 (the x=z, y=w solutions).
    """
    ns = [int(n) for n in Ns]
    if sorted(set(ns)) != ns or len(ns) < 3:
        raise DioError("Ns distinct")
    counts = []
    for n in ns:
        q = DioQuery("shell", n, delta)
        size = len(q.lattice_points())
        if size * size > max_pairs:
            raise BudgetError(f"pair budget exceeded at N={n} "
                              f"({size}^2 pairs)")
        c = count_pairhash(q, max_pairs=max_pairs)
        if c.count < size * size:
            raise DioError(f"count below trivial floor at N={n}")
        counts.append(c)
    fit = fit_exponent([(c.query.N, c.count) for c in counts])
    if not 3.0 <= fit.slope <= 5.0:
        raise DioError(f"sweep slope {fit.slope:.3f} outside [3, 5]")
    return fit, counts
