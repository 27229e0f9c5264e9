"""The Schrodinger x Schrodinger x wave trilinear resonance form.

    I = int_{[-pi,pi] x T^d}  u1 conj(u2) u3  dt dx,

with u1, u2 Schrodinger waves and u3 a half-wave.  Only frequency triples
with k1 - k2 + k3 = 0 contribute; each carries the time kernel T(Omega) at
the modulation Omega = -|k1|^2 + |k2|^2 +- |k3|.  The closed form is an
exact hash join over (k1, k3) pairs; the grid oracle integrates the product
field with Gauss-Legendre nodes in time (the integrand is not 2pi-periodic
when |k3| is irrational) and exact rectangle sums in space.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.fft as sfft

from .fitting import ExponentFit, fit_exponent
from .lattice import Annulus, FrequencySet, Shell, enumerate_region, \
    trilinear_example

TWO_PI = 2.0 * math.pi


class TrilinearError(ValueError):
    pass


@dataclass(frozen=True)
class TrilinearInput:
    phi1: FrequencySet
    phi2: FrequencySet
    phi3: FrequencySet
    wave_sign: int = +1

    def __post_init__(self):
        if not (self.phi1.dim == self.phi2.dim == self.phi3.dim):
            raise TrilinearError("dimension mismatch")
        if self.wave_sign not in (+1, -1):
            raise TrilinearError("wave_sign must be +1 or -1")


def time_kernel(omega):
    """T(Omega) = int_{-pi}^{pi} exp(i t Omega) dt, vectorized and even."""
    om = np.asarray(omega, dtype=np.float64)
    out = np.where(om == 0.0, TWO_PI,
                   2.0 * np.sin(np.pi * np.where(om == 0.0, 1.0, om))
                   / np.where(om == 0.0, 1.0, om))
    return out if out.shape else float(out)


def _pack(points, lo, hi):
    """Collision-free int64 key for lattice points in [lo, hi]^d."""
    span = int(hi - lo + 1)
    key = np.zeros(len(points), dtype=np.int64)
    for a in range(points.shape[1]):
        key = key * span + (points[:, a] - lo)
    return key


def trilinear_closed_form(inp: TrilinearInput,
                          max_pairs: int = 80_000_000) -> complex:
    """Exact resonance-sum evaluation of the trilinear form."""
    p1, p2, p3 = inp.phi1, inp.phi2, inp.phi3
    d = p1.dim
    if min(len(p1), len(p2), len(p3)) == 0:
        return 0.0 + 0.0j
    if len(p1) * len(p3) > max_pairs:
        raise TrilinearError("pair budget exceeded in closed form")
    allpts = np.concatenate([p1.points, p2.points, p3.points])
    lo, hi = int(allpts.min()) * 2, int(allpts.max()) * 2
    key2 = _pack(p2.points, lo, hi)
    order = np.argsort(key2)
    key2s = key2[order]
    # pairs (k1, k3), candidate k2 = k1 + k3
    n1, n3 = len(p1), len(p3)
    k1 = np.repeat(p1.points, n3, axis=0)
    k3 = np.tile(p3.points, (n1, 1))
    cand = _pack(k1 + k3, lo, hi)
    pos = np.searchsorted(key2s, cand)
    pos = np.clip(pos, 0, len(key2s) - 1)
    hit = key2s[pos] == cand
    if not np.any(hit):
        return 0.0 + 0.0j
    i2 = order[pos[hit]]
    a1 = np.repeat(p1.coeffs, n3)[hit]
    a3 = np.tile(p3.coeffs, n1)[hit]
    a2 = p2.coeffs[i2]
    m1 = (k1[hit].astype(np.int64) ** 2).sum(axis=1)
    m3 = (k3[hit].astype(np.int64) ** 2).sum(axis=1)
    m2 = (p2.points[i2].astype(np.int64) ** 2).sum(axis=1)
    ipart = -m1 + m2                       # exact integer part of Omega
    # Omega = ipart + sign*sqrt(m3); exactly zero iff sign*sqrt(m3) = -ipart
    root = np.sqrt(m3.astype(np.float64))
    omega = ipart + inp.wave_sign * root
    exact_zero = (ipart * inp.wave_sign <= 0) & (ipart * ipart == m3)
    tvals = np.where(exact_zero, TWO_PI, time_kernel(np.where(exact_zero, 1.0,
                                                              omega)))
    total = np.sum(a1 * np.conj(a2) * a3 * tvals)
    return complex(TWO_PI ** d * total)


def trilinear_grid_oracle(inp: TrilinearInput, m_x: int | None = None,
                          n_time: int | None = None) -> complex:
    """Quadrature oracle: Gauss-Legendre in t over [-pi, pi], exact rectangle
    sums in x.  Independent of the closed-form join."""
    p1, p2, p3 = inp.phi1, inp.phi2, inp.phi3
    d = p1.dim
    if min(len(p1), len(p2), len(p3)) == 0:
        return 0.0 + 0.0j
    # per-axis sizes: the product bandwidth on each axis separately, so
    # degenerate directions cost nothing
    need = [2 * sum(int(np.abs(p.points[:, a]).max()) for p in (p1, p2, p3))
            + 1 for a in range(d)]
    if m_x is None:
        sizes = need
    else:
        if m_x < max(need):
            raise TrilinearError(
                "aliasing: spatial grid below product bandwidth")
        sizes = [m_x] * d
    omega_max = (float(p1.sq_norms().max()) + float(p2.sq_norms().max())
                 + math.sqrt(float(p3.sq_norms().max())))
    if n_time is None:
        n_time = int(1.8 * omega_max) + 48
    nodes, weights = np.polynomial.legendre.leggauss(n_time)
    ts = np.pi * nodes
    ws = np.pi * weights

    def u_at(fset, sgn_sq, t):
        # sgn_sq: 'schro' -> exp(-i|k|^2 t); 'wave' -> exp(i sign |k| t)
        idx = tuple(np.mod(fset.points[:, a], sizes[a]) for a in range(d))
        m = fset.sq_norms().astype(np.float64)
        if sgn_sq == "schro":
            ph = np.exp(-1j * m * t)
        else:
            ph = np.exp(1j * inp.wave_sign * np.sqrt(m) * t)
        arr = np.zeros(tuple(sizes), dtype=np.complex128)
        arr[idx] = fset.coeffs * ph
        return sfft.fftn(arr)

    total = 0.0 + 0.0j
    for t, w in zip(ts, ws):
        prod = u_at(p1, "schro", t) * np.conj(u_at(p2, "schro", t)) \
            * u_at(p3, "wave", t)
        total += w * prod.mean()
    return complex(TWO_PI ** d * total)


# ---------------------------------------------------------------------------
# alpha sweep


GENERATORS = ("plane_triple", "random_shell", "random_annulus")


def _l2_torus(fset: FrequencySet) -> float:
    return TWO_PI ** (fset.dim / 2) * fset.coeff_l2()


def _random_coeffs(rng, n):
    return (rng.standard_normal(n) + 1j * rng.standard_normal(n)) / math.sqrt(2)


def _sweep_sets(generator, d, n, rng):
    if generator == "plane_triple":
        return trilinear_example(d, n), -1
    if generator == "random_shell":
        base = enumerate_region(Shell(n, 1.0), d)
    elif generator == "random_annulus":
        base = enumerate_region(Annulus(n), d)
    else:
        raise TrilinearError(f"unknown generator {generator!r}")
    sets = tuple(base.with_coeffs(_random_coeffs(rng, len(base)))
                 for _ in range(3))
    return sets, +1 if rng.integers(2) else -1


def trilinear_alpha_sweep(d: int, Ns, generator: str = "random_shell",
                          trials: int = 8, seed: int = 0,
                          max_pairs: int = 80_000_000):
    """Sup-over-trials ratio |I| / prod ||phi_j||_2 per N, log-log fitted.

    Returns (ExponentFit, rows); rows are (d, N, trial, ratio, generator,
    seed) tuples, one per trial.
    """
    ns = [int(n) for n in Ns]
    if len(ns) < 3 or sorted(set(ns)) != ns:
        raise TrilinearError("need >= 3 increasing distinct N values")
    if generator == "plane_triple":
        trials = 1
    rows = []
    sup_points = []
    for n in ns:
        best = 0.0
        for trial in range(trials):
            rng = np.random.default_rng((seed, trial, n))
            (s1, s2, s3), sign = _sweep_sets(generator, d, n, rng)
            inp = TrilinearInput(s1, s2, s3, wave_sign=sign)
            val = abs(trilinear_closed_form(inp, max_pairs=max_pairs))
            denom = _l2_torus(s1) * _l2_torus(s2) * _l2_torus(s3)
            ratio = val / denom
            rows.append((d, n, trial, ratio, generator, seed))
            best = max(best, ratio)
        sup_points.append((n, best))
    return fit_exponent(sup_points), rows
