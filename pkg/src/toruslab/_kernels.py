"""Hot inner loops: resonance pair counting, Diophantine brute force, and the
bilinear Duhamel convolution.

Each kernel exists twice: a numba ``@njit`` version and a pure-numpy fallback
(selected by ``TORUSLAB_NO_NUMBA=1``, see :mod:`toruslab.accel`).  The two are
required to produce identical results; ``tests/test_kernels.py`` and the
benchmark script compare them directly.

Counting layout: a pair (k_i, k_j) is mapped to the collision-free integer

    idx = (tail(k_i) + tail(k_j)) * Mr + (m_i + m_j - 2*m_min)

where tail() flattens the coordinates 2..d against strides sized for
coordinate *sums* and m = |k|^2, so idx identifies the resonance class
(k_i + k_j, m_i + m_j) exactly.  The first coordinate shards the work.
"""

from __future__ import annotations

import numpy as np

from .accel import numba_available


class BudgetError(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# pair-key preparation


def _pair_keys(points):
    """Per-point combined key, first-coordinate value, and dense-size info.

    Returns (u0, skey, dense_size, pair_cap_per_shard_fn) where
    skey[i] = tail(k_i)*Mr + (m_i - m_min); idx for a pair is skey_i + skey_j.
    """
    pts = np.asarray(points, dtype=np.int64)
    n, d = pts.shape
    lo = pts.min(axis=0)
    w = pts.max(axis=0) - lo
    u = pts - lo
    m = (pts ** 2).sum(axis=1)
    m_min = m.min()
    mr = int(2 * (m.max() - m_min) + 1)
    tail = np.zeros(n, dtype=np.int64)
    stride = 1
    for axis in range(d - 1, 0, -1):
        tail += u[:, axis] * stride
        stride *= int(2 * w[axis] + 1)
    skey = tail * mr + (m - m_min)
    dense = stride * mr
    return u[:, 0].astype(np.int64), skey, int(dense), int(w[0])


def _shard_buckets(u0, n_vals):
    order = np.argsort(u0, kind="stable")
    counts = np.bincount(u0, minlength=n_vals)
    ends = np.cumsum(counts)
    starts = ends - counts
    return order, starts.astype(np.int64), ends.astype(np.int64), counts


def pair_budget(n_points: int) -> int:
    return n_points * n_points


# ---------------------------------------------------------------------------
# exact integer quadruple count:  sum over (s, m) of r(s, m)^2


def _count_numpy(points) -> int:
    u0, skey, dense, w0 = _pair_keys(points)
    n = len(skey)
    order, starts, ends, counts = _shard_buckets(u0, w0 + 1)
    key_sorted = skey[order]
    total = 0
    for s1 in range(0, 2 * w0 + 1):
        chunks = []
        a_lo, a_hi = max(0, s1 - w0), min(w0, s1)
        for a in range(a_lo, a_hi + 1):
            b = s1 - a
            if counts[a] == 0 or counts[b] == 0:
                continue
            ka = key_sorted[starts[a]:ends[a]]
            kb = key_sorted[starts[b]:ends[b]]
            chunks.append(np.add.outer(ka, kb).ravel())
        if not chunks:
            continue
        allk = np.sort(np.concatenate(chunks))
        edge = np.flatnonzero(np.diff(allk)) + 1
        runs = np.diff(np.concatenate(([0], edge, [len(allk)]))).astype(np.int64)
        total += int(np.dot(runs, runs))
    return total


_NUMBA_COMPILED = {}


def _get_count_kernel():
    if "count" not in _NUMBA_COMPILED:
        from numba import njit

        @njit(cache=True)
        def kern(key_sorted, starts, ends, counts, w0, dense, touched_cap):
            acc = np.zeros(dense, dtype=np.int64)
            touched = np.empty(touched_cap, dtype=np.int64)
            total = np.int64(0)
            for s1 in range(0, 2 * w0 + 1):
                nt = 0
                a_lo = max(0, s1 - w0)
                a_hi = min(w0, s1)
                for a in range(a_lo, a_hi + 1):
                    b = s1 - a
                    if counts[a] == 0 or counts[b] == 0:
                        continue
                    for i in range(starts[a], ends[a]):
                        ki = key_sorted[i]
                        for j in range(starts[b], ends[b]):
                            idx = ki + key_sorted[j]
                            acc[idx] += 1
                            touched[nt] = idx
                            nt += 1
                for q in range(nt):
                    ix = touched[q]
                    v = acc[ix]
                    if v > 0:
                        total += v * v
                        acc[ix] = 0
            return total

        _NUMBA_COMPILED["count"] = kern
    return _NUMBA_COMPILED["count"]


def resonance_quadruple_count(points, max_pairs: int = 400_000_000) -> int:
    """Exact #{(k1,k2,k3,k4) in S^4 : k1+k2=k3+k4, |k1|^2+|k2|^2=|k3|^2+|k4|^2}."""
    pts = np.asarray(points, dtype=np.int64)
    n = len(pts)
    if n == 0:
        return 0
    if n * n > max_pairs:
        raise BudgetError(
            f"counting budget exceeded: {n*n} pairs > {max_pairs}")
    u0, skey, dense, w0 = _pair_keys(pts)
    if dense > 600_000_000:
        raise BudgetError(f"counting budget exceeded: dense table {dense}")
    if not numba_available():
        return _count_numpy(pts)
    order, starts, ends, counts = _shard_buckets(u0, w0 + 1)
    key_sorted = np.ascontiguousarray(skey[order])
    shard_pairs = np.convolve(counts, counts)
    cap = int(shard_pairs.max()) if len(shard_pairs) else 1
    kern = _get_count_kernel()
    return int(kern(key_sorted, starts, ends, counts.astype(np.int64),
                    w0, dense, max(cap, 1)))


def resonance_weighted_sum(points, coeffs) -> float:
    """sum over resonance classes |sum_{k1+k2=s, m1+m2=m} a1*a2|^2 (small sets)."""
    pts = np.asarray(points, dtype=np.int64)
    a = np.asarray(coeffs, dtype=np.complex128)
    n = len(pts)
    if n == 0:
        return 0.0
    u0, skey, dense, _ = _pair_keys(pts)
    # skey omits the first coordinate (the count kernel shards on it), so
    # fold it back in; pair sums of skey stay below 2*dense
    full = u0 * np.int64(2 * dense) + skey
    keys = np.add.outer(full, full).ravel()
    vals = np.multiply.outer(a, a).ravel()
    uniq, inv = np.unique(keys, return_inverse=True)
    agg = np.bincount(inv, weights=vals.real, minlength=len(uniq)) \
        + 1j * np.bincount(inv, weights=vals.imag, minlength=len(uniq))
    return float((np.abs(agg) ** 2).sum())


# ---------------------------------------------------------------------------
# Diophantine brute force (oracle; tiny sets only)


def _dio_brute_numpy(pts, member, lo, dims):
    n = len(pts)
    strides = np.ones(len(dims), dtype=np.int64)
    for a in range(len(dims) - 2, -1, -1):
        strides[a] = strides[a + 1] * dims[a + 1]
    m = (pts ** 2).sum(axis=1)
    total = 0
    for ix in range(n):
        x = pts[ix]
        # w = x + y - z over all (y, z)
        w = x[None, None, :] + pts[:, None, :] - pts[None, :, :]
        wrel = w - lo
        inside = np.all((wrel >= 0) & (wrel < dims), axis=2)
        widx = (wrel.clip(0, dims - 1) * strides).sum(axis=2)
        ok = inside & member[widx]
        wm = (w ** 2).sum(axis=2)
        quad = (m[ix] + m[:, None]) == (m[None, :] + wm)
        total += int(np.count_nonzero(ok & quad))
    return total


def _get_dio_kernel():
    if "dio" not in _NUMBA_COMPILED:
        from numba import njit

        @njit(cache=True)
        def kern(pts, m, member, lo, dims, strides):
            n = pts.shape[0]
            d = pts.shape[1]
            total = np.int64(0)
            for ix in range(n):
                for iy in range(n):
                    msum = m[ix] + m[iy]
                    for iz in range(n):
                        widx = np.int64(0)
                        wm = np.int64(0)
                        ok = True
                        for a in range(d):
                            w = pts[ix, a] + pts[iy, a] - pts[iz, a]
                            rel = w - lo[a]
                            if rel < 0 or rel >= dims[a]:
                                ok = False
                                break
                            widx += rel * strides[a]
                            wm += w * w
                        if ok and member[widx] and msum == m[iz] + wm:
                            total += 1
            return total

        _NUMBA_COMPILED["dio"] = kern
    return _NUMBA_COMPILED["dio"]


def dio_bruteforce_count(points, max_triples: int = 50_000_000) -> int:
    """Exact solution count of the paired linear/quadratic system by scanning
    (x, y, z) and solving for w; oracle for small constraint sets."""
    pts = np.asarray(points, dtype=np.int64)
    n = len(pts)
    if n == 0:
        return 0
    if n ** 3 > max_triples:
        raise BudgetError(f"budget exceeded: {n**3} triples > {max_triples}")
    lo = 2 * pts.min(axis=0) - pts.max(axis=0)   # range of x + y - z
    hi = 2 * pts.max(axis=0) - pts.min(axis=0)
    dims = (hi - lo + 1).astype(np.int64)
    strides = np.ones(len(dims), dtype=np.int64)
    for a in range(len(dims) - 2, -1, -1):
        strides[a] = strides[a + 1] * dims[a + 1]
    member = np.zeros(int(dims.prod()), dtype=np.bool_)
    member[((pts - lo) * strides).sum(axis=1)] = True
    if not numba_available():
        return _dio_brute_numpy(pts, member, lo, dims)
    m = (pts ** 2).sum(axis=1)
    kern = _get_dio_kernel()
    return int(kern(pts, m, member, lo, dims.astype(np.int64), strides))


# ---------------------------------------------------------------------------
# Duhamel bilinear convolution (first Picard iterate)
#
# acc[lin(k' + k'')] += f(k') g(k'') * T[group(|k''|^2), k'.k''] where the
# table T carries the exact time integral 0.5*(E(th+) + E(th-)).


def _get_picard_kernels():
    if "picard" not in _NUMBA_COMPILED:
        from numba import njit

        @njit(cache=True)
        def kern_gen(fp, fc, gp, gc, ggrp, lin_f, lin_g, table, dmin, acc):
            nf = fp.shape[0]
            for j in range(gp.shape[0]):
                row = table[ggrp[j]]
                cg = gc[j]
                oj = lin_g[j]
                g0, g1, g2, g3 = gp[j, 0], gp[j, 1], gp[j, 2], gp[j, 3]
                for i in range(nf):
                    dd = fp[i, 0] * g0 + fp[i, 1] * g1 \
                        + fp[i, 2] * g2 + fp[i, 3] * g3
                    acc[oj + lin_f[i]] += (fc[i] * cg) * row[dd - dmin]

        @njit(cache=True)
        def kern_const(fp, gp, ggrp, lin_f, lin_g, table, dmin, acc):
            nf = fp.shape[0]
            for j in range(gp.shape[0]):
                row = table[ggrp[j]]
                oj = lin_g[j]
                g0, g1, g2, g3 = gp[j, 0], gp[j, 1], gp[j, 2], gp[j, 3]
                for i in range(nf):
                    dd = fp[i, 0] * g0 + fp[i, 1] * g1 \
                        + fp[i, 2] * g2 + fp[i, 3] * g3
                    acc[oj + lin_f[i]] += row[dd - dmin]

        _NUMBA_COMPILED["picard"] = (kern_gen, kern_const)
    return _NUMBA_COMPILED["picard"]


def _picard_numpy(fp, fc, gp, gc, ggrp, lin_f, lin_g, table, dmin, acc,
                  const_coeffs):
    for j in range(gp.shape[0]):
        dd = fp @ gp[j]
        vals = table[ggrp[j]][dd - dmin]
        if not const_coeffs:
            vals = vals * (fc * gc[j])
        np.add.at(acc, lin_g[j] + lin_f, vals)


def picard_accumulate(fp, fc, gp, gc, ggrp, lin_f, lin_g, table, dmin, acc):
    """Accumulate f(k')g(k'')*T into the dense output grid ``acc`` (flat)."""
    fp4 = np.zeros((fp.shape[0], 4), dtype=np.int64)
    fp4[:, :fp.shape[1]] = fp
    gp4 = np.zeros((gp.shape[0], 4), dtype=np.int64)
    gp4[:, :gp.shape[1]] = gp
    const = (len(fc) > 0 and np.all(fc == fc[0])
             and len(gc) > 0 and np.all(gc == gc[0]))
    if numba_available():
        kern_gen, kern_const = _get_picard_kernels()
        if const:
            kern_const(fp4, gp4, ggrp, lin_f, lin_g, table, dmin, acc)
        else:
            kern_gen(fp4, fc, gp4, gc, ggrp, lin_f, lin_g, table, dmin, acc)
    else:
        _picard_numpy(fp4, fc, gp4, gc, ggrp, lin_f, lin_g, table, dmin, acc,
                      const)
    if const:
        acc *= fc[0] * gc[0]
