"""Numba-compiled backend.

Most kernels are the numpy_impl sources compiled verbatim with @njit.
The evaluation drivers are re-written here with prange so per-source
shortest-path runs spread over threads; each parallel chunk owns its
scratch arrays and writes per-source slots, so results are identical to
the sequential backend bit for bit.
"""

import numpy as np
from numba import njit, prange

from . import numpy_impl as _src

INF = np.inf
KEY_SENTINEL = _src.KEY_SENTINEL

_jit = njit(cache=True)

fst_build = _jit(_src.fst_build)
fst_split = _jit(_src.fst_split)
fst_components = _jit(_src.fst_components)
subtree_min_point = _jit(_src.subtree_min_point)
theta_sweep = _jit(_src.theta_sweep)
wspd_pairs = _jit(_src.wspd_pairs)

dijkstra_core = _jit(_src.dijkstra_core)
_euclid = _jit(_src._euclid)

_lower_bound = _jit(_src._lower_bound)
_upper_bound = _jit(_src._upper_bound)
_seg_min = _jit(_src._seg_min)


# Helper-calling kernels are restated here so their call targets resolve
# to the compiled versions (numba binds globals of the defining module).


@njit(cache=True)
def sssp_dist(indptr, indices, weights, src):
    n = indptr.shape[0] - 1
    dist = np.empty(n)
    hkey = np.empty(indices.shape[0] + 1)
    hid = np.empty(indices.shape[0] + 1, np.int64)
    dijkstra_core(indptr, indices, weights, src, dist, hkey, hid)
    return dist


@njit(cache=True, parallel=True)
def asf_exact_accum(indptr, indices, weights, coords):
    n = indptr.shape[0] - 1
    per_sum = np.zeros(n)
    per_max = np.zeros(n)
    per_reach = np.zeros(n, np.int64)
    nchunk = 8
    for chunk in prange(nchunk):
        dist = np.empty(n)
        hkey = np.empty(indices.shape[0] + 1)
        hid = np.empty(indices.shape[0] + 1, np.int64)
        for src in range(chunk, n, nchunk):
            dijkstra_core(indptr, indices, weights, src, dist, hkey, hid)
            s = 0.0
            mx = 0.0
            reach = 0
            for w in range(src + 1, n):
                dg = dist[w]
                if dg < INF:
                    reach += 1
                    r = dg / _euclid(coords, src, w)
                    s += r
                    if r > mx:
                        mx = r
            per_sum[src] = s
            per_max[src] = mx
            per_reach[src] = reach
    return per_sum, per_max, per_reach


@njit(cache=True, parallel=True)
def pairs_ratios(indptr, indices, weights, coords, sources, tgt_flat, tgt_offsets):
    n = indptr.shape[0] - 1
    m = tgt_flat.shape[0]
    out = np.empty(m)
    ns = sources.shape[0]
    nchunk = 8
    for chunk in prange(nchunk):
        dist = np.empty(n)
        hkey = np.empty(indices.shape[0] + 1)
        hid = np.empty(indices.shape[0] + 1, np.int64)
        for si in range(chunk, ns, nchunk):
            src = sources[si]
            dijkstra_core(indptr, indices, weights, src, dist, hkey, hid)
            for t in range(tgt_offsets[si], tgt_offsets[si + 1]):
                w = tgt_flat[t]
                out[t] = dist[w] / _euclid(coords, src, w)
    return out


@njit(cache=True, parallel=True)
def hist_counts(indptr, indices, weights, coords, edges):
    n = indptr.shape[0] - 1
    nb = edges.shape[0] - 1
    out = np.zeros((n, nb), np.int64)
    nchunk = 8
    for chunk in prange(nchunk):
        dist = np.empty(n)
        hkey = np.empty(indices.shape[0] + 1)
        hid = np.empty(indices.shape[0] + 1, np.int64)
        for src in range(chunk, n, nchunk):
            dijkstra_core(indptr, indices, weights, src, dist, hkey, hid)
            for w in range(src + 1, n):
                r = dist[w] / _euclid(coords, src, w)
                lo = 0
                hi = nb
                while lo < hi:
                    mid = (lo + hi) >> 1
                    if edges[mid + 1] < r:
                        lo = mid + 1
                    else:
                        hi = mid
                b = lo
                if b >= nb:
                    b = nb - 1
                out[src, b] += 1
    return out


@njit(cache=True)
def rt2_count_single(xs, ys_flat, levels, m, big_m, x0, x1, y0, y1):
    l = _lower_bound(xs, 0, m, x0)
    r = _upper_bound(xs, 0, m, x1)
    if l >= r:
        return np.int64(0)
    total = np.int64(0)
    lo = l + big_m
    hi = r + big_m
    lev = levels - 1
    while lo < hi:
        bs = np.int64(1) << np.int64(levels - 1 - lev)
        if lo & 1:
            a = (lo - (np.int64(1) << np.int64(lev))) * bs
            row = ys_flat[lev]
            total += _upper_bound(row, a, a + bs, y1) - _lower_bound(row, a, a + bs, y0)
            lo += 1
        if hi & 1:
            hi -= 1
            a = (hi - (np.int64(1) << np.int64(lev))) * bs
            row = ys_flat[lev]
            total += _upper_bound(row, a, a + bs, y1) - _lower_bound(row, a, a + bs, y0)
        lo >>= 1
        hi >>= 1
        lev -= 1
    return total


@njit(cache=True)
def rt2_count_batch(xs, ys_flat, levels, m, big_m, qx0, qx1, qy0, qy1):
    q = qx0.shape[0]
    out = np.empty(q, np.int64)
    for i in range(q):
        out[i] = rt2_count_single(xs, ys_flat, levels, m, big_m,
                                  qx0[i], qx1[i], qy0[i], qy1[i])
    return out


@njit(cache=True)
def rt2_minkey_single(xs, ys_flat, minseg, levels, m, big_m, x0, x1, y0, y1):
    l = _lower_bound(xs, 0, m, x0)
    r = _upper_bound(xs, 0, m, x1)
    best = KEY_SENTINEL
    if l >= r:
        return best
    lo = l + big_m
    hi = r + big_m
    lev = levels - 1
    while lo < hi:
        bs = np.int64(1) << np.int64(levels - 1 - lev)
        if lo & 1:
            a = (lo - (np.int64(1) << np.int64(lev))) * bs
            row = ys_flat[lev]
            ya = _lower_bound(row, a, a + bs, y0)
            yb = _upper_bound(row, a, a + bs, y1)
            if ya < yb:
                v = _seg_min(minseg[lev], big_m, ya, yb)
                if v < best:
                    best = v
            lo += 1
        if hi & 1:
            hi -= 1
            a = (hi - (np.int64(1) << np.int64(lev))) * bs
            row = ys_flat[lev]
            ya = _lower_bound(row, a, a + bs, y0)
            yb = _upper_bound(row, a, a + bs, y1)
            if ya < yb:
                v = _seg_min(minseg[lev], big_m, ya, yb)
                if v < best:
                    best = v
        lo >>= 1
        hi >>= 1
        lev -= 1
    return best


@njit(cache=True)
def rt2_minkey_batch(xs, ys_flat, minseg, levels, m, big_m, qx0, qx1, qy0, qy1):
    q = qx0.shape[0]
    out = np.empty(q, np.int64)
    for i in range(q):
        out[i] = rt2_minkey_single(xs, ys_flat, minseg, levels, m, big_m,
                                   qx0[i], qx1[i], qy0[i], qy1[i])
    return out


@njit(cache=True, parallel=True)
def cover_sample_batch(samples, offs, centers, sides, c, coords,
                       xs, ys_flat, levels, m, big_m):
    nb = centers.shape[0]
    best_pt = np.full(nb, -1, np.int64)
    best_cnt = np.full(nb, -1, np.int64)
    for i in prange(nb):
        ls = sides[i]
        if ls <= 0.0:
            best_cnt[i] = 0
            continue
        half_dp = 0.5 * (c + 0.5 / c) * ls
        he = 0.5 * ls / c
        bc0 = centers[i, 0]
        bc1 = centers[i, 1]
        bpt = np.int64(-1)
        bct = np.int64(-1)
        for s in range(offs[i], offs[i + 1]):
            u = samples[s]
            u0 = coords[u, 0]
            u1 = coords[u, 1]
            if u0 < bc0 - half_dp or u0 > bc0 + half_dp:
                continue
            if u1 < bc1 - half_dp or u1 > bc1 + half_dp:
                continue
            cnt = rt2_count_single(xs, ys_flat, levels, m, big_m,
                                   u0 - he, u0 + he, u1 - he, u1 + he)
            if cnt > bct:
                bct = cnt
                bpt = u
        if bct < 0:
            bct = rt2_count_single(xs, ys_flat, levels, m, big_m,
                                   bc0 - he, bc0 + he, bc1 - he, bc1 + he)
            bpt = -1
        best_pt[i] = bpt
        best_cnt[i] = bct
    return best_pt, best_cnt


dualkd_query_batch = _jit(_src.dualkd_query_batch)
exh_iw = _jit(_src.exh_iw)
exh_wi = _jit(_src.exh_wi)
points_in_box_minkey = _jit(_src.points_in_box_minkey)


@njit(cache=True, parallel=True)
def exh_cover_batch(centers, radii, c, coords):
    nb = centers.shape[0]
    n = coords.shape[0]
    d = coords.shape[1]
    best_pt = np.full(nb, -1, np.int64)
    best_cnt = np.full(nb, -1, np.int64)
    for i in prange(nb):
        r = radii[i]
        if r <= 0.0:
            best_cnt[i] = 0
            continue
        reach = c * r + r / c
        er = r / c
        bpt = np.int64(-1)
        bct = np.int64(-1)
        for p in range(n):
            s = 0.0
            for j in range(d):
                t = coords[p, j] - centers[i, j]
                s += t * t
            if np.sqrt(s) > reach:
                continue
            cnt = np.int64(0)
            for w in range(n):
                s2 = 0.0
                for j in range(d):
                    t = coords[w, j] - coords[p, j]
                    s2 += t * t
                if np.sqrt(s2) <= er:
                    cnt += 1
            if cnt > bct:
                bct = cnt
                bpt = p
        if bct < 0:
            bct = np.int64(0)
            for w in range(n):
                s2 = 0.0
                for j in range(d):
                    t = coords[w, j] - centers[i, j]
                    s2 += t * t
                if np.sqrt(s2) <= er:
                    bct += 1
        best_pt[i] = bpt
        best_cnt[i] = bct
    return best_pt, best_cnt
