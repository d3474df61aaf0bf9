"""Reference implementations of the hot kernels.

Every function here is written in a restricted, loop-based style so the
numba backend can compile the same source unchanged (see numba_impl).
Running them uncompiled is the pure-numpy fallback path; it gives
identical results, just slower, so keep inputs small on that path.

Conventions: all index arrays are int64, coordinates float64, and no
kernel allocates python objects.  Functions that signal errors return
sentinel codes instead of raising.
"""

import numpy as np

INF = np.inf
KEY_SENTINEL = np.int64(1) << np.int64(62)


# ---------------------------------------------------------------------------
# fair-split tree


def fst_build(coords):
    """Build the fair-split tree; returns (lo, hi, left, right, leaf_pt).

    Nodes are numbered in preorder (root 0); leaves have left == -1 and
    carry their point index in leaf_pt.  Boxes are the minimal bounding
    boxes of each node's points; internal nodes split the longest box
    side at its midpoint (ties: lowest axis; points exactly on the plane
    go to the lower child).
    """
    n = coords.shape[0]
    d = coords.shape[1]
    nn = 2 * n - 1
    lo = np.empty((nn, d))
    hi = np.empty((nn, d))
    left = np.full(nn, -1, np.int64)
    right = np.full(nn, -1, np.int64)
    leaf_pt = np.full(nn, -1, np.int64)
    perm = np.arange(n)
    tmp = np.empty(n, np.int64)
    st_node = np.empty(n + 1, np.int64)
    st_a = np.empty(n + 1, np.int64)
    st_b = np.empty(n + 1, np.int64)
    st_node[0] = 0
    st_a[0] = 0
    st_b[0] = n
    sp = 1
    while sp > 0:
        sp -= 1
        v = st_node[sp]
        a = st_a[sp]
        b = st_b[sp]
        for j in range(d):
            cmin = coords[perm[a], j]
            cmax = cmin
            for i in range(a + 1, b):
                cij = coords[perm[i], j]
                if cij < cmin:
                    cmin = cij
                if cij > cmax:
                    cmax = cij
            lo[v, j] = cmin
            hi[v, j] = cmax
        if b - a == 1:
            leaf_pt[v] = perm[a]
            continue
        ax = 0
        best = hi[v, 0] - lo[v, 0]
        for j in range(1, d):
            s = hi[v, j] - lo[v, j]
            if s > best:
                best = s
                ax = j
        mid = 0.5 * (lo[v, ax] + hi[v, ax])
        cnt_l = 0
        for i in range(a, b):
            if coords[perm[i], ax] <= mid:
                cnt_l += 1
        if cnt_l == b - a:
            # midpoint rounded onto the upper face; peel the max-coordinate
            # points off to the right so the recursion still terminates
            cnt_l = 0
            top = hi[v, ax]
            for i in range(a, b):
                if coords[perm[i], ax] < top:
                    cnt_l += 1
            pl = 0
            pr = cnt_l
            for i in range(a, b):
                p = perm[i]
                if coords[p, ax] < top:
                    tmp[pl] = p
                    pl += 1
                else:
                    tmp[pr] = p
                    pr += 1
        else:
            pl = 0
            pr = cnt_l
            for i in range(a, b):
                p = perm[i]
                if coords[p, ax] <= mid:
                    tmp[pl] = p
                    pl += 1
                else:
                    tmp[pr] = p
                    pr += 1
        for i in range(a, b):
            perm[i] = tmp[i - a]
        lid = v + 1
        rid = v + 2 * cnt_l
        left[v] = lid
        right[v] = rid
        st_node[sp] = rid
        st_a[sp] = a + cnt_l
        st_b[sp] = b
        sp += 1
        st_node[sp] = lid
        st_a[sp] = a
        st_b[sp] = a + cnt_l
        sp += 1
    return lo, hi, left, right, leaf_pt


def fst_split(left, right, budget):
    """Cut tree edges until every component has at most `budget` nodes.

    Repeatedly finds, inside an oversized component, the edge whose
    removal leaves both pieces at most ceil(2k'/3) of the component size
    and whose removed subtree is largest (ties: smallest node id).
    Returns a uint8 cut-flag array (cut[v] == 1 removes the edge above v);
    the second return is 0 on success, -1 if no qualifying edge existed.
    """
    nn = left.shape[0]
    cut = np.zeros(nn, np.uint8)
    sz = np.zeros(nn, np.int64)
    comp_nodes = np.empty(nn, np.int64)
    dfs = np.empty(nn + 1, np.int64)
    pending = np.empty(nn + 1, np.int64)
    pending[0] = 0
    psp = 1
    while psp > 0:
        psp -= 1
        root = pending[psp]
        while True:
            cnt = 0
            dfs[0] = root
            dsp = 1
            while dsp > 0:
                dsp -= 1
                v = dfs[dsp]
                comp_nodes[cnt] = v
                cnt += 1
                lv = left[v]
                if lv != -1 and cut[lv] == 0:
                    dfs[dsp] = lv
                    dsp += 1
                rv = right[v]
                if rv != -1 and cut[rv] == 0:
                    dfs[dsp] = rv
                    dsp += 1
            if cnt <= budget:
                break
            for i in range(cnt - 1, -1, -1):
                v = comp_nodes[i]
                s = 1
                lv = left[v]
                if lv != -1 and cut[lv] == 0:
                    s += sz[lv]
                rv = right[v]
                if rv != -1 and cut[rv] == 0:
                    s += sz[rv]
                sz[v] = s
            lim = (2 * cnt + 2) // 3
            best = -1
            best_sz = 0
            for i in range(cnt):
                v = comp_nodes[i]
                if v == root:
                    continue
                s = sz[v]
                if s <= lim and cnt - s <= lim:
                    if s > best_sz or (s == best_sz and (best == -1 or v < best)):
                        best = v
                        best_sz = s
            if best == -1:
                return cut, -1
            cut[best] = 1
            pending[psp] = best
            psp += 1
    return cut, 0


def fst_components(left, right, cut):
    """Label every node with its component id (roots in node-id order)."""
    nn = left.shape[0]
    comp = np.full(nn, -1, np.int64)
    dfs = np.empty(nn + 1, np.int64)
    cid = -1
    for v in range(nn):
        if v == 0 or cut[v] == 1:
            cid += 1
            dfs[0] = v
            dsp = 1
            while dsp > 0:
                dsp -= 1
                u = dfs[dsp]
                comp[u] = cid
                lu = left[u]
                if lu != -1 and cut[lu] == 0:
                    dfs[dsp] = lu
                    dsp += 1
                ru = right[u]
                if ru != -1 and cut[ru] == 0:
                    dfs[dsp] = ru
                    dsp += 1
    return comp


def subtree_min_point(left, right, leaf_pt):
    """Minimum point index in each subtree (preorder ids make this one pass)."""
    nn = left.shape[0]
    rep = np.full(nn, np.int64(1) << np.int64(60), np.int64)
    for v in range(nn - 1, -1, -1):
        if left[v] == -1:
            rep[v] = leaf_pt[v]
        else:
            a = rep[left[v]]
            b = rep[right[v]]
            rep[v] = a if a < b else b
    return rep


# ---------------------------------------------------------------------------
# theta-graph cone sweep (d == 2)


def theta_sweep(order, newgrp, t_rank, proj, out_tgt):
    """One cone pass of the theta-graph construction.

    `order` visits points by (s desc, t desc, id asc) where s and t are
    the dot products with the cone's two inward edge normals; `newgrp`
    flags the first entry of every equal-s run.  For each point the
    kernel finds, among points with s' >= s and t' >= t (the cone test),
    the one minimizing `proj` (projection on the cone bisector), ties by
    point id.  Result indices land in out_tgt (-1 when the cone is empty).
    """
    n = order.shape[0]
    fen_val = np.full(n + 1, INF)
    fen_idx = np.full(n + 1, -1, np.int64)
    g = 0
    while g < n:
        h = g + 1
        while h < n and newgrp[h] == 0:
            h += 1
        run_val = INF
        run_idx = np.int64(-1)
        for k in range(g, h):
            u = order[k]
            best_val = run_val
            best_idx = run_idx
            # fenwick prefix-min over reversed t ranks == suffix over t
            i = n - t_rank[u]
            while i > 0:
                fv = fen_val[i]
                if fv < best_val or (fv == best_val and fen_idx[i] < best_idx):
                    best_val = fv
                    best_idx = fen_idx[i]
                i -= i & (-i)
            out_tgt[u] = best_idx
            pu = proj[u]
            if pu < run_val or (pu == run_val and u < run_idx):
                run_val = pu
                run_idx = u
        for k in range(g, h):
            u = order[k]
            pu = proj[u]
            i = n - t_rank[u]
            while i <= n:
                fv = fen_val[i]
                if pu < fv or (pu == fv and u < fen_idx[i]):
                    fen_val[i] = pu
                    fen_idx[i] = u
                else:
                    break
                i += i & (-i)
        g = h
    return 0


# ---------------------------------------------------------------------------
# well-separated pair decomposition (any d)


def wspd_pairs(left, right, cen, rad, side, rep, s):
    """Emit one representative edge per s-well-separated pair of tree nodes."""
    nn = left.shape[0]
    d = cen.shape[1]
    cap = 4 * nn + 16
    pa = np.empty(cap, np.int64)
    pb = np.empty(cap, np.int64)
    psp = 0
    for v in range(nn):
        if left[v] != -1:
            if psp >= cap:
                cap2 = cap * 2
                pa2 = np.empty(cap2, np.int64)
                pb2 = np.empty(cap2, np.int64)
                pa2[:psp] = pa[:psp]
                pb2[:psp] = pb[:psp]
                pa = pa2
                pb = pb2
                cap = cap2
            pa[psp] = left[v]
            pb[psp] = right[v]
            psp += 1
    ecap = 4 * nn + 16
    eu = np.empty(ecap, np.int64)
    ev = np.empty(ecap, np.int64)
    ne = 0
    while psp > 0:
        psp -= 1
        a = pa[psp]
        b = pb[psp]
        dist2 = 0.0
        for j in range(d):
            t = cen[a, j] - cen[b, j]
            dist2 += t * t
        dist = np.sqrt(dist2)
        ra = rad[a]
        rb = rad[b]
        rmax = ra if ra > rb else rb
        if dist - ra - rb >= s * rmax:
            if ne >= ecap:
                ecap2 = ecap * 2
                eu2 = np.empty(ecap2, np.int64)
                ev2 = np.empty(ecap2, np.int64)
                eu2[:ne] = eu[:ne]
                ev2[:ne] = ev[:ne]
                eu = eu2
                ev = ev2
                ecap = ecap2
            eu[ne] = rep[a]
            ev[ne] = rep[b]
            ne += 1
        else:
            split_a = True
            if left[a] == -1:
                split_a = False
            elif left[b] != -1:
                if side[b] > side[a]:
                    split_a = False
                elif side[b] == side[a] and b < a:
                    split_a = False
            if psp + 2 > cap:
                cap2 = cap * 2 + 4
                pa2 = np.empty(cap2, np.int64)
                pb2 = np.empty(cap2, np.int64)
                pa2[:psp] = pa[:psp]
                pb2[:psp] = pb[:psp]
                pa = pa2
                pb = pb2
                cap = cap2
            if split_a:
                pa[psp] = left[a]
                pb[psp] = b
                psp += 1
                pa[psp] = right[a]
                pb[psp] = b
                psp += 1
            else:
                pa[psp] = a
                pb[psp] = left[b]
                psp += 1
                pa[psp] = a
                pb[psp] = right[b]
                psp += 1
    return eu[:ne], ev[:ne]


# ---------------------------------------------------------------------------
# shortest paths / stretch accumulation


def dijkstra_core(indptr, indices, weights, src, dist, hkey, hid):
    """Single-source Dijkstra with a lazy 4-ary heap; fills `dist`."""
    n = dist.shape[0]
    for i in range(n):
        dist[i] = INF
    dist[src] = 0.0
    hkey[0] = 0.0
    hid[0] = src
    hs = 1
    while hs > 0:
        ku = hkey[0]
        u = hid[0]
        hs -= 1
        lk = hkey[hs]
        li = hid[hs]
        i = 0
        while True:
            c = 4 * i + 1
            if c >= hs:
                break
            top = c + 4
            if top > hs:
                top = hs
            mc = c
            mk = hkey[c]
            for cc in range(c + 1, top):
                if hkey[cc] < mk:
                    mk = hkey[cc]
                    mc = cc
            if mk < lk:
                hkey[i] = mk
                hid[i] = hid[mc]
                i = mc
            else:
                break
        hkey[i] = lk
        hid[i] = li
        if ku != dist[u]:
            continue
        for e in range(indptr[u], indptr[u + 1]):
            v = indices[e]
            nd = ku + weights[e]
            if nd < dist[v]:
                dist[v] = nd
                j = hs
                hs += 1
                while j > 0:
                    p = (j - 1) >> 2
                    if hkey[p] > nd:
                        hkey[j] = hkey[p]
                        hid[j] = hid[p]
                        j = p
                    else:
                        break
                hkey[j] = nd
                hid[j] = v
    return 0


def _euclid(coords, a, b):
    d = coords.shape[1]
    s = 0.0
    for j in range(d):
        t = coords[a, j] - coords[b, j]
        s += t * t
    return np.sqrt(s)


def sssp_dist(indptr, indices, weights, src):
    n = indptr.shape[0] - 1
    dist = np.empty(n)
    hkey = np.empty(indices.shape[0] + 1)
    hid = np.empty(indices.shape[0] + 1, np.int64)
    dijkstra_core(indptr, indices, weights, src, dist, hkey, hid)
    return dist


def asf_exact_accum(indptr, indices, weights, coords):
    """Per-source stretch partials over pairs (src, w > src).

    Returns (sum of ratios, max ratio, reached count) per source; the
    caller combines them and detects disconnection from the counts.
    """
    n = indptr.shape[0] - 1
    per_sum = np.zeros(n)
    per_max = np.zeros(n)
    per_reach = np.zeros(n, np.int64)
    dist = np.empty(n)
    hkey = np.empty(indices.shape[0] + 1)
    hid = np.empty(indices.shape[0] + 1, np.int64)
    for src in range(n):
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


def pairs_ratios(indptr, indices, weights, coords, sources, tgt_flat, tgt_offsets):
    """Stretch ratios for target groups hanging off each distinct source."""
    n = indptr.shape[0] - 1
    m = tgt_flat.shape[0]
    out = np.empty(m)
    dist = np.empty(n)
    hkey = np.empty(indices.shape[0] + 1)
    hid = np.empty(indices.shape[0] + 1, np.int64)
    for si in range(sources.shape[0]):
        src = sources[si]
        dijkstra_core(indptr, indices, weights, src, dist, hkey, hid)
        for t in range(tgt_offsets[si], tgt_offsets[si + 1]):
            w = tgt_flat[t]
            out[t] = dist[w] / _euclid(coords, src, w)
    return out


def hist_counts(indptr, indices, weights, coords, edges):
    """Per-source histogram of pair stretch ratios (pairs w > src)."""
    n = indptr.shape[0] - 1
    nb = edges.shape[0] - 1
    out = np.zeros((n, nb), np.int64)
    dist = np.empty(n)
    hkey = np.empty(indices.shape[0] + 1)
    hid = np.empty(indices.shape[0] + 1, np.int64)
    for src in range(n):
        dijkstra_core(indptr, indices, weights, src, dist, hkey, hid)
        for w in range(src + 1, n):
            r = dist[w] / _euclid(coords, src, w)
            b = 0
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


# ---------------------------------------------------------------------------
# layered range structure, d == 2 (merge-sort-tree rows per level)


def _lower_bound(arr, lo, hi, x):
    while lo < hi:
        mid = (lo + hi) >> 1
        if arr[mid] < x:
            lo = mid + 1
        else:
            hi = mid
    return lo


def _upper_bound(arr, lo, hi, x):
    while lo < hi:
        mid = (lo + hi) >> 1
        if arr[mid] <= x:
            lo = mid + 1
        else:
            hi = mid
    return lo


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


def rt2_count_batch(xs, ys_flat, levels, m, big_m, qx0, qx1, qy0, qy1):
    q = qx0.shape[0]
    out = np.empty(q, np.int64)
    for i in range(q):
        out[i] = rt2_count_single(xs, ys_flat, levels, m, big_m, qx0[i], qx1[i], qy0[i], qy1[i])
    return out


def _seg_min(seg, base, a, b):
    best = KEY_SENTINEL
    lo = a + base
    hi = b + base
    while lo < hi:
        if lo & 1:
            if seg[lo] < best:
                best = seg[lo]
            lo += 1
        if hi & 1:
            hi -= 1
            if seg[hi] < best:
                best = seg[hi]
        lo >>= 1
        hi >>= 1
    return best


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


def rt2_minkey_batch(xs, ys_flat, minseg, levels, m, big_m, qx0, qx1, qy0, qy1):
    q = qx0.shape[0]
    out = np.empty(q, np.int64)
    for i in range(q):
        out[i] = rt2_minkey_single(
            xs, ys_flat, minseg, levels, m, big_m, qx0[i], qx1[i], qy0[i], qy1[i]
        )
    return out


# ---------------------------------------------------------------------------
# dual box search tree (boxes stored as corner pairs in R^{2d})


def dualkd_query_batch(nlo, nhi, nleft, nright, nkeymin, nstart, ncount,
                       order, duals, keys, qpts):
    """Minimum-key stored box containing each query point (sentinel if none)."""
    q = qpts.shape[0]
    d = qpts.shape[1]
    out = np.full(q, KEY_SENTINEL, np.int64)
    stack = np.empty(nlo.shape[0] + 1, np.int64)
    for t in range(q):
        best = KEY_SENTINEL
        sp = 1
        stack[0] = 0
        while sp > 0:
            sp -= 1
            v = stack[sp]
            if nkeymin[v] >= best:
                continue
            ok = True
            for j in range(d):
                if nlo[v, j] > qpts[t, j] or nhi[v, d + j] < qpts[t, j]:
                    ok = False
                    break
            if not ok:
                continue
            if nleft[v] == -1:
                for s in range(nstart[v], nstart[v] + ncount[v]):
                    bi = order[s]
                    if keys[bi] >= best:
                        continue
                    inside = True
                    for j in range(d):
                        if duals[bi, j] > qpts[t, j] or duals[bi, d + j] < qpts[t, j]:
                            inside = False
                            break
                    if inside:
                        best = keys[bi]
            else:
                stack[sp] = nleft[v]
                sp += 1
                stack[sp] = nright[v]
                sp += 1
        out[t] = best
    return out


# ---------------------------------------------------------------------------
# cover-region search (square boxes, d == 2)


def cover_sample_batch(samples, offs, centers, sides, c, coords,
                       xs, ys_flat, levels, m, big_m):
    """Pick, per ball, the densest sampled box E(u) inside the widened region.

    samples[offs[i]:offs[i+1]] are candidate point ids for ball i; a
    candidate survives if it lies in the box of side (c + 1/(2c))*L
    centered at the ball's box center, and its square box of side L/c is
    counted via the level structure.  Returns (chosen point id or -1 for
    the center fallback, count of the chosen box).
    """
    nb = centers.shape[0]
    best_pt = np.full(nb, -1, np.int64)
    best_cnt = np.full(nb, -1, np.int64)
    for i in range(nb):
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


# ---------------------------------------------------------------------------
# exhaustive (ball geometry) cover search


def exh_cover_batch(centers, radii, c, coords):
    """Densest candidate ball of radius r_i/c intersecting D_i, per ball.

    Candidate centers are the input points within c*r_i + r_i/c of the
    ball center; ties prefer the lowest point index.  Returns (-1, count
    of the center fallback) when no candidate exists.
    """
    nb = centers.shape[0]
    n = coords.shape[0]
    d = coords.shape[1]
    best_pt = np.full(nb, -1, np.int64)
    best_cnt = np.full(nb, -1, np.int64)
    for i in range(nb):
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


def exh_iw(qcenters, qradii, coords):
    """First (lowest-position) qualifying ball containing each point, or -1."""
    n = coords.shape[0]
    d = coords.shape[1]
    nq = qcenters.shape[0]
    out = np.full(n, -1, np.int64)
    for w in range(n):
        for i in range(nq):
            s = 0.0
            for j in range(d):
                t = coords[w, j] - qcenters[i, j]
                s += t * t
            if np.sqrt(s) <= qradii[i]:
                out[w] = i
                break
    return out


def exh_wi(ecenters, eradii, enc_keys, coords):
    """Point of minimum encoded key inside each region ball (-1 if empty)."""
    nb = ecenters.shape[0]
    n = coords.shape[0]
    d = coords.shape[1]
    out = np.full(nb, -1, np.int64)
    for i in range(nb):
        best = KEY_SENTINEL
        bw = np.int64(-1)
        for w in range(n):
            s = 0.0
            for j in range(d):
                t = coords[w, j] - ecenters[i, j]
                s += t * t
            if np.sqrt(s) <= eradii[i] and enc_keys[w] < best:
                best = enc_keys[w]
                bw = w
        out[i] = bw
    return out


def points_in_box_minkey(coords, enc_keys, blo, bhi):
    """Min encoded key over points inside each box; brute scan fallback."""
    nb = blo.shape[0]
    n = coords.shape[0]
    d = coords.shape[1]
    out = np.full(nb, KEY_SENTINEL, np.int64)
    for i in range(nb):
        best = KEY_SENTINEL
        for w in range(n):
            inside = True
            for j in range(d):
                if coords[w, j] < blo[i, j] or coords[w, j] > bhi[i, j]:
                    inside = False
                    break
            if inside and enc_keys[w] < best:
                best = enc_keys[w]
        out[i] = best
    return out
