"""Backend-independent helpers: deterministic RNG streams, spatial
orderings and the array layouts consumed by the query kernels.

Everything here is vectorized numpy, so both backends share it and get
bit-identical inputs.
"""

import numpy as np

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


def _mix_scalar(x):
    x &= _MASK64
    x ^= x >> 30
    x = (x * _MIX1) & _MASK64
    x ^= x >> 27
    x = (x * _MIX2) & _MASK64
    x ^= x >> 31
    return x


def stream_base(seed, tag):
    """64-bit base state for the (seed, tag) substream."""
    s = _mix_scalar((int(seed) & _MASK64) ^ _GOLDEN)
    t = _mix_scalar((int(tag) & _MASK64) * 0xD6E8FEB86659FD93)
    return _mix_scalar(s ^ t)


def draw_uints(seed, tag, count):
    """splitmix64 outputs for the substream; counter-based, random access."""
    base = np.uint64(stream_base(seed, tag))
    ctr = (np.arange(1, count + 1, dtype=np.uint64) * np.uint64(_GOLDEN)) + base
    z = ctr
    z = (z ^ (z >> np.uint64(30))) * np.uint64(_MIX1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(_MIX2)
    z = z ^ (z >> np.uint64(31))
    return z


def draw_below(seed, tag, count, n):
    """`count` indices uniform over [0, n); modulo bias is ~n/2^64."""
    if n <= 0:
        raise ValueError("draw_below needs n >= 1")
    return (draw_uints(seed, tag, count) % np.uint64(n)).astype(np.int64)


def draw_floats(seed, tag, count):
    """Uniforms in [0, 1) with 53 random bits."""
    return (draw_uints(seed, tag, count) >> np.uint64(11)).astype(np.float64) * (2.0 ** -53)


def _mix_array(z):
    z = (z ^ (z >> np.uint64(30))) * np.uint64(_MIX1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(_MIX2)
    return z ^ (z >> np.uint64(31))


def draw_below_multi(seed, tags, count, n):
    """(len(tags), count) indices below n; row i uses substream (seed, tags[i]).

    Row i matches draw_below(seed, tags[i], count, n) exactly, so per-ball
    streams stay independent of batch shape and execution order.
    """
    if n <= 0:
        raise ValueError("draw_below_multi needs n >= 1")
    tags = np.asarray(tags, np.uint64)
    s = np.uint64(_mix_scalar((int(seed) & _MASK64) ^ _GOLDEN))
    t = _mix_array(tags * np.uint64(0xD6E8FEB86659FD93))
    bases = _mix_array(s ^ t)
    ctr = (np.arange(1, count + 1, dtype=np.uint64) * np.uint64(_GOLDEN))[None, :] + bases[:, None]
    return (_mix_array(ctr) % np.uint64(n)).astype(np.int64)


def sample_without_replacement(seed, tag, count, n):
    """Distinct indices from [0, n), uniform order-insensitive, deterministic."""
    if count > n:
        raise ValueError("cannot sample %d of %d without replacement" % (count, n))
    if count == n:
        return np.arange(n, dtype=np.int64)
    chosen = np.empty(0, np.int64)
    round_no = 0
    need = count
    while need > 0:
        batch = draw_below(seed, tag + 7919 * round_no + 1, int(need * 1.2) + 16, n)
        batch = batch[~np.isin(batch, chosen)]
        # first occurrence order within the batch
        _, first = np.unique(batch, return_index=True)
        batch = batch[np.sort(first)]
        chosen = np.concatenate([chosen, batch[:need]])
        need = count - chosen.shape[0]
        round_no += 1
    return chosen


def morton_order(coords):
    """Spatial (Z-order) permutation of the rows of an (n, d) array."""
    n, d = coords.shape
    if n <= 1:
        return np.arange(n, dtype=np.int64)
    lo = coords.min(axis=0)
    span = coords.max(axis=0) - lo
    span[span == 0.0] = 1.0
    bits = max(1, min(20, 60 // d))
    scale = (1 << bits) - 1
    q = ((coords - lo) / span * scale).astype(np.uint64)
    code = np.zeros(n, np.uint64)
    for b in range(bits):
        for j in range(d):
            code |= ((q[:, j] >> np.uint64(b)) & np.uint64(1)) << np.uint64(b * d + j)
    return np.argsort(code, kind="stable").astype(np.int64)


# ---------------------------------------------------------------------------
# layered 2-d range structure (per-level merge rows)


class Rt2Layout:
    """Flat layout for the d=2 layered range tree.

    Level ell partitions the x-rank axis into blocks of 2^(L-ell) ranks;
    each level row stores the points sorted by (block, y, id).  Queries
    decompose an x-rank interval into canonical blocks and binary-search
    the y slices, so counting costs O(log^2 n) without extra storage.
    """

    __slots__ = ("xs", "ys_flat", "ids_flat", "levels", "m", "big_m")

    def __init__(self, x, y, ids=None):
        m = x.shape[0]
        if ids is None:
            ids = np.arange(m, dtype=np.int64)
        big_m = 1
        while big_m < max(m, 1):
            big_m <<= 1
        levels = big_m.bit_length()  # root level 0 .. leaf level levels-1
        xorder = np.lexsort((ids, x))
        xs = np.ascontiguousarray(x[xorder])
        yb = y[xorder]
        ib = ids[xorder]
        ys_flat = np.empty((levels, m))
        ids_flat = np.empty((levels, m), np.int64)
        ranks = np.arange(m, dtype=np.int64)
        for lev in range(levels):
            shift = levels - 1 - lev
            block = ranks >> shift
            order2 = np.lexsort((ib, yb, block))
            ys_flat[lev] = yb[order2]
            ids_flat[lev] = ib[order2]
        self.xs = xs
        self.ys_flat = ys_flat
        self.ids_flat = ids_flat
        self.levels = levels
        self.m = m
        self.big_m = big_m

    def min_layer(self, enc_keys):
        """Per-level segment trees of encoded keys for min-key queries."""
        sentinel = np.int64(1) << np.int64(62)
        levels, m, big_m = self.levels, self.m, self.big_m
        seg = np.full((levels, 2 * big_m), sentinel, np.int64)
        if m:
            seg[:, big_m:big_m + m] = np.asarray(enc_keys, np.int64)[self.ids_flat]
        size = big_m
        while size > 1:
            half = size >> 1
            lower = seg[:, size:2 * size]
            np.minimum(lower[:, 0::2], lower[:, 1::2], out=seg[:, half:size])
            size = half
        return seg


# ---------------------------------------------------------------------------
# kd search tree over box duals (corner pairs in R^{2d})


class DualKdLayout:
    """Bounding-volume tree over boxes encoded as (lo, hi) corner pairs."""

    __slots__ = ("nlo", "nhi", "nleft", "nright", "nkeymin", "nstart",
                 "ncount", "order", "duals", "keys")

    def __init__(self, duals, keys, leaf_size=8):
        m, dd = duals.shape
        order = np.arange(m, dtype=np.int64)
        cap = max(1, 2 * (2 * m // max(leaf_size, 1) + 2))
        nlo = np.empty((cap, dd))
        nhi = np.empty((cap, dd))
        nleft = np.full(cap, -1, np.int64)
        nright = np.full(cap, -1, np.int64)
        nkeymin = np.empty(cap, np.int64)
        nstart = np.zeros(cap, np.int64)
        ncount = np.zeros(cap, np.int64)
        next_id = [1]

        def grow():
            nonlocal nlo, nhi, nleft, nright, nkeymin, nstart, ncount
            newcap = nlo.shape[0] * 2
            nlo = np.vstack([nlo, np.empty_like(nlo)])
            nhi = np.vstack([nhi, np.empty_like(nhi)])
            nleft = np.concatenate([nleft, np.full(newcap // 2, -1, np.int64)])
            nright = np.concatenate([nright, np.full(newcap // 2, -1, np.int64)])
            nkeymin = np.concatenate([nkeymin, np.empty(newcap // 2, np.int64)])
            nstart = np.concatenate([nstart, np.zeros(newcap // 2, np.int64)])
            ncount = np.concatenate([ncount, np.zeros(newcap // 2, np.int64)])

        stack = [(0, 0, m)]
        while stack:
            v, a, b = stack.pop()
            idx = order[a:b]
            sub = duals[idx]
            nlo[v] = sub.min(axis=0)
            nhi[v] = sub.max(axis=0)
            nkeymin[v] = keys[idx].min()
            if b - a <= leaf_size:
                nstart[v] = a
                ncount[v] = b - a
                continue
            spread = nhi[v] - nlo[v]
            axis = int(np.argmax(spread))
            loc = np.lexsort((idx, sub[:, axis]))
            order[a:b] = idx[loc]
            mid = a + (b - a) // 2
            while next_id[0] + 2 > nlo.shape[0]:
                grow()
            lid = next_id[0]
            rid = next_id[0] + 1
            next_id[0] += 2
            nleft[v] = lid
            nright[v] = rid
            stack.append((rid, mid, b))
            stack.append((lid, a, mid))
        used = next_id[0]
        self.nlo = np.ascontiguousarray(nlo[:used])
        self.nhi = np.ascontiguousarray(nhi[:used])
        self.nleft = nleft[:used]
        self.nright = nright[:used]
        self.nkeymin = nkeymin[:used]
        self.nstart = nstart[:used]
        self.ncount = ncount[:used]
        self.order = order
        self.duals = np.ascontiguousarray(duals)
        self.keys = np.ascontiguousarray(keys)


# ---------------------------------------------------------------------------
# graph assembly


def dedup_edges(u, v):
    """Canonicalize to (min, max) and drop duplicates and self loops."""
    u = np.asarray(u, dtype=np.int64)
    v = np.asarray(v, dtype=np.int64)
    keep = u != v
    u, v = u[keep], v[keep]
    a = np.minimum(u, v)
    b = np.maximum(u, v)
    if a.shape[0] == 0:
        return a, b
    order = np.lexsort((b, a))
    a, b = a[order], b[order]
    first = np.ones(a.shape[0], bool)
    first[1:] = (a[1:] != a[:-1]) | (b[1:] != b[:-1])
    return a[first], b[first]


def build_csr(n, u, v, w):
    """Symmetric CSR adjacency from undirected edge arrays."""
    uu = np.concatenate([u, v])
    vv = np.concatenate([v, u])
    ww = np.concatenate([w, w])
    order = np.lexsort((vv, uu))
    uu, vv, ww = uu[order], vv[order], ww[order]
    indptr = np.zeros(n + 1, np.int64)
    np.add.at(indptr, uu + 1, 1)
    indptr = np.cumsum(indptr)
    return indptr, vv.astype(np.int64), ww
