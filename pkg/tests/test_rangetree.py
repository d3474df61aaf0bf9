import time

import numpy as np
import pytest

from avgstretch.errors import InvalidInputError
from avgstretch.geometry import AABox, PointSet
from avgstretch.rangetree import (DualBoxTree, build_count_min, build_dual,
                                  count, min_index, smallest_containing_box)
from conftest import brute_count


def test_empty_tree():
    tree = build_count_min(PointSet(np.zeros((0, 2))))
    assert count(tree, AABox([-1, -1], [1, 1])) == 0
    assert min_index(tree, AABox([-1, -1], [1, 1])) is None


def test_small_examples():
    points = PointSet([[0, 0], [1, 1], [2, 2]])
    tree = build_count_min(points)
    assert count(tree, AABox([0, 0], [1, 1])) == 2
    assert count(tree, AABox([5, 5], [6, 6])) == 0
    assert count(tree, AABox([0, 0], [2, 2])) == 3
    assert count(tree, AABox([0.5, 0.5], [2.5, 2.5])) == 2
    assert min_index(tree, AABox([0.5, 0.5], [2.5, 2.5])) == 1
    assert min_index(tree, AABox([1.5, 1.5], [2.5, 2.5])) == 2
    assert min_index(tree, AABox([5, 5], [6, 6])) is None


@pytest.mark.parametrize("d", [1, 2, 3])
def test_count_and_min_match_brute_force(d, rng):
    n, q = 2000, 400
    coords = rng.random((n, d))
    points = PointSet(coords)
    tree = build_count_min(points)
    lo = rng.random((q, d)) * 1.1 - 0.05
    hi = lo + rng.random((q, d)) * 0.5
    got = tree.count_batch(lo, hi)
    got_min = tree.min_index_batch(lo, hi)
    for i in range(q):
        assert got[i] == brute_count(coords, lo[i], hi[i])
        inside = np.flatnonzero(np.all((coords >= lo[i]) & (coords <= hi[i]), axis=1))
        if inside.size:
            assert got_min[i] == inside.min()
        else:
            assert got_min[i] >= 1 << 62


def test_min_key_with_custom_keys(rng):
    coords = rng.random((500, 2))
    tree = build_count_min(PointSet(coords))
    keys = rng.integers(0, 10 ** 9, 500)
    lo = rng.random((100, 2)) * 0.8
    hi = lo + 0.3
    got = tree.min_key_batch(keys, lo, hi)
    for i in range(100):
        inside = np.all((coords >= lo[i]) & (coords <= hi[i]), axis=1)
        expect = keys[inside].min() if inside.any() else (1 << 62)
        assert got[i] == expect


def test_dual_single_and_nested():
    one = build_dual([(AABox([0, 0], [2, 2]), 5)])
    assert smallest_containing_box(one, [1, 1]) == 5
    assert smallest_containing_box(one, [3, 3]) is None
    nested = build_dual([(AABox([0, 0], [4, 4]), 0), (AABox([1, 1], [2, 2]), 1)])
    assert smallest_containing_box(nested, [1.5, 1.5]) == 1
    assert smallest_containing_box(nested, [3.5, 3.5]) == 0


def test_dual_requires_square():
    with pytest.raises(InvalidInputError):
        build_dual([(AABox([0, 0], [1, 2]), 0)])


def test_dual_stores_the_corner_side_duals():
    tree = build_dual([(AABox([1, 2], [3, 4]), 0)])
    assert np.allclose(tree.dual_points, [[1, 2, 2]])  # corner coords + side


@pytest.mark.parametrize("d", [1, 2, 3])
def test_dual_matches_brute_force(d, rng):
    m, q = 500, 500
    c = rng.random((m, d))
    s = rng.random(m) * 0.4 + 1e-3
    blo = c - s[:, None] / 2
    bhi = blo + s[:, None]
    idx = rng.permutation(m).astype(np.int64)
    side_tree = DualBoxTree(blo, bhi, idx, key="side")
    index_tree = DualBoxTree(blo, bhi, idx, key="index")
    qp = rng.random((q, d)) * 1.2 - 0.1
    got_side = side_tree.query_batch(qp)
    got_index = index_tree.query_batch(qp)
    for i in range(q):
        inside = np.flatnonzero(np.all((blo <= qp[i]) & (qp[i] <= bhi), axis=1))
        if inside.size == 0:
            assert got_side[i] == -1 and got_index[i] == -1
            continue
        best = inside[np.lexsort((idx[inside], s[inside]))[0]]
        assert got_side[i] == idx[best]
        assert got_index[i] == idx[inside].min()


def test_query_scaling_is_flat_informational():
    # coarse check that count-query time grows far slower than n
    timings = {}
    for n in (20000, 40000):
        points = PointSet(np.random.default_rng(0).random((n, 2)))
        tree = build_count_min(points)
        lo = np.random.default_rng(1).random((4000, 2)) * 0.9
        hi = lo + 0.05
        tree.count_batch(lo[:10], hi[:10])  # warm
        best = np.inf
        for _ in range(5):
            t0 = time.perf_counter()
            tree.count_batch(lo, hi)
            best = min(best, time.perf_counter() - t0)
        timings[n] = best
    ratio = timings[40000] / timings[20000]
    assert ratio <= 1.75, "count query time should scale polylogarithmically"
