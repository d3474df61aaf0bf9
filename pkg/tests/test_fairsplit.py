import numpy as np
import pytest

from avgstretch.errors import InvalidInputError
from avgstretch.fairsplit import (build_tree, k_partition, partition_components,
                                  probe_properties)
from avgstretch.geometry import PointSet
from avgstretch.workbench import gen_uniform


def test_single_point_tree():
    tree = build_tree(PointSet([[2.0, 7.0]]))
    assert tree.node_count == 1
    assert tree.leaf_pt[0] == 0


def test_three_point_manual_trace():
    tree = build_tree(PointSet([[0, 0], [4, 0], [4, 3]]))
    assert tree.node_count == 5
    assert np.allclose(tree.lo[0], [0, 0]) and np.allclose(tree.hi[0], [4, 3])
    left = tree.left[0]
    right = tree.right[0]
    assert tree.leaf_pt[left] == 0  # (0,0) alone below the x=2 cut
    assert np.allclose(tree.lo[right], [4, 0]) and np.allclose(tree.hi[right], [4, 3])
    kids = sorted([tree.leaf_pt[tree.left[right]], tree.leaf_pt[tree.right[right]]])
    assert kids == [1, 2]


def test_tree_structure_random(rng):
    for seed in range(20):
        points = gen_uniform(rng.integers(2, 120), 2, seed)
        tree = build_tree(points)
        n = points.n
        assert tree.node_count == 2 * n - 1
        leaves = tree.leaf_pt[tree.leaf_pt >= 0]
        assert sorted(leaves.tolist()) == list(range(n))
        for v in range(tree.node_count):
            if tree.left[v] == -1:
                assert np.allclose(tree.lo[v], tree.hi[v])  # degenerate leaf box
                continue
            l, r = tree.left[v], tree.right[v]
            # child boxes partition the node box; node box is minimal
            assert np.all(tree.lo[v] <= tree.lo[l] + 1e-15)
            assert np.all(tree.hi[v] >= tree.hi[r] - 1e-15)
            assert np.all(tree.lo[v] == np.minimum(tree.lo[l], tree.lo[r]))
            assert np.all(tree.hi[v] == np.maximum(tree.hi[l], tree.hi[r]))


def test_split_bisects_longest_side(rng):
    points = gen_uniform(200, 2, 5)
    tree = build_tree(points)
    for v in range(tree.node_count):
        if tree.left[v] == -1:
            continue
        sides = tree.hi[v] - tree.lo[v]
        ax = int(np.argmax(sides))  # argmax takes the lowest axis on ties
        mid = 0.5 * (tree.lo[v, ax] + tree.hi[v, ax])
        l, r = tree.left[v], tree.right[v]
        assert tree.hi[l, ax] <= mid
        assert tree.lo[r, ax] >= mid or np.isclose(tree.lo[r, ax], mid)


def test_duplicate_points_rejected():
    with pytest.raises(InvalidInputError):
        build_tree(PointSet([[0, 0], [0, 0]]))


def test_tree_determinism():
    points = gen_uniform(77, 3, 9)
    t1 = build_tree(points)
    t2 = build_tree(points)
    assert np.array_equal(t1.lo, t2.lo) and np.array_equal(t1.left, t2.left)


def test_partition_components_trivial_budgets():
    points = gen_uniform(17, 2, 1)
    tree = build_tree(points)
    roots, cut = partition_components(tree, 2 * points.n - 1)
    assert roots.tolist() == [0]
    roots1, cut1 = partition_components(tree, 1)
    assert roots1.shape[0] == tree.node_count  # every node its own component


def test_partition_components_nine_point_balanced():
    # 9 evenly spaced collinear points build a near-balanced 17-node tree
    points = PointSet(np.column_stack([np.arange(9.0), np.zeros(9)]))
    tree = build_tree(points)
    roots, cut = partition_components(tree, 5)
    sizes = np.bincount(_component_of(tree, cut), minlength=roots.shape[0])
    assert np.all(sizes[sizes > 0] <= 5)
    assert roots.shape[0] <= int(4 * (17 / 5))


def _component_of(tree, cut):
    from avgstretch._kernels import kernels
    return kernels.fst_components(tree.left, tree.right, cut)


def test_k_partition_collinear_single_ball():
    points = PointSet([[0, 0], [1, 0], [2, 0]])
    part = k_partition(points, 3)
    assert part.n_balls == 1
    assert np.all(part.assignment == 0)


def test_k_partition_three_point_ball():
    part = k_partition(PointSet([[0, 0], [4, 0], [4, 3]]), 5)
    assert part.n_balls == 1
    assert np.allclose(part.centers[0], [2, 1.5])
    assert part.radii[0] == pytest.approx(2.5)


def test_k_partition_64_points():
    points = gen_uniform(64, 2, 4)
    part = k_partition(points, 8)
    assert part.n_balls <= 32
    assert part.counts.max() <= 8
    assert part.alpha <= 4.0


@pytest.mark.parametrize("seed,k", [(0, 4), (1, 16), (2, 64), (3, 5), (4, 2)])
def test_partition_properties_exact(seed, k):
    points = gen_uniform(512, 2, seed)
    part = k_partition(points, k)
    # property: every point inside its assigned ball
    d = np.sqrt(np.sum((points.coords - part.centers[part.assignment]) ** 2, axis=1))
    assert np.all(d <= part.radii[part.assignment] + 1e-9)
    # property: at most k points per ball
    assert part.counts.max() <= k
    assert np.sum(part.counts) == points.n
    # ball-count bound
    assert part.alpha <= 4.0
    # sorted by radius
    assert np.all(np.diff(part.radii) >= 0)


def test_partition_determinism():
    points = gen_uniform(300, 2, 8)
    p1 = k_partition(points, 7)
    p2 = k_partition(points, 7)
    assert np.array_equal(p1.assignment, p2.assignment)
    assert np.array_equal(p1.radii, p2.radii)


def test_probe_properties_empty_and_single():
    points = PointSet([[0, 0], [1, 0], [2, 0]])
    part = k_partition(points, 3)
    empty = probe_properties(part, points, [])
    assert empty.max_overlap == 0 and empty.max_density == 0.0
    single = probe_properties(part, points,
                              [(part.centers[0], float(part.radii[0]))])
    assert single.overlap_counts[0] in (0, 1)


def test_probe_properties_against_brute_force(rng):
    points = gen_uniform(600, 2, 11)
    part = k_partition(points, 16)
    probes = [(rng.random(2), float(r)) for r in rng.random(50) * 0.5 + 1e-3]
    rep = probe_properties(part, points, probes)
    for t, (p, r) in enumerate(probes):
        dc = np.sqrt(np.sum((part.centers - p) ** 2, axis=1))
        expect4 = np.sum((part.radii >= r) & (part.radii < 2 * r) & (dc <= part.radii))
        assert rep.overlap_counts[t] == expect4
        dp = np.sqrt(np.sum((points.coords - p) ** 2, axis=1))
        big = part.radii[part.assignment] >= r
        assert rep.density_ratios[t] == pytest.approx(
            np.sum((dp <= r) & big) / part.k)


def test_partition_csv_dump(tmp_path):
    points = gen_uniform(32, 2, 2)
    part = k_partition(points, 4)
    out = tmp_path / "partition.csv"
    with open(out, "w") as fh:
        part.dump_csv(fh)
    lines = out.read_text().strip().splitlines()
    assert len(lines) == part.n_balls
    first = lines[0].split(",")
    assert int(first[0]) == 0 and len(first) == 2 + points.d
