import math

import numpy as np
import pytest

from avgstretch.errors import InvalidInputError
from avgstretch.fairsplit import k_partition
from avgstretch.geometry import PointSet
from avgstretch.spanners import (Graph, build_hub_spanner, build_spanner,
                                 cone_count, hub_gamma, verify_stretch)
from avgstretch.workbench import gen_uniform


def test_trivial_sizes():
    one = build_spanner(PointSet([[0.5, 0.5]]), 2.0)
    assert one.edge_count == 0
    two = build_spanner(PointSet([[0, 0], [3, 4]]), 2.0)
    assert two.edge_count == 1
    assert two.w[0] == pytest.approx(5.0)
    assert verify_stretch(two, PointSet([[0, 0], [3, 4]])) == pytest.approx(1.0)


def test_invalid_stretch_bound():
    with pytest.raises(InvalidInputError):
        build_spanner(PointSet([[0, 0], [1, 1]]), 1.0)


@pytest.mark.parametrize("t", [2.0, 1.5, 1.0625])
def test_theta_spanner_certified(t):
    for seed in range(4):
        points = gen_uniform(300, 2, seed)
        g = build_spanner(points, t)
        assert verify_stretch(g, points) <= t + 1e-9


def test_wspd_spanner_certified_d3():
    for seed in range(3):
        points = gen_uniform(150, 3, seed)
        g = build_spanner(points, 2.0)
        assert verify_stretch(g, points) <= 2.0 + 1e-9


def test_d1_chain():
    points = PointSet([[3.0], [1.0], [2.0]])
    g = build_spanner(points, 1.5)
    assert g.edge_count == 2
    assert verify_stretch(g, points) == pytest.approx(1.0)


def test_edge_density_stays_bounded():
    # edges per point should not grow as n doubles (constant per t, d)
    dens = []
    for n in (250, 500, 1000, 2000):
        points = gen_uniform(n, 2, 7)
        g = build_spanner(points, 2.0)
        dens.append(g.edge_count / n)
    assert max(dens) / min(dens) <= 1.5
    assert max(dens) <= cone_count(2.0)


def test_graph_invariants(rng):
    points = gen_uniform(200, 2, 3)
    g = build_spanner(points, 2.0)
    assert np.all(g.eu < g.ev)
    pairs = set(zip(g.eu.tolist(), g.ev.tolist()))
    assert len(pairs) == g.edge_count  # simple: no parallel edges
    expect = np.sqrt(np.sum((points.coords[g.eu] - points.coords[g.ev]) ** 2, axis=1))
    assert np.array_equal(g.w, expect)  # weights equal endpoint distances
    indptr, indices, w = g.csr()
    assert indptr[-1] == 2 * g.edge_count  # symmetric adjacency


def test_hub_gamma_formulas():
    assert hub_gamma(16, 2) == pytest.approx(1 / 16)
    assert 1 + hub_gamma(16, 2) == pytest.approx(1.0625)
    assert hub_gamma(16, 3) == pytest.approx(0.25)
    got = hub_gamma(16, 3, fast=True, n_total=2 ** 10)
    assert got == pytest.approx(math.sqrt(math.log(2 ** 10) / 16))
    assert got == pytest.approx(0.658, abs=2e-3)
    # for d=2 the fast and exact slacks coincide
    assert hub_gamma(9, 2, fast=True, n_total=4096) == hub_gamma(9, 2)


def test_hub_spanner_on_partition_hubs():
    points = gen_uniform(400, 2, 5)
    part = k_partition(points, 16)
    hubs = PointSet(points.coords[[m[0] for m in part.cluster_points]])
    g = build_hub_spanner(hubs, 16, d=2)
    assert verify_stretch(g, hubs) <= 1.0625 + 1e-9


def test_verify_stretch_examples(rng):
    pts = gen_uniform(30, 2, 1)
    iu, iv = np.triu_indices(30, 1)
    complete = Graph.from_edges(pts, iu, iv)
    assert verify_stretch(complete, pts) == pytest.approx(1.0)

    square = PointSet([[0, 0], [1, 0], [1, 1], [0, 1]])
    cycle = Graph.from_edges(square, np.array([0, 1, 2, 3]), np.array([1, 2, 3, 0]))
    assert verify_stretch(cycle, square) == pytest.approx(math.sqrt(2))

    line = PointSet([[0, 0], [1, 0], [2, 0]])
    path = Graph.from_edges(line, np.array([0, 1]), np.array([1, 2]))
    assert verify_stretch(path, line) == pytest.approx(1.0)


def test_verify_stretch_disconnected_is_infinite():
    pts = PointSet([[0, 0], [1, 0], [5, 0], [6, 0]])
    g = Graph.from_edges(pts, np.array([0, 2]), np.array([1, 3]))
    assert verify_stretch(g, pts) == math.inf
    assert not g.is_connected()


def test_edge_list_export(tmp_path):
    points = gen_uniform(20, 2, 0)
    g = build_spanner(points, 2.0)
    path = tmp_path / "edges.txt"
    with open(path, "w") as fh:
        from avgstretch.spanners import write_edge_list
        write_edge_list(g, fh)
    lines = path.read_text().strip().splitlines()
    assert len(lines) == g.edge_count
    u, v, w = lines[0].split()
    assert int(u) < int(v) and float(w) > 0
