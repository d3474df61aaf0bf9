"""Shared oracles for the test suite.

The oracles here deliberately avoid the library's own code paths: dense
Floyd-Warshall for shortest paths, vectorized numpy scans for range
queries, and a quadratic Prim for spanning trees.
"""

import numpy as np
import pytest

from avgstretch.geometry import PointSet


def floyd_warshall(n, eu, ev, w):
    """Dense all-pairs shortest paths; inf where unreachable."""
    dist = np.full((n, n), np.inf)
    np.fill_diagonal(dist, 0.0)
    dist[eu, ev] = np.minimum(dist[eu, ev], w)
    dist[ev, eu] = dist[eu, ev]
    for k in range(n):
        np.minimum(dist, dist[:, k:k + 1] + dist[k:k + 1, :], out=dist)
    return dist


def asf_oracle(graph, points):
    """Average and worst stretch straight from the Floyd-Warshall matrix."""
    n = points.n
    dist = floyd_warshall(n, graph.eu, graph.ev, graph.w)
    diff = points.coords[:, None, :] - points.coords[None, :, :]
    euc = np.sqrt(np.sum(diff * diff, axis=2))
    iu, iv = np.triu_indices(n, 1)
    ratios = dist[iu, iv] / euc[iu, iv]
    return float(np.mean(ratios)), float(np.max(ratios))


def prim_mst(points: PointSet):
    """Quadratic Prim over the complete Euclidean graph: (eu, ev) arrays."""
    n = points.n
    coords = points.coords
    in_tree = np.zeros(n, bool)
    best = np.full(n, np.inf)
    link = np.full(n, -1, np.int64)
    in_tree[0] = True
    d0 = np.sqrt(np.sum((coords - coords[0]) ** 2, axis=1))
    best = d0
    link[:] = 0
    best[0] = np.inf
    eu, ev = [], []
    for _ in range(n - 1):
        v = int(np.argmin(best))
        eu.append(link[v])
        ev.append(v)
        in_tree[v] = True
        dv = np.sqrt(np.sum((coords - coords[v]) ** 2, axis=1))
        closer = (~in_tree) & (dv < best)
        best[closer] = dv[closer]
        link[closer] = v
        best[v] = np.inf
    return np.array(eu, np.int64), np.array(ev, np.int64)


def brute_count(coords, lo, hi):
    return int(np.sum(np.all((coords >= lo) & (coords <= hi), axis=1)))


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20240811)
