"""Point-set generators, file formats, experiment harness and slope fits.

The adversarial generators reproduce the two instance families that
motivate the construction: exponentially growing grids (why clusters get
wired to a dense nearby region) and a dense-cluster trap (why the
representative inside that region must be chosen by smallest region
index rather than density alone), plus the two-column set whose average
stretch cannot beat 1 + Omega(1/sqrt(n)) on any O(n)-edge graph.
"""

from __future__ import annotations

import json
import math
import time
import warnings
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from . import construct, evaluate
from .errors import InvalidInputError, ParseError
from .geometry import PointSet
from .spanners import Graph

_GOLDEN_ANGLE = math.pi * (3.0 - math.sqrt(5.0))


# ---------------------------------------------------------------------------
# generators


def gen_uniform(n: int, d: int, seed: int) -> PointSet:
    """n i.i.d. uniform points in [0,1]^d; collisions redrawn."""
    if n < 1 or d < 1:
        raise InvalidInputError("gen_uniform needs n >= 1 and d >= 1")
    rng = np.random.default_rng(seed)
    pts = rng.random((n, d))
    while True:
        order = np.lexsort(pts.T)
        dup = np.flatnonzero(np.all(pts[order][1:] == pts[order][:-1], axis=1))
        if dup.shape[0] == 0:
            break
        pts[order[dup + 1]] = rng.random((dup.shape[0], d))
    return PointSet(pts)


def gen_exp_grids(k: int, count: int) -> PointSet:
    """Square grids of floor(sqrt(k))^2 points, grid i centered at
    (2^(i+1)-1, 0) with side 2^i."""
    if k < 1 or count < 1:
        raise InvalidInputError("gen_exp_grids needs k >= 1 and count >= 1")
    if count > 1000:
        raise InvalidInputError("2^count overflows double precision")
    g = int(math.isqrt(k))
    pts = []
    for i in range(count):
        cx = 2.0 ** (i + 1) - 1.0
        side = 2.0 ** i
        if g == 1:
            axes = np.array([0.0])
        else:
            axes = np.linspace(-side / 2.0, side / 2.0, g)
        xx, yy = np.meshgrid(cx + axes, axes)
        pts.append(np.column_stack([xx.ravel(), yy.ravel()]))
    return PointSet(np.vstack(pts))


def gen_two_columns(n: int) -> PointSet:
    """Points (0, i) and (n/2, i) for i in 1..n/2; n must be even."""
    if n < 2 or n % 2:
        raise InvalidInputError("gen_two_columns needs even n >= 2")
    h = n // 2
    ys = np.arange(1, h + 1, dtype=np.float64)
    a = np.column_stack([np.zeros(h), ys])
    b = np.column_stack([np.full(h, float(h)), ys])
    return PointSet(np.vstack([a, b]))


def gen_cluster_trap(n: int) -> PointSet:
    """Dense central cluster plus sparse rings at doubling radii and a few
    decoy points, laid out so a density-only representative choice detours
    the cluster while the region-index rule does not.

    Index layout: decoys first (so an "any point of E_i" rule grabs one),
    then ring points outside-in, then the disc.  The disc holds exactly
    ceil(n/2) points packed with a quartic radial law, so any small box
    around its center still captures well over half of them; rings carry
    about ten points each so arcs of two or three consecutive ring points
    span a wide angle and their scaled regions reach the disc.
    """
    if n < 8:
        raise InvalidInputError("gen_cluster_trap needs n >= 8")
    ln_n = math.log(n)
    c0 = max(2.0, (n / ln_n) ** 0.2)  # nominal default scale factor
    n_disc = (n + 1) // 2
    m = max(2, int(math.ceil(math.log2(n))))
    n_ring = n - n_disc - m
    ring_size = 10
    nrings = max(2, n_ring // ring_size)
    r_min = 2.0 ** (-(nrings - 1))

    rows = []
    # decoys: opposite side of the rings, shallow to deep, indexed first
    levels = np.linspace(0, nrings - 1, m)
    for j in range(m):
        radius = 0.7 * (2.0 ** (-levels[j])) / c0
        ang = math.pi + 0.05 * math.sin(1.0 + j)
        rows.append([radius * math.cos(ang), radius * math.sin(ang)])
    # rings at doubling radii, golden-angle twist per ring
    base = np.arange(n_ring, dtype=np.int64)
    ring_of = base % nrings
    pos_in_ring = base // nrings
    for t in range(n_ring):
        i = int(ring_of[t])
        radius = 2.0 ** (-i)
        ang = pos_in_ring[t] * (2.0 * math.pi / ring_size) + i * _GOLDEN_ANGLE
        rows.append([radius * math.cos(ang), radius * math.sin(ang)])
    # dense disc: quartic radial concentration at the origin
    delta = r_min / (64.0 * c0 * c0)
    j = np.arange(n_disc, dtype=np.float64)
    rad = delta * ((j + 1.0) / n_disc) ** 4
    ang = j * _GOLDEN_ANGLE
    disc = np.column_stack([rad * np.cos(ang), rad * np.sin(ang)])
    return PointSet(np.vstack([np.array(rows), disc]))


GENERATORS = {
    "uniform": gen_uniform,
    "exp-grids": gen_exp_grids,
    "two-columns": gen_two_columns,
    "cluster-trap": gen_cluster_trap,
}


# ---------------------------------------------------------------------------
# file formats


def write_points(points: PointSet, fh) -> None:
    fh.write("# d=%d\n" % points.d)
    for row in points.coords:
        fh.write(",".join(repr(float(c)) for c in row))
        fh.write("\n")


def read_points(fh) -> PointSet:
    d = None
    rows = []
    for lineno, raw in enumerate(fh, start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if body.startswith("d="):
                try:
                    d = int(body[2:])
                except ValueError:
                    raise ParseError("bad dimension header", lineno)
            continue
        parts = line.split(",")
        try:
            vals = [float(p) for p in parts]
        except ValueError:
            raise ParseError("malformed coordinate", lineno)
        if d is None:
            d = len(vals)
        if len(vals) != d:
            raise ParseError("expected %d coordinates, got %d" % (d, len(vals)), lineno)
        rows.append(vals)
    if not rows:
        return PointSet(np.zeros((0, d if d else 1)))
    return PointSet(np.array(rows))


def write_graph(graph: Graph, fh) -> None:
    fh.write("# n=%d\n" % graph.n)
    for u, v, w in zip(graph.eu, graph.ev, graph.w):
        fh.write("%d %d %r\n" % (int(u), int(v), float(w)))


def read_graph(fh, points: Optional[PointSet] = None) -> Graph:
    n = None
    us, vs = [], []
    for lineno, raw in enumerate(fh, start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if body.startswith("n="):
                try:
                    n = int(body[2:])
                except ValueError:
                    raise ParseError("bad vertex-count header", lineno)
            continue
        parts = line.split()
        if len(parts) != 3:
            raise ParseError("expected 'u w weight'", lineno)
        try:
            us.append(int(parts[0]))
            vs.append(int(parts[1]))
            float(parts[2])
        except ValueError:
            raise ParseError("malformed edge", lineno)
        if us[-1] < 0 or vs[-1] < 0:
            raise ParseError("negative vertex id", lineno)
    u = np.array(us, np.int64) if us else np.zeros(0, np.int64)
    v = np.array(vs, np.int64) if vs else np.zeros(0, np.int64)
    if points is not None:
        return Graph.from_edges(points, u, v)
    if n is None:
        n = int(max(u.max(), v.max()) + 1) if us else 0
    w = np.zeros(u.shape[0])
    return Graph(n, np.minimum(u, v), np.maximum(u, v), w)


# ---------------------------------------------------------------------------
# experiments


@dataclass
class RunRecord:
    n: int
    d: int
    generator: str
    variant: str
    seed: int
    k: int
    c: float
    epsilon: float
    gamma: float
    n_balls: int
    edges_roads: int
    edges_highways: int
    edges_representative: int
    edges_total: int
    asf: float
    asf_stderr: Optional[float]
    strf: Optional[float]
    eval_method: str
    eval_pairs: int
    build_seconds: float
    eval_seconds: float

    def to_kv(self) -> str:
        lines = ["[run]"]
        for key, val in asdict(self).items():
            if isinstance(val, float):
                lines.append("%s: %r" % (key, val))
            else:
                lines.append("%s: %s" % (key, val))
        return "\n".join(lines) + "\n"


_FLOAT_FIELDS = {"c", "epsilon", "gamma", "asf", "asf_stderr", "strf",
                 "build_seconds", "eval_seconds"}
_STR_FIELDS = {"generator", "variant", "eval_method"}


def parse_records(text: str):
    records = []
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line == "[run]":
            if current is not None:
                records.append(RunRecord(**current))
            current = {}
            continue
        if current is None:
            raise ParseError("record field outside [run] section", lineno)
        if ":" not in line:
            raise ParseError("expected 'key: value'", lineno)
        key, val = line.split(":", 1)
        key = key.strip()
        val = val.strip()
        if key in _STR_FIELDS:
            current[key] = val
        elif key in _FLOAT_FIELDS:
            current[key] = None if val == "None" else float(val)
        else:
            current[key] = int(val)
    if current is not None:
        records.append(RunRecord(**current))
    return records


def write_report(records, fh) -> None:
    for rec in records:
        fh.write(rec.to_kv())
        fh.write("\n")


@dataclass
class ExperimentSpec:
    generator: str = "uniform"
    gen_params: dict = field(default_factory=dict)
    sizes: list = field(default_factory=lambda: [1024])
    d: int = 2
    variant: str = "sampled"
    seeds: list = field(default_factory=lambda: [0])
    exact_budget: int = 4096
    sample_multiplier: int = 200
    rep_rule: str = "careful"

    @classmethod
    def from_json(cls, fh) -> "ExperimentSpec":
        data = json.load(fh)
        known = {f for f in cls.__dataclass_fields__}
        bad = set(data) - known
        if bad:
            raise InvalidInputError("unknown experiment keys: %s" % sorted(bad))
        spec = cls(**data)
        if sorted(spec.sizes) != list(spec.sizes):
            raise InvalidInputError("experiment sizes must be ascending")
        if not spec.seeds:
            raise InvalidInputError("experiment needs at least one seed")
        return spec


def _generate(spec: ExperimentSpec, n: int, seed: int) -> PointSet:
    if spec.generator == "uniform":
        return gen_uniform(n, spec.d, seed)
    if spec.generator == "exp-grids":
        k = spec.gen_params.get("k", 64)
        return gen_exp_grids(k, max(1, n // max(1, int(math.isqrt(k)) ** 2)))
    if spec.generator == "two-columns":
        return gen_two_columns(n)
    if spec.generator == "cluster-trap":
        return gen_cluster_trap(n)
    raise InvalidInputError("unknown generator %r" % spec.generator)


def run_single(points: PointSet, params: construct.Params, generator: str = "custom",
               exact_budget: int = 4096, sample_multiplier: int = 200,
               rep_rule: str = "careful", eval_seed: int = 0) -> tuple:
    """Build + evaluate one instance; returns (record, build result)."""
    t0 = time.perf_counter()
    result = construct.build(points, params, rep_rule=rep_rule)
    build_s = time.perf_counter() - t0
    t0 = time.perf_counter()
    if points.n <= exact_budget:
        rep = evaluate.average_stretch_exact(result.graph, points)
    else:
        rep = evaluate.average_stretch_sampled(
            result.graph, points, sample_multiplier * points.n, seed=eval_seed)
    eval_s = time.perf_counter() - t0
    rec = RunRecord(
        n=points.n, d=points.d, generator=generator, variant=params.variant,
        seed=params.seed, k=params.k, c=params.c, epsilon=params.epsilon,
        gamma=params.gamma, n_balls=result.report.n_balls,
        edges_roads=result.report.edges_roads,
        edges_highways=result.report.edges_highways,
        edges_representative=result.report.edges_representative,
        edges_total=result.report.edges_total,
        asf=rep.asf, asf_stderr=rep.stderr, strf=rep.strf,
        eval_method=rep.method, eval_pairs=rep.pair_count,
        build_seconds=build_s, eval_seconds=eval_s)
    return rec, result


def run_experiment(spec: ExperimentSpec):
    """All (size, seed) runs of the spec; failed runs warn and are skipped."""
    records = []
    for n in spec.sizes:
        for seed in spec.seeds:
            try:
                points = _generate(spec, n, seed)
                params = construct.select_parameters(
                    points.n, points.d, spec.variant, seed=seed)
                rec, _ = run_single(points, params, generator=spec.generator,
                                    exact_budget=spec.exact_budget,
                                    sample_multiplier=spec.sample_multiplier,
                                    rep_rule=spec.rep_rule, eval_seed=seed + 1)
                records.append(rec)
            except Exception as exc:  # noqa: BLE001 - record and continue
                warnings.warn("run n=%d seed=%d failed: %s" % (n, seed, exc))
    return records


def fit_slope(records, min_points: int = 2):
    """Least-squares slope of seed-averaged log(asf-1) against log n.

    Records with asf <= 1 + 1e-12 are excluded with a warning; an error
    is raised when everything is excluded.  Returns (slope, intercept, r2).
    """
    usable = [r for r in records if r.asf > 1.0 + 1e-12]
    skipped = len(records) - len(usable)
    if skipped:
        warnings.warn("fit_slope: excluded %d records with asf at 1" % skipped)
    if len(usable) < 3 or not usable:
        raise InvalidInputError("fit_slope needs at least 3 usable records")
    by_n = {}
    for rec in usable:
        by_n.setdefault(rec.n, []).append(math.log(rec.asf - 1.0))
    if len(by_n) < min_points:
        raise InvalidInputError("fit_slope needs records at >= %d sizes" % min_points)
    xs = np.array(sorted(by_n))
    ys = np.array([np.mean(by_n[n]) for n in sorted(by_n)])
    lx = np.log(xs)
    slope, intercept = np.polyfit(lx, ys, 1)
    pred = slope * lx + intercept
    ss_res = float(np.sum((ys - pred) ** 2))
    ss_tot = float(np.sum((ys - ys.mean()) ** 2))
    r2 = 1.0 if ss_tot < 1e-30 else 1.0 - ss_res / ss_tot
    return float(slope), float(intercept), float(r2)
