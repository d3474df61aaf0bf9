"""Sparse geometric graphs with average stretch factor close to 1.

For any finite point set in R^d the construction returns a graph with
O(n) edges whose average stretch factor tends to 1 as n grows: a
2-spanner of all points, a finer spanner over cluster hubs, and one edge
per point into a dense region near its cluster.  The package also
measures average/worst-case stretch exactly or by pair sampling and
ships the experiment harness behind the `avgstretch` CLI.
"""

from ._kernels import active_backend
from .construct import Params, build, select_parameters
from .errors import DisconnectedGraphError, InvalidInputError, ParseError
from .evaluate import (average_stretch_exact, average_stretch_sampled,
                       shortest_paths_from, stretch_histogram, worst_stretch)
from .fairsplit import build_tree, k_partition, partition_components, probe_properties
from .geometry import AABox, Ball, Point, PointSet, distance, enclosing_ball
from .rangetree import build_count_min, build_dual, count, min_index, smallest_containing_box
from .spanners import Graph, build_hub_spanner, build_spanner, verify_stretch
from .workbench import (ExperimentSpec, RunRecord, fit_slope, gen_cluster_trap,
                        gen_exp_grids, gen_two_columns, gen_uniform, run_experiment)

__version__ = "0.1.0"

__all__ = [
    "AABox", "Ball", "DisconnectedGraphError", "ExperimentSpec", "Graph",
    "InvalidInputError", "Params", "ParseError", "Point", "PointSet",
    "RunRecord", "active_backend", "average_stretch_exact",
    "average_stretch_sampled", "build", "build_count_min", "build_dual",
    "build_hub_spanner", "build_spanner", "build_tree", "count", "distance",
    "enclosing_ball", "fit_slope", "gen_cluster_trap", "gen_exp_grids",
    "gen_two_columns", "gen_uniform", "k_partition", "min_index",
    "partition_components", "probe_properties", "run_experiment",
    "select_parameters", "shortest_paths_from", "smallest_containing_box",
    "stretch_histogram", "verify_stretch", "worst_stretch",
]
