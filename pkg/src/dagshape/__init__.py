"""Shape-preserving comparison layouts for directed acyclic graphs.

The package lays out a base graph and an alternative in one shared
(foresighted) drawing, measures how recognizable the outline of each
restricted drawing is, and enhances the drawing so that changes near
the outline visibly reshape it while interior changes gain surrounding
white space -- without breaking the mental map or degrading aesthetics
beyond a guarded tolerance.
"""

from .aesthetics import (CRITERIA, AestheticsScore, count_edge_crossings,
                         guard, score_aesthetics, weighted_average)
from .config import (ConfigError, RunConfig, format_config, load_config,
                     parse_config, resolve)
from .enhance import (INNER_APPROACHES, Change, ChangeOutcome, EnhanceConfig,
                      EnhancementOutcome, IncreaseRecord, PipelineReport,
                      WhiteSpaceCircles, change_circles, changes_of,
                      classify_changes, enhance_changes, enhance_inner,
                      enhance_outer_edge, enhance_outer_node,
                      enhance_outer_node_split, increase_outer_relevant,
                      is_outer_shape_relevant, run_pipeline)
from .geometry import (HullConfig, HullPolygon, InscribedCircle, concave_hull,
                       convex_hull_area, hausdorff_distance,
                       intersection_over_union, largest_inscribed_circle,
                       normalized_hausdorff, white_space_faces)
from .harness import (CHANGE_TYPES, MULTI_CHANGE_TYPES, SINGLE_CHANGE_TYPES,
                      EvalReport, PairRow, aggregate, evaluate, evaluate_pair,
                      generate_alternatives, generate_base_graphs,
                      relative_whitespace)
from .model import (ChangeSet, DirectedGraph, Edge, GraphError, Supergraph,
                    apply_changes, build_supergraph, diff, dump_graph_json,
                    load_graph_json, topological_order)
from .render import (load_layout_json, membership_colors, render_svg,
                     save_layout_json, shared_viewbox)
from .report import write_report
from .sugiyama import (Layout, LayoutConfig, assign_layers, layout_crossings,
                       layout_graph, layout_supergraph, restrict_layout)

__version__ = "0.1.0"

__all__ = [
    "AestheticsScore", "CHANGE_TYPES", "CRITERIA", "Change", "ChangeOutcome",
    "ChangeSet", "ConfigError", "DirectedGraph", "Edge", "EnhanceConfig",
    "EnhancementOutcome", "EvalReport", "GraphError", "HullConfig",
    "HullPolygon", "INNER_APPROACHES", "IncreaseRecord", "InscribedCircle",
    "Layout", "LayoutConfig", "MULTI_CHANGE_TYPES", "PairRow",
    "PipelineReport", "RunConfig", "SINGLE_CHANGE_TYPES", "Supergraph",
    "WhiteSpaceCircles", "aggregate", "apply_changes", "assign_layers",
    "build_supergraph", "change_circles", "changes_of", "classify_changes",
    "concave_hull", "convex_hull_area", "count_edge_crossings", "diff",
    "dump_graph_json", "enhance_changes", "enhance_inner",
    "enhance_outer_edge", "enhance_outer_node", "enhance_outer_node_split",
    "evaluate", "evaluate_pair", "format_config", "generate_alternatives",
    "generate_base_graphs", "guard", "hausdorff_distance",
    "increase_outer_relevant", "intersection_over_union",
    "is_outer_shape_relevant", "largest_inscribed_circle", "layout_crossings",
    "layout_graph", "layout_supergraph", "load_config", "load_graph_json",
    "load_layout_json", "membership_colors", "normalized_hausdorff",
    "parse_config", "relative_whitespace", "render_svg", "resolve",
    "restrict_layout", "run_pipeline", "save_layout_json", "score_aesthetics",
    "shared_viewbox", "topological_order", "weighted_average",
    "white_space_faces", "write_report",
]
