"""Graph drawing aesthetics criteria and the degradation guard.

Five criteria, each normalized to [0, 1] (1 is best):

* ``crossings`` -- one minus the drawn crossing count over the upper
  bound for the graph's degree sequence,
* ``angular_resolution`` -- mean over nodes of the smallest incident
  edge angle relative to the ideal even fan,
* ``edge_bends`` -- constant 1 here, edges are straight segments,
* ``edge_length_uniformity`` -- one minus the coefficient of variation
  of edge lengths,
* ``symmetry`` -- how well the per-layer spans mirror about the
  drawing's vertical midline.

The enhancement phases accept a modified layout only while its average
stays within a relative tolerance of the initial layout's average; the
:func:`guard` predicate implements that test.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, Mapping, Tuple

import numpy as np

from .sugiyama import Layout, layout_crossings

CRITERIA = ("crossings", "angular_resolution", "edge_bends",
            "edge_length_uniformity", "symmetry")


@dataclass(frozen=True)
class AestheticsScore:
    per_criterion: Dict[str, float]
    average: float


def count_edge_crossings(layout: Layout) -> int:
    """Drawn crossings; pairs of edges sharing a node never count."""
    return layout_crossings(layout)


def weighted_average(values: Mapping[str, float],
                     weights: Mapping[str, float] | None = None) -> float:
    if weights is None:
        weights = {k: 1.0 for k in values}
    total = sum(weights.get(k, 0.0) for k in values)
    if total <= 0:
        raise ValueError("criterion weights sum to zero")
    return sum(values[k] * weights.get(k, 0.0) for k in values) / total


def _crossings_value(layout: Layout) -> float:
    m = len(layout.graph.edges)
    if m < 2:
        return 1.0
    degree: Dict[str, int] = {}
    for src, dst in layout.graph.edges:
        degree[src] = degree.get(src, 0) + 1
        degree[dst] = degree.get(dst, 0) + 1
    adjacent_pairs = sum(d * (d - 1) // 2 for d in degree.values())
    c_max = m * (m - 1) // 2 - adjacent_pairs
    if c_max <= 0:
        return 1.0
    value = 1.0 - count_edge_crossings(layout) / c_max
    return min(1.0, max(0.0, value))


def _angular_value(layout: Layout) -> float:
    incident: Dict[str, list] = {n: [] for n in layout.graph.nodes}
    for src, dst in layout.graph.edges:
        incident[src].append(dst)
        incident[dst].append(src)
    scores = []
    for node in sorted(layout.graph.nodes):
        others = incident[node]
        if len(others) < 2:
            continue
        x0, y0 = layout.positions[node]
        angles = sorted(math.atan2(layout.positions[o][1] - y0,
                                   layout.positions[o][0] - x0)
                        for o in others)
        gaps = [angles[i + 1] - angles[i] for i in range(len(angles) - 1)]
        gaps.append(2.0 * math.pi - (angles[-1] - angles[0]))
        ideal = 2.0 * math.pi / len(others)
        scores.append(min(gaps) / ideal)
    return float(np.mean(scores)) if scores else 1.0


def _uniformity_value(layout: Layout) -> float:
    seg = layout.edge_segments()
    if len(seg) < 2:
        return 1.0
    lengths = np.hypot(seg[:, 2] - seg[:, 0], seg[:, 3] - seg[:, 1])
    mean = lengths.mean()
    if mean <= 0:
        return 1.0
    return float(max(0.0, 1.0 - lengths.std() / mean))


def _symmetry_value(layout: Layout, tolerance: float) -> float:
    """Mirror balance of the layer spans about the drawing's midline.

    Each layer contributes how close the center of its horizontal span
    sits to the drawing's vertical midline: a drift up to ``tolerance``
    counts as perfectly mirrored, and beyond that the contribution falls
    off linearly, reaching zero when the drift spans the drawing's half
    width.  Centering every layer is exactly what the initial grid does,
    so fresh layouts score 1.0.  A cut that moves the two sides of an
    interior axis apart keeps straddling layers centered, while layers
    wholly on one side pay in proportion to how far they drift relative
    to the drawing -- a gradual loss instead of a cliff, matching how
    noticeable the imbalance actually is.
    """
    centers = []
    for _, nodes in layout.layers().items():
        xs = [layout.positions[n][0] for n in nodes]
        centers.append((min(xs) + max(xs)) / 2.0)
    if not centers:
        return 1.0
    xs_all = [p[0] for p in layout.positions.values()]
    mid = (min(xs_all) + max(xs_all)) / 2.0
    half_width = (max(xs_all) - min(xs_all)) / 2.0
    reach = max(half_width, tolerance)
    if reach <= 0:
        return 1.0
    scores = [max(0.0, 1.0 - max(0.0, abs(c - mid) - tolerance) / reach)
              for c in centers]
    return float(np.mean(scores))


def score_aesthetics(layout: Layout,
                     weights: Mapping[str, float] | None = None,
                     mirror_tolerance: float = 40.0) -> AestheticsScore:
    """Score all five criteria and their weighted average.

    ``mirror_tolerance`` is the matching radius of the symmetry
    criterion, half the horizontal node spacing by convention: layer
    centers within this distance of the drawing's vertical midline
    count as perfectly mirrored, and farther drifts are rated against
    the drawing's half width.
    """
    per: Dict[str, float] = {
        "crossings": _crossings_value(layout),
        "angular_resolution": _angular_value(layout),
        "edge_bends": 1.0,
        "edge_length_uniformity": _uniformity_value(layout),
        "symmetry": _symmetry_value(layout, mirror_tolerance),
    }
    return AestheticsScore(per, weighted_average(per, weights))


def guard(before: AestheticsScore, after: AestheticsScore,
          tolerance: float) -> bool:
    """True iff ``after`` retains at least ``1 - tolerance`` of ``before``."""
    return after.average >= before.average * (1.0 - tolerance)
