"""Shape-change enhancement of a shared comparison layout.

The workflow draws the union of a base DAG and an alternative once (the
foresighted initialization), then amplifies the geometric footprint of
every change so the two restricted drawings differ visibly in outline:

* a pre-phase moves buried leaves (with their first-parent chains) to a
  flank of the drawing, so more changes sit on the hull,
* changes on the hull are pushed outward: extreme nodes move sideways,
  interior hull nodes split the drawing apart, hull edges are stretched
  by splitting around an axis near their origin,
* interior changes enlarge the white space around them until the two
  flanking inscribed circles are big enough to perceive, with four
  displacement approaches (horizontal or both axes, absolute or
  distance-proportional).

Every iteration is reverted if the average aesthetics score drops more
than the configured tolerance below the initialization score, so the
enhanced drawing never degrades past that bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from shapely.geometry import LineString, Point, Polygon

from .aesthetics import (AestheticsScore, count_edge_crossings, guard,
                         score_aesthetics)
from .geometry import (HullConfig, HullPolygon, InscribedCircle, concave_hull,
                       convex_hull_area, hausdorff_distance,
                       largest_inscribed_circle, white_space_faces)
from .model import ChangeSet, DirectedGraph, Edge, Supergraph, build_supergraph, diff
from .sugiyama import (Layout, LayoutConfig, assign_coordinates, barycenter_sweeps,
                       layout_supergraph, restrict_layout)

INNER_APPROACHES = ("ws1", "ws2", "ws3", "ws4")

REASON_THRESHOLD = "threshold-met"
REASON_CAP = "iteration-cap"
REASON_RESET = "aesthetics-reset"
REASON_NOT_APPLICABLE = "not-applicable"


@dataclass(frozen=True)
class EnhanceConfig:
    """Knobs of the enhancement pipeline."""

    layout: LayoutConfig = field(default_factory=LayoutConfig)
    hull: HullConfig = field(default_factory=HullConfig)
    outer_adaption: float = 80.0
    inner_adaption: float = 160.0
    hausdorff_threshold: float = 30.0 / 200.0
    whitespace_threshold: float = 0.05
    aesthetics_tolerance: float = 0.10
    # straight multi-layer edges tilt across node columns when the drawing
    # is pulled apart, which the averaged aesthetics guard barely notices;
    # this caps how many drawn crossings one enhancement may accumulate
    # before its iterations are rejected like guard failures
    crossing_tolerance: int = 24
    max_iterations: int = 10
    inner_approach: str = "ws3"
    circle_precision: float = 0.5

    @property
    def mirror_tolerance(self) -> float:
        return self.layout.horizontal_spacing / 2.0


@dataclass(frozen=True)
class Change:
    """One change event: a node (owning its changed edges) or a lone edge."""

    kind: str                       # "node" | "edge"
    element: Union[str, Edge]
    sign: str                       # "added" | "removed"
    owned_edges: Tuple[Edge, ...] = ()

    def anchor(self, layout: Layout) -> Tuple[float, float]:
        if self.kind == "node":
            return layout.positions[self.element]
        (u, v) = self.element
        (x1, y1), (x2, y2) = layout.positions[u], layout.positions[v]
        return ((x1 + x2) / 2.0, (y1 + y2) / 2.0)


@dataclass
class EnhancementOutcome:
    layout: Layout
    applied: bool
    iterations_used: int
    reason: str


@dataclass
class ChangeOutcome:
    change: Change
    route: str                      # outer-node | outer-split | outer-edge | inner
    applied: bool
    iterations_used: int
    reason: str


@dataclass
class IncreaseRecord:
    leaf: str
    direction: str
    moved: Tuple[str, ...]


@dataclass
class PipelineReport:
    supergraph: Supergraph
    layout: Layout
    base_layout: Layout
    alternative_layout: Layout
    initial_layout: Layout
    initial_score: AestheticsScore
    final_score: AestheticsScore
    increase_records: List[IncreaseRecord]
    outcomes: List[ChangeOutcome]


def changes_of(changeset: ChangeSet) -> List[Change]:
    """Split a change set into change events.

    A changed node owns its incident changed edges (an added node arrives
    with the edges that connect it); only edges between surviving nodes
    become standalone edge changes.
    """
    changed_nodes = changeset.changed_nodes()
    out: List[Change] = []
    for sign, nodes in (("added", changeset.added_nodes),
                        ("removed", changeset.removed_nodes)):
        for n in sorted(nodes):
            owned = tuple(sorted(e for e in changeset.changed_edges()
                                 if n in e))
            out.append(Change("node", n, sign, owned))
    for sign, edges in (("added", changeset.added_edges),
                        ("removed", changeset.removed_edges)):
        for e in sorted(edges):
            if e[0] in changed_nodes or e[1] in changed_nodes:
                continue
            out.append(Change("edge", e, sign))
    return out


def _score(layout: Layout, config: EnhanceConfig) -> AestheticsScore:
    return score_aesthetics(layout, mirror_tolerance=config.mirror_tolerance)


# ---------------------------------------------------------------------------
# hull relevance
# ---------------------------------------------------------------------------

def _without_change(layout: Layout, change: Change) -> Optional[Layout]:
    """The same drawing with the change's own geometry taken out.

    Removing a node takes its incident edges with it (they cannot be
    drawn without an endpoint).  Returns None when nothing would remain.
    """
    g = layout.graph
    if change.kind == "node":
        nodes = g.nodes - {change.element}
        if not nodes:
            return None
        edges = frozenset(e for e in g.edges if change.element not in e)
        positions = {n: layout.positions[n] for n in nodes}
        mental = {n: layout.mental_map[n] for n in nodes}
    else:
        nodes = g.nodes
        edges = g.edges - {tuple(change.element)}
        positions = dict(layout.positions)
        mental = dict(layout.mental_map)
    return Layout(DirectedGraph(nodes, edges), positions, mental)


def _relevant_with_hull(hull: HullPolygon, layout: Layout, change: Change,
                        config: EnhanceConfig) -> bool:
    reduced = _without_change(layout, change)
    if reduced is None:
        return True
    other = concave_hull(reduced, config.hull)
    mismatch = hull.raw_polygon.symmetric_difference(other.raw_polygon).area
    return mismatch > 1e-9 * max(1.0, hull.raw_polygon.area)


def is_outer_shape_relevant(layout: Layout,
                            element: Union[str, Edge],
                            config: EnhanceConfig | None = None) -> bool:
    """True iff the node or edge helps define the drawing's concave hull.

    Decided by recomputation: the hull is built with and without the
    element, and the element is relevant exactly when the two hulls
    differ.  An element that merely sits near the boundary -- or whose
    boundary samples coincide with other geometry, such as an edge
    ending on a hull node -- is not relevant: taking it out leaves the
    hull unchanged, so no displacement of it can deform the hull either.
    """
    config = config or EnhanceConfig()
    if isinstance(element, str):
        owned = tuple(sorted(e for e in layout.graph.edges if element in e))
        change = Change("node", element, "added", owned)
    else:
        change = Change("edge", tuple(element), "added")
    hull = concave_hull(layout, config.hull)
    return _relevant_with_hull(hull, layout, change, config)


# ---------------------------------------------------------------------------
# outer enhancement
# ---------------------------------------------------------------------------

def _pair_hausdorff(layout: Layout, supergraph: Supergraph,
                    config: EnhanceConfig) -> float:
    """Hull difference between the two restrictions, in layer-spacing units.

    The stop threshold (default 0.15 = 30px over a 200px layer step) is
    an absolute visibility margin, so the distance is scaled by the
    vertical spacing rather than by the hull size: a 30px bulge is just
    as visible on a large drawing as on a small one.
    """
    base_hull = concave_hull(restrict_layout(layout, supergraph.base), config.hull)
    alt_hull = concave_hull(restrict_layout(layout, supergraph.alternative), config.hull)
    raw = hausdorff_distance(base_hull, alt_hull, config.hull.ray_spacing / 2.0)
    return raw / config.layout.vertical_spacing


def _iterate_outer(layout: Layout, supergraph: Supergraph, config: EnhanceConfig,
                   baseline: AestheticsScore, displace) -> EnhancementOutcome:
    """Shared loop: displace, guard, stop once the hulls differ enough.

    An iteration is accepted only while the aesthetics guard holds and
    the drawn crossing count stays within the crossing tolerance of the
    op's start.  A run that never reaches the hull-difference threshold
    — whether an iteration was rejected or the iteration cap ran out —
    restores the starting positions entirely: a deformation below the
    threshold is by definition imperceptible, so keeping it would spend
    aesthetics (and crossings) on nothing.
    """
    current = layout.copy()
    start_crossings = count_edge_crossings(current)
    iterations = 0
    reason = REASON_CAP
    for _ in range(config.max_iterations):
        displace(current)
        acceptable = (
            guard(baseline, _score(current, config), config.aesthetics_tolerance)
            and (count_edge_crossings(current) - start_crossings
                 <= config.crossing_tolerance))
        if not acceptable:
            reason = REASON_RESET
            break
        iterations += 1
        if _pair_hausdorff(current, supergraph, config) > config.hausdorff_threshold:
            reason = REASON_THRESHOLD
            break
    if reason != REASON_THRESHOLD:
        current.positions = dict(layout.positions)
        iterations = 0
    return EnhancementOutcome(current, iterations > 0, iterations, reason)


def _split_shift_x(layout: Layout, axis: float, delta: float) -> None:
    for n, (x, y) in layout.positions.items():
        if x < axis:
            layout.positions[n] = (x - delta, y)
        elif x > axis:
            layout.positions[n] = (x + delta, y)


def _split_shift_y(layout: Layout, axis: float, delta: float) -> None:
    for n, (x, y) in layout.positions.items():
        if y < axis:
            layout.positions[n] = (x, y - delta)
        elif y > axis:
            layout.positions[n] = (x, y + delta)


def enhance_outer_node(layout: Layout, node: str, supergraph: Supergraph,
                       config: EnhanceConfig | None = None,
                       baseline: AestheticsScore | None = None) -> EnhancementOutcome:
    """Push a hull-relevant extreme node outward, step by step.

    The node must hold the first or last order index of its layer (or be
    alone in it); it then moves by the outer adaption per iteration,
    leftward from the first index, rightward from the last.  A node alone
    in its layer moves toward the nearer flank of the drawing.
    """
    config = config or EnhanceConfig()
    baseline = baseline or _score(layout, config)
    layer, order = layout.mental_map[node]
    size = sum(1 for (L, _) in layout.mental_map.values() if L == layer)
    if size == 1:
        minx, _, maxx, _ = layout.bounding_box()
        side = "left" if layout.positions[node][0] <= (minx + maxx) / 2.0 else "right"
    elif order == 0:
        side = "left"
    elif order == size - 1:
        side = "right"
    else:
        return EnhancementOutcome(layout.copy(), False, 0, REASON_NOT_APPLICABLE)
    delta = -config.outer_adaption if side == "left" else config.outer_adaption

    def displace(current: Layout) -> None:
        x, y = current.positions[node]
        current.positions[node] = (x + delta, y)

    return _iterate_outer(layout, supergraph, config, baseline, displace)


def enhance_outer_node_split(layout: Layout, node: str, supergraph: Supergraph,
                             config: EnhanceConfig | None = None,
                             baseline: AestheticsScore | None = None) -> EnhancementOutcome:
    """Split the drawing apart along a vertical axis through the node.

    Everything strictly left of the node's x moves further left, and
    strictly right moves further right, by the outer adaption per
    iteration; the node itself stays put, so in-layer orders survive.
    """
    config = config or EnhanceConfig()
    baseline = baseline or _score(layout, config)
    axis = layout.positions[node][0]

    def displace(current: Layout) -> None:
        _split_shift_x(current, axis, config.outer_adaption)

    return _iterate_outer(layout, supergraph, config, baseline, displace)


def enhance_outer_edge(layout: Layout, edge: Edge, supergraph: Supergraph,
                       config: EnhanceConfig | None = None,
                       baseline: AestheticsScore | None = None) -> EnhancementOutcome:
    """Lengthen a hull-relevant edge with the vertical-split method.

    The split center sits a quarter node-spacing from the edge's origin,
    offset toward the destination, so the origin stays on its own side
    while the destination (and everything beyond it) moves away.  Each
    iteration stretches the edge by another split step until the hulls
    of the two restrictions differ past the threshold.  For a perfectly
    vertical edge the offset direction is taken as rightward.
    """
    config = config or EnhanceConfig()
    baseline = baseline or _score(layout, config)
    ox = layout.positions[edge[0]][0]
    dx = layout.positions[edge[1]][0]
    toward = 1.0 if dx >= ox else -1.0
    axis = ox + toward * config.layout.horizontal_spacing / 4.0

    def displace(current: Layout) -> None:
        _split_shift_x(current, axis, config.outer_adaption)

    return _iterate_outer(layout, supergraph, config, baseline, displace)


# ---------------------------------------------------------------------------
# inner enhancement
# ---------------------------------------------------------------------------

@dataclass
class WhiteSpaceCircles:
    """The inscribed circles flanking an interior change."""

    rect: Tuple[float, float, float, float]
    faces: List[Polygon]
    adjacent: List[InscribedCircle]
    circle_large: InscribedCircle
    circle_opposite: InscribedCircle

    @property
    def circle_min(self) -> InscribedCircle:
        return min((self.circle_large, self.circle_opposite), key=lambda c: c.radius)

    @property
    def circle_max(self) -> InscribedCircle:
        return max((self.circle_large, self.circle_opposite), key=lambda c: c.radius)


def _change_rect(layout: Layout, change: Change,
                 config: EnhanceConfig) -> Optional[Tuple[float, float, float, float]]:
    """Bounding rectangle of the white space examined around a change.

    The rectangle is sized from the change's own geometry -- an edge
    spans its two endpoints, a node spans itself and its neighbours --
    padded per axis and clamped to the drawing.  The padding is one
    spacing step or half the anchor span, whichever is larger: a purely
    proportional displacement inflates span and padding together, so the
    measured neighbourhood keeps its relative size instead of being
    truncated ever harder as the drawing grows.  Because the rectangle
    is recomputed from current positions every iteration, it follows the
    endpoints apart as displacement opens space beside the change, while
    distant regions never dilute the measurement.
    """
    if change.kind == "edge":
        anchors = list(change.element)
    else:
        node = change.element
        anchors = [node]
        for (u, v) in layout.graph.edges:
            if u == node:
                anchors.append(v)
            elif v == node:
                anchors.append(u)
    xs = [layout.positions[n][0] for n in anchors]
    ys = [layout.positions[n][1] for n in anchors]
    pad_x = max(config.layout.horizontal_spacing, 0.5 * (max(xs) - min(xs)))
    pad_y = max(config.layout.vertical_spacing, 0.5 * (max(ys) - min(ys)))
    bx0, by0, bx1, by1 = layout.bounding_box()
    minx = max(min(xs) - pad_x, bx0)
    maxx = min(max(xs) + pad_x, bx1)
    miny = max(min(ys) - pad_y, by0)
    maxy = min(max(ys) + pad_y, by1)
    if maxx - minx <= 0 or maxy - miny <= 0:
        return None
    return (minx, miny, maxx, maxy)


def _change_geometry(layout: Layout, change: Change):
    if change.kind == "edge":
        (u, v) = change.element
        return LineString([layout.positions[u], layout.positions[v]])
    return Point(layout.positions[change.element])


def change_circles(layout: Layout, change: Change,
                   config: EnhanceConfig | None = None) -> Optional[WhiteSpaceCircles]:
    """White-space circles adjacent to an interior change, or None.

    The change's own chords are extended through their dangling ends so
    they split the rectangle even when they terminate on a node inside
    it; the flanking faces then exist on both sides of the change.
    """
    config = config or EnhanceConfig()
    rect = _change_rect(layout, change, config)
    if rect is None:
        return None
    if change.kind == "edge":
        extend = frozenset((change.element,))
    else:
        extend = frozenset(e for e in layout.graph.edges if change.element in e)
    faces = white_space_faces(layout, rect, extend_edges=extend)
    if not faces:
        return None
    geom = _change_geometry(layout, change)
    tol = config.hull.ray_spacing / 2.0
    adjacent_faces = [f for f in faces if f.exterior.distance(geom) <= tol]
    if not adjacent_faces:
        return None
    # precision scales with face size: centimetre accuracy on a huge
    # face buys nothing, and the quadtree would pay dearly for it
    circles = [largest_inscribed_circle(
        f, max(config.circle_precision, 0.02 * math.sqrt(f.area)))
        for f in adjacent_faces]
    order = sorted(range(len(circles)), key=lambda i: -circles[i].radius)
    large = circles[order[0]]

    if change.kind == "edge":
        (u, v) = change.element
        (x1, y1), (x2, y2) = layout.positions[u], layout.positions[v]
        mid = ((x1 + x2) / 2.0, (y1 + y2) / 2.0)
    else:
        mid = layout.positions[change.element]
    v0 = (large.center[0] - mid[0], large.center[1] - mid[1])
    n0 = math.hypot(*v0)

    # the opposite circle sits at ninety degrees or more across the change
    opposite = None
    best_cos = math.inf
    for i in order[1:]:
        c = circles[i]
        w = (c.center[0] - mid[0], c.center[1] - mid[1])
        nw = math.hypot(*w)
        if n0 == 0 or nw == 0:
            continue
        cos = (v0[0] * w[0] + v0[1] * w[1]) / (n0 * nw)
        if cos <= 0.0 and cos < best_cos:
            best_cos = cos
            opposite = c
    if opposite is None:
        opposite = circles[order[1]] if len(order) > 1 else large
    return WhiteSpaceCircles(rect, faces, circles, large, opposite)


def _displace_inner(current: Layout, info: WhiteSpaceCircles,
                    config: EnhanceConfig) -> None:
    """One displacement pass per tracked circle, split by the approach."""
    large, opp = info.circle_large, info.circle_opposite
    if opp is large:
        passes = [(large, 1.0)]
    else:
        total = large.radius + opp.radius
        if total <= 0:
            passes = [(large, 0.5), (opp, 0.5)]
        else:
            # the smaller circle receives the larger share of the adaption
            passes = [(large, opp.radius / total), (opp, large.radius / total)]
    approach = config.inner_approach
    for circle, f in passes:
        amount = f * config.inner_adaption
        cx, cy = circle.center
        if approach == "ws1":
            _split_shift_x(current, cx, amount)
        elif approach == "ws2":
            _scale_axis(current, cx, amount, horizontal=True)
        elif approach == "ws3":
            _split_shift_x(current, cx, amount)
            _split_shift_y(current, cy, amount)
        elif approach == "ws4":
            _scale_radial(current, (cx, cy), amount)
        else:
            raise ValueError(f"unknown inner approach {approach!r}")


def _scale_axis(layout: Layout, cx: float, amount: float, horizontal: bool) -> None:
    """Distance-proportional stretch along one axis about ``cx``."""
    coords = np.array([p[0] if horizontal else p[1]
                       for p in layout.positions.values()])
    max_dist = float(np.abs(coords - cx).max()) if len(coords) else 0.0
    if max_dist <= 0:
        return
    alpha = amount / max_dist
    for n, (x, y) in layout.positions.items():
        if horizontal:
            layout.positions[n] = (cx + (x - cx) * (1.0 + alpha), y)
        else:
            layout.positions[n] = (x, cx + (y - cx) * (1.0 + alpha))


def _scale_radial(layout: Layout, center: Tuple[float, float], amount: float) -> None:
    """Distance-proportional stretch on both axes about ``center``."""
    cx, cy = center
    pts = np.array(list(layout.positions.values()), dtype=float)
    if len(pts) == 0:
        return
    dists = np.hypot(pts[:, 0] - cx, pts[:, 1] - cy)
    max_dist = float(dists.max())
    if max_dist <= 0:
        return
    alpha = amount / max_dist
    for n, (x, y) in layout.positions.items():
        layout.positions[n] = (cx + (x - cx) * (1.0 + alpha),
                               cy + (y - cy) * (1.0 + alpha))


def enhance_inner(layout: Layout, change: Change, supergraph: Supergraph,
                  config: EnhanceConfig | None = None,
                  baseline: AestheticsScore | None = None) -> EnhancementOutcome:
    """Enlarge the white space flanking an interior change.

    Per iteration the two tracked circles (the largest adjacent one and
    its opposite across the change) are re-identified and every node is
    displaced about each circle's center, the smaller circle receiving
    the larger share of the adaption.  The loop stops once both circles
    exceed the white-space threshold share of the convex hull area.  An
    iteration is kept only while the aesthetics guard holds and the
    drawn crossing count stays within the crossing tolerance of the
    op's start; a rejected iteration is rolled back and ends the loop.
    """
    config = config or EnhanceConfig()
    baseline = baseline or _score(layout, config)
    current = layout.copy()
    start_crossings = count_edge_crossings(current)
    iterations = 0
    reason = REASON_CAP
    # the target is a fixed share of the drawing's area as it stood when
    # this enhancement began; measuring against the stretched drawing
    # would move the goalposts with every displacement
    limit = config.whitespace_threshold * convex_hull_area(current)
    for i in range(config.max_iterations):
        info = change_circles(current, change, config)
        if info is None:
            if i == 0:
                return EnhancementOutcome(current, False, 0, REASON_NOT_APPLICABLE)
            break
        if (info.circle_large.area > limit
                and info.circle_opposite.area > limit):
            reason = REASON_THRESHOLD
            break
        snapshot = dict(current.positions)
        _displace_inner(current, info, config)
        acceptable = (
            guard(baseline, _score(current, config), config.aesthetics_tolerance)
            and (count_edge_crossings(current) - start_crossings
                 <= config.crossing_tolerance))
        if not acceptable:
            current.positions = snapshot
            reason = REASON_RESET
            break
        iterations += 1
    return EnhancementOutcome(current, iterations > 0, iterations, reason)


# ---------------------------------------------------------------------------
# increase phase
# ---------------------------------------------------------------------------

def _collect_chain(layout: Layout, leaf: str) -> List[str]:
    """First-parent chain from a leaf up to the layer below the root.

    Each step climbs to the leftmost parent only; the final step into
    the layer below the root brings in all parents of the last interior
    node instead.  Root-layer nodes are never collected.
    """
    parents = layout.graph.parents_map()
    layer_of = {n: lm[0] for n, lm in layout.mental_map.items()}
    xpos = lambda n: layout.positions[n][0]
    chain = [leaf]
    cur = leaf
    while layer_of[cur] > 2 and parents[cur]:
        cur = min(parents[cur], key=lambda p: (xpos(p), p))
        chain.append(cur)
    if layer_of[cur] == 2:
        for p in sorted(parents[cur], key=lambda p: (xpos(p), p)):
            if layer_of[p] >= 1 and p not in chain:
                chain.append(p)
    return chain


def _prune_chain(layout: Layout, chain: Sequence[str], direction: str) -> set:
    """Keep one first-layer node anchored when the chain swallows them all."""
    layer_of = {n: lm[0] for n, lm in layout.mental_map.items()}
    level1 = {n for n in layout.graph.nodes if layer_of[n] == 1}
    moved = set(chain)
    if level1 and level1 <= moved:
        ordered = sorted(level1, key=lambda n: (layout.positions[n][0], n))
        drop = ordered[0] if direction == "right" else ordered[-1]
        moved.discard(drop)
    return moved


def _place_at_extreme(layout: Layout, moved: set, direction: str,
                      config: LayoutConfig) -> Layout:
    """Reorder the moved nodes to one flank and run a fresh layout pass.

    The moved block is pinned at the flank while the ordering sweeps
    re-settle every other node around it, so the relocation costs as few
    crossings as the graph allows instead of freezing the disruption in
    place.  The grid is then rebuilt from the resulting orders.
    """
    layers_map = {n: lm[0] for n, lm in layout.mental_map.items()}
    seed: Dict[int, List[str]] = {}
    for L, nodes in layout.layers().items():
        keep = [n for n in nodes if n not in moved]
        mv = [n for n in nodes if n in moved]
        seed[L] = keep + mv if direction == "right" else mv + keep
    best = barycenter_sweeps(layout.graph, seed, config,
                             pinned=frozenset(moved), pin_side=direction)
    orders = {n: i for nodes in best.values() for i, n in enumerate(nodes)}
    return assign_coordinates(layout.graph, layers_map, orders, config)


def increase_outer_relevant(layout: Layout, config: EnhanceConfig | None = None,
                            baseline: AestheticsScore | None = None
                            ) -> Tuple[Layout, List[IncreaseRecord]]:
    """Move buried leaves (with their parent chains) to a flank.

    Leaves that are not hull-relevant are tried one by one: the chain is
    reordered to the right flank first, then the left, and a move is
    kept only if the aesthetics guard accepts it and the drawn crossing
    count does not grow.  The crossing condition is what keeps this
    pre-phase affordable: it merely prepares more elements for the hull,
    and a flank placement that buys that preparation with new crossings
    costs more readability than it can ever return.  Accepted moves
    update the mental map (a fresh grid relayout), and the leaf list is
    refreshed after every attempt.  Intended to run directly on the
    initialization layout, before any per-change enhancement.
    """
    config = config or EnhanceConfig()
    baseline = baseline or _score(layout, config)
    current = layout
    crossings = count_edge_crossings(current)
    records: List[IncreaseRecord] = []
    attempted: set = set()
    while True:
        hull = concave_hull(current, config.hull)
        candidates = [n for n in current.graph.sinks()
                      if n not in attempted
                      and not _relevant_with_hull(
                          hull, current,
                          Change("node", n, "added",
                                 tuple(sorted(e for e in current.graph.edges
                                              if n in e))),
                          config)]
        if not candidates:
            break
        leaf = candidates[0]
        attempted.add(leaf)
        chain = _collect_chain(current, leaf)
        for direction in ("right", "left"):
            moved = _prune_chain(current, chain, direction)
            candidate = _place_at_extreme(current, moved, direction, config.layout)
            if candidate.positions == current.positions:
                continue
            cand_crossings = count_edge_crossings(candidate)
            if (cand_crossings <= crossings
                    and guard(baseline, _score(candidate, config),
                              config.aesthetics_tolerance)):
                current = candidate
                crossings = cand_crossings
                records.append(IncreaseRecord(leaf, direction, tuple(sorted(moved))))
                break
    return current, records


# ---------------------------------------------------------------------------
# pipeline
# ---------------------------------------------------------------------------

def classify_changes(layout: Layout, changes: Sequence[Change],
                     config: EnhanceConfig) -> List[Tuple[Change, str]]:
    """Route every change and order them: outer first, left to right."""
    hull = concave_hull(layout, config.hull)
    plans = []
    for change in changes:
        relevant = _relevant_with_hull(hull, layout, change, config)
        if change.kind == "node":
            if relevant:
                layer, order = layout.mental_map[change.element]
                size = sum(1 for (L, _) in layout.mental_map.values() if L == layer)
                route = ("outer-node" if size == 1 or order in (0, size - 1)
                         else "outer-split")
            else:
                route = "inner"
        else:
            route = "outer-edge" if relevant else "inner"
        plans.append((change, route))
    outer = [p for p in plans if p[1] != "inner"]
    inner = [p for p in plans if p[1] == "inner"]
    key = lambda p: (p[0].anchor(layout), p[0].kind, str(p[0].element))
    return sorted(outer, key=key) + sorted(inner, key=key)


def enhance_changes(supergraph: Supergraph, layout: Layout,
                    baseline: AestheticsScore, config: EnhanceConfig
                    ) -> Tuple[Layout, List[ChangeOutcome]]:
    """Apply the per-change enhancement phases in classification order."""
    changes = changes_of(diff(supergraph.base, supergraph.alternative))
    plans = classify_changes(layout, changes, config)
    current = layout
    outcomes: List[ChangeOutcome] = []
    ops = {
        "outer-node": enhance_outer_node,
        "outer-split": enhance_outer_node_split,
        "outer-edge": enhance_outer_edge,
        "inner": enhance_inner,
    }
    for change, route in plans:
        if route == "inner":
            out = enhance_inner(current, change, supergraph, config, baseline)
        else:
            out = ops[route](current, change.element, supergraph, config, baseline)
        current = out.layout
        outcomes.append(ChangeOutcome(change, route, out.applied,
                                      out.iterations_used, out.reason))
    return current, outcomes


def run_pipeline(base: DirectedGraph, alternative: DirectedGraph,
                 config: EnhanceConfig | None = None,
                 enhance: bool = True) -> PipelineReport:
    """Full comparison pipeline for one base/alternative pair.

    Lays out the supergraph once, optionally runs the increase phase and
    the per-change enhancements, and returns both restricted drawings.
    With ``enhance=False`` this is the plain foresighted layout that
    serves as the comparison baseline.  When not a single enhancement
    applies, the result falls back to the untouched initial drawing:
    the increase phase exists only to make room for enhancements, so
    its displacement must not outlive them.
    """
    config = config or EnhanceConfig()
    supergraph = build_supergraph(base, alternative)
    initial = layout_supergraph(supergraph, config.layout)
    initial_score = _score(initial, config)
    current = initial
    increase_records: List[IncreaseRecord] = []
    outcomes: List[ChangeOutcome] = []
    if enhance:
        current, increase_records = increase_outer_relevant(
            initial, config, initial_score)
        current, outcomes = enhance_changes(
            supergraph, current, initial_score, config)
        if not any(outcome.applied for outcome in outcomes):
            current = initial.copy()
    return PipelineReport(
        supergraph=supergraph,
        layout=current,
        base_layout=restrict_layout(current, base),
        alternative_layout=restrict_layout(current, alternative),
        initial_layout=initial,
        initial_score=initial_score,
        final_score=_score(current, config),
        increase_records=increase_records,
        outcomes=outcomes,
    )
