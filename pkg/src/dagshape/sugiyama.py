"""Hierarchical base layout (Sugiyama-style, straight-line edges).

The pipeline has the three classic stages, trimmed to what the
comparison workflow needs:

1. layer assignment by longest path from the sources,
2. in-layer ordering by iterated barycenter sweeps with a keep-best
   policy on the drawn crossing count,
3. coordinate assignment on a fixed grid (x from the in-layer order,
   y from the layer), layers centered on the widest layer's midline.

Long edges are drawn as straight segments; no dummy vertices are
inserted.  The resulting :class:`Layout` also records the mental map
(the per-node ``(layer, order)`` pair) that later stages must preserve.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Tuple

import numpy as np

from .model import DirectedGraph, GraphError, Supergraph, topological_order


@dataclass(frozen=True)
class LayoutConfig:
    """Grid spacing and ordering parameters."""

    horizontal_spacing: float = 80.0
    vertical_spacing: float = 200.0
    barycenter_sweeps: int = 8


@dataclass
class Layout:
    """Node positions plus the mental map they were derived from.

    ``positions`` maps node id to ``(x, y)``; ``mental_map`` maps node id
    to ``(layer, order)``.  y grows downward, so layer 0 is drawn on top.
    """

    graph: DirectedGraph
    positions: Dict[str, Tuple[float, float]]
    mental_map: Dict[str, Tuple[int, int]]

    def copy(self) -> "Layout":
        return Layout(self.graph, dict(self.positions), dict(self.mental_map))

    def layers(self) -> Dict[int, List[str]]:
        """Layer index -> node ids sorted by their in-layer order."""
        out: Dict[int, List[str]] = {}
        for node, (layer, order) in self.mental_map.items():
            out.setdefault(layer, []).append(node)
        for layer in out:
            out[layer].sort(key=lambda n: self.mental_map[n][1])
        return out

    def edge_segments(self) -> np.ndarray:
        """Edge geometry as an (m, 4) array of x1, y1, x2, y2 rows."""
        rows = []
        for src, dst in sorted(self.graph.edges):
            x1, y1 = self.positions[src]
            x2, y2 = self.positions[dst]
            rows.append((x1, y1, x2, y2))
        return np.asarray(rows, dtype=float).reshape(len(rows), 4)

    def bounding_box(self) -> Tuple[float, float, float, float]:
        xs = [p[0] for p in self.positions.values()]
        ys = [p[1] for p in self.positions.values()]
        return min(xs), min(ys), max(xs), max(ys)


def count_segment_crossings(segments: np.ndarray,
                            skip_pairs: np.ndarray | None = None) -> int:
    """Number of properly crossing segment pairs.

    Two segments count iff they intersect at a single point interior to
    both (strict orientation test on both sides).  ``skip_pairs`` is an
    optional boolean (m, m) matrix of pairs to ignore, used for edges
    that share an endpoint node.

    The orientation sign carries a scale-relative tolerance: collinear
    segments must stay collinear when every coordinate goes through a
    rescaling, so float drift of a few ulps cannot invent crossings that
    a drawing never had.
    """
    m = len(segments)
    if m < 2:
        return 0
    p1 = segments[:, 0:2]
    p2 = segments[:, 2:4]

    def cross(o, a, b):
        # orientation of b relative to segment o->a, broadcast over pairs
        return ((a[:, None, 0] - o[:, None, 0]) * (b[None, :, 1] - o[:, None, 1])
                - (a[:, None, 1] - o[:, None, 1]) * (b[None, :, 0] - o[:, None, 0]))

    scale = float(np.abs(segments).max())
    eps = 1e-9 * max(1.0, scale * scale)

    def opposite(a, b):
        return ((a > eps) & (b < -eps)) | ((a < -eps) & (b > eps))

    d1 = cross(p1, p2, p1)
    d2 = cross(p1, p2, p2)
    # the opposite-direction tests are the transposes of the same matrices
    proper = opposite(d1, d2) & opposite(d1.T, d2.T)
    if skip_pairs is not None:
        proper &= ~skip_pairs
    iu = np.triu_indices(m, k=1)
    return int(np.count_nonzero(proper[iu]))


def _shared_endpoint_mask(edges: List[Tuple[str, str]]) -> np.ndarray:
    """Boolean (m, m) matrix marking edge pairs that share a node."""
    m = len(edges)
    mask = np.zeros((m, m), dtype=bool)
    by_node: Dict[str, List[int]] = {}
    for i, (src, dst) in enumerate(edges):
        by_node.setdefault(src, []).append(i)
        by_node.setdefault(dst, []).append(i)
    for idxs in by_node.values():
        for a in idxs:
            for b in idxs:
                mask[a, b] = True
    return mask


def layout_crossings(layout: Layout) -> int:
    """Drawn crossing count of a layout, edge pairs sharing a node excluded."""
    edges = sorted(layout.graph.edges)
    if len(edges) < 2:
        return 0
    return count_segment_crossings(layout.edge_segments(),
                                   _shared_endpoint_mask(edges))


def assign_layers(graph: DirectedGraph) -> Dict[str, int]:
    """Longest-path layering: layer = longest path length from any source."""
    order = topological_order(graph)
    if order is None:
        raise GraphError("cannot layer a cyclic graph")
    parents = graph.parents_map()
    layers: Dict[str, int] = {}
    for node in order:
        ps = parents[node]
        layers[node] = 0 if not ps else max(layers[p] for p in ps) + 1
    return layers


def _coords_from_orders(layer_lists: Dict[int, List[str]],
                        config: LayoutConfig) -> Dict[str, Tuple[float, float]]:
    widths = {L: (len(nodes) - 1) * config.horizontal_spacing
              for L, nodes in layer_lists.items()}
    max_width = max(widths.values(), default=0.0)
    positions: Dict[str, Tuple[float, float]] = {}
    for L, nodes in layer_lists.items():
        offset = (max_width - widths[L]) / 2.0
        y = L * config.vertical_spacing
        for i, node in enumerate(nodes):
            positions[node] = (offset + i * config.horizontal_spacing, y)
    return positions


def _crossings_of_orders(graph: DirectedGraph,
                         layer_lists: Dict[int, List[str]],
                         config: LayoutConfig,
                         edges: List[Tuple[str, str]],
                         skip: np.ndarray) -> int:
    pos = _coords_from_orders(layer_lists, config)
    if len(edges) < 2:
        return 0
    seg = np.array([[*pos[s], *pos[t]] for s, t in edges], dtype=float)
    return count_segment_crossings(seg, skip)


def barycenter_sweeps(graph: DirectedGraph,
                      layer_lists: Dict[int, List[str]],
                      config: LayoutConfig,
                      pinned: frozenset = frozenset(),
                      pin_side: str = "right") -> Dict[int, List[str]]:
    """Alternating barycenter sweeps with keep-best, from a seed ordering.

    Each sweep reorders one layer at a time by the mean x position of the
    fixed-side neighbors (parents on downward sweeps, children on upward
    ones); nodes without neighbors on that side keep their current x as
    barycenter, so ties and isolated nodes stay put.  Nodes in ``pinned``
    stay glued to the ``pin_side`` flank of their layer in their seeded
    relative order; only the remaining nodes are re-sorted.  The best
    ordering seen, measured by drawn crossings, is returned, so the
    result is never worse than the seed.
    """
    layer_lists = {L: list(ns) for L, ns in layer_lists.items()}
    layer_ids = sorted(layer_lists)

    edges = sorted(graph.edges)
    skip = _shared_endpoint_mask(edges)
    parents = graph.parents_map()
    children = graph.children_map()

    best_lists = {L: list(ns) for L, ns in layer_lists.items()}
    best_crossings = _crossings_of_orders(graph, layer_lists, config, edges, skip)

    for sweep in range(config.barycenter_sweeps):
        downward = sweep % 2 == 0
        sweep_layers = layer_ids[1:] if downward else layer_ids[-2::-1]
        positions = _coords_from_orders(layer_lists, config)
        for L in sweep_layers:
            neigh = parents if downward else children
            bary: Dict[str, float] = {}
            for node in layer_lists[L]:
                ns = neigh[node]
                if ns:
                    bary[node] = sum(positions[p][0] for p in ns) / len(ns)
                else:
                    bary[node] = positions[node][0]
            free = sorted((n for n in layer_lists[L] if n not in pinned),
                          key=lambda n: bary[n])
            pin = [n for n in layer_lists[L] if n in pinned]
            layer_lists[L] = free + pin if pin_side == "right" else pin + free
            positions = _coords_from_orders(layer_lists, config)
        crossings = _crossings_of_orders(graph, layer_lists, config, edges, skip)
        if crossings < best_crossings:
            best_crossings = crossings
            best_lists = {L: list(ns) for L, ns in layer_lists.items()}

    return best_lists


def order_layers(graph: DirectedGraph, layers: Dict[str, int],
                 config: LayoutConfig | None = None) -> Dict[str, int]:
    """Barycenter ordering with alternating sweeps and keep-best.

    The initial order within each layer is the sorted node id; see
    ``barycenter_sweeps`` for the sweep mechanics.
    """
    config = config or LayoutConfig()
    layer_lists: Dict[int, List[str]] = {}
    for node, L in layers.items():
        layer_lists.setdefault(L, []).append(node)
    for L in layer_lists:
        layer_lists[L].sort()

    best_lists = barycenter_sweeps(graph, layer_lists, config)

    orders: Dict[str, int] = {}
    for L, nodes in best_lists.items():
        for i, node in enumerate(nodes):
            orders[node] = i
    return orders


def assign_coordinates(graph: DirectedGraph, layers: Dict[str, int],
                       orders: Dict[str, int],
                       config: LayoutConfig | None = None) -> Layout:
    """Grid coordinates from (layer, order); layers centered on the widest."""
    config = config or LayoutConfig()
    layer_lists: Dict[int, List[str]] = {}
    for node, L in layers.items():
        layer_lists.setdefault(L, []).append(node)
    for L in layer_lists:
        layer_lists[L].sort(key=lambda n: orders[n])
    positions = _coords_from_orders(layer_lists, config)
    mental_map = {n: (layers[n], orders[n]) for n in graph.nodes}
    return Layout(graph, positions, mental_map)


def layout_graph(graph: DirectedGraph, config: LayoutConfig | None = None) -> Layout:
    """Full pipeline: layering, ordering, coordinates."""
    config = config or LayoutConfig()
    graph.validate()
    layers = assign_layers(graph)
    orders = order_layers(graph, layers, config)
    return assign_coordinates(graph, layers, orders, config)


def layout_supergraph(supergraph: Supergraph,
                      config: LayoutConfig | None = None) -> Layout:
    """Lay out the union graph once; both restrictions share it."""
    return layout_graph(supergraph.graph, config)


def restrict_layout(layout: Layout, target: DirectedGraph) -> Layout:
    """Project a supergraph layout onto a subgraph.

    Positions are copied verbatim, so shared nodes are bit-identical
    between the restrictions of one supergraph layout.
    """
    missing = target.nodes - layout.graph.nodes
    if missing:
        raise GraphError(f"target nodes {sorted(missing)} not present in layout")
    positions = {n: layout.positions[n] for n in target.nodes}
    mental_map = {n: layout.mental_map[n] for n in target.nodes}
    return Layout(target, positions, mental_map)
