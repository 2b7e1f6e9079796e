"""SVG rendering of layouts and JSON persistence of layout geometry.

The SVG output is deliberately flat: only ``line``, ``circle``,
``path``, ``polyline``, and ``text`` elements under the root, so the
files diff cleanly and downstream tooling can parse them without a full
SVG implementation.  Two drawings rendered with a shared view box are
directly comparable frame by frame.
"""

from __future__ import annotations

import json
import math
from typing import Dict, Iterable, Mapping, Optional, Sequence, Tuple

from .geometry import HullPolygon, InscribedCircle
from .model import (MEMBER_ALTERNATIVE, MEMBER_BASE, MEMBER_BOTH, DirectedGraph,
                    Edge, GraphError, Supergraph)
from .sugiyama import Layout

NODE_RADIUS = 6.0
ARROW_LENGTH = 10.0
ARROW_HALF_WIDTH = 4.0
STROKE = 1.5
STROKE_CHANGED = 3.0
FONT = "Helvetica, Arial, sans-serif"

COLOR_BOTH = "#31363b"
COLOR_BASE_ONLY = "#c0392b"       # only in the base graph (removed)
COLOR_ALT_ONLY = "#1d7a46"        # only in the alternative graph (added)
COLOR_HULL = "#4a74c9"
COLOR_CIRCLE = "#b8860b"

MEMBERSHIP_COLORS = {
    MEMBER_BOTH: COLOR_BOTH,
    MEMBER_BASE: COLOR_BASE_ONLY,
    MEMBER_ALTERNATIVE: COLOR_ALT_ONLY,
}

ViewBox = Tuple[float, float, float, float]


def _fmt(value: float) -> str:
    text = f"{value:.2f}"
    return "0.00" if text == "-0.00" else text


def _escape(text: str) -> str:
    return (text.replace("&", "&amp;").replace("<", "&lt;")
            .replace(">", "&gt;"))


def layout_bounds(layout: Layout, pad: float = 0.0) -> ViewBox:
    (minx, miny), (maxx, maxy) = layout.bounding_box()
    return (minx - pad, miny - pad,
            (maxx - minx) + 2 * pad, (maxy - miny) + 2 * pad)


def shared_viewbox(layouts: Sequence[Layout], pad: float = 50.0,
                   hulls: Sequence[HullPolygon] = ()) -> ViewBox:
    """One view box covering every drawing (and hull) of a comparison."""
    xs: list = []
    ys: list = []
    for layout in layouts:
        (minx, miny), (maxx, maxy) = layout.bounding_box()
        xs.extend((minx, maxx))
        ys.extend((miny, maxy))
    for hull in hulls:
        xs.extend((float(hull.vertices[:, 0].min()),
                   float(hull.vertices[:, 0].max())))
        ys.extend((float(hull.vertices[:, 1].min()),
                   float(hull.vertices[:, 1].max())))
    if not xs:
        raise GraphError("cannot compute a view box without geometry")
    return (min(xs) - pad, min(ys) - pad,
            (max(xs) - min(xs)) + 2 * pad, (max(ys) - min(ys)) + 2 * pad)


def membership_colors(supergraph: Supergraph
                      ) -> Tuple[Dict[str, str], Dict[Edge, str]]:
    node_colors = {n: MEMBERSHIP_COLORS[m]
                   for n, m in supergraph.node_membership.items()}
    edge_colors = {e: MEMBERSHIP_COLORS[m]
                   for e, m in supergraph.edge_membership.items()}
    return node_colors, edge_colors


def _edge_elements(p0: Tuple[float, float], p1: Tuple[float, float],
                   color: str, width: float) -> list:
    x0, y0 = p0
    x1, y1 = p1
    dx, dy = x1 - x0, y1 - y0
    length = math.hypot(dx, dy)
    if length <= NODE_RADIUS * 2:
        return [f'<line x1="{_fmt(x0)}" y1="{_fmt(y0)}" x2="{_fmt(x1)}" '
                f'y2="{_fmt(y1)}" stroke="{color}" stroke-width="{width}" />']
    ux, uy = dx / length, dy / length
    sx, sy = x0 + ux * NODE_RADIUS, y0 + uy * NODE_RADIUS
    tipx, tipy = x1 - ux * NODE_RADIUS, y1 - uy * NODE_RADIUS
    bx, by = tipx - ux * ARROW_LENGTH, tipy - uy * ARROW_LENGTH
    nx, ny = -uy * ARROW_HALF_WIDTH, ux * ARROW_HALF_WIDTH
    line = (f'<line x1="{_fmt(sx)}" y1="{_fmt(sy)}" x2="{_fmt(bx)}" '
            f'y2="{_fmt(by)}" stroke="{color}" stroke-width="{width}" />')
    head = (f'<path d="M {_fmt(tipx)} {_fmt(tipy)} L {_fmt(bx + nx)} '
            f'{_fmt(by + ny)} L {_fmt(bx - nx)} {_fmt(by - ny)} Z" '
            f'fill="{color}" />')
    return [line, head]


def render_svg(layout: Layout,
               viewbox: Optional[ViewBox] = None,
               node_colors: Optional[Mapping[str, str]] = None,
               edge_colors: Optional[Mapping[Edge, str]] = None,
               changed_nodes: Iterable[str] = (),
               changed_edges: Iterable[Edge] = (),
               hull: Optional[HullPolygon] = None,
               circles: Sequence[InscribedCircle] = (),
               labels: bool = True,
               comment: Optional[str] = None) -> str:
    """Render one layout to a flat SVG document string."""
    node_colors = dict(node_colors or {})
    edge_colors = dict(edge_colors or {})
    changed_nodes = set(changed_nodes)
    changed_edges = set(changed_edges)
    box = viewbox if viewbox is not None else layout_bounds(layout, pad=50.0)
    minx, miny, width, height = box
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" '
        f'viewBox="{_fmt(minx)} {_fmt(miny)} {_fmt(width)} {_fmt(height)}" '
        f'width="{_fmt(width)}" height="{_fmt(height)}" '
        f'font-family="{FONT}" font-size="11">',
    ]
    if comment is not None:
        parts.append(f"<!-- {comment.replace('--', '- -')} -->")

    if hull is not None:
        ring = list(hull.vertices) + [hull.vertices[0]]
        points = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in ring)
        parts.append(f'<polyline points="{points}" fill="none" '
                     f'stroke="{COLOR_HULL}" stroke-width="{STROKE}" '
                     f'stroke-dasharray="6 4" />')
    for circle in circles:
        cx, cy = circle.center
        parts.append(f'<circle cx="{_fmt(cx)}" cy="{_fmt(cy)}" '
                     f'r="{_fmt(circle.radius)}" fill="none" '
                     f'stroke="{COLOR_CIRCLE}" stroke-width="{STROKE}" '
                     f'stroke-dasharray="2 3" />')

    for edge in sorted(layout.graph.edges):
        color = edge_colors.get(edge, COLOR_BOTH)
        width_ = STROKE_CHANGED if edge in changed_edges else STROKE
        parts.extend(_edge_elements(layout.positions[edge[0]],
                                    layout.positions[edge[1]], color, width_))
    for node in sorted(layout.graph.nodes):
        x, y = layout.positions[node]
        color = node_colors.get(node, COLOR_BOTH)
        width_ = STROKE_CHANGED if node in changed_nodes else STROKE
        parts.append(f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" '
                     f'r="{_fmt(NODE_RADIUS)}" fill="#ffffff" '
                     f'stroke="{color}" stroke-width="{width_}" />')
        if labels:
            parts.append(f'<text x="{_fmt(x + NODE_RADIUS + 3)}" '
                         f'y="{_fmt(y - NODE_RADIUS - 3)}" '
                         f'fill="{color}">{_escape(node)}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


# ---------------------------------------------------------------------------
# layout persistence
# ---------------------------------------------------------------------------

def save_layout_json(layout: Layout) -> str:
    data = {
        "graph": {
            "nodes": sorted(layout.graph.nodes),
            "edges": [list(e) for e in sorted(layout.graph.edges)],
        },
        "positions": {n: [x, y]
                      for n, (x, y) in sorted(layout.positions.items())},
        "mental_map": {n: [layer, order]
                       for n, (layer, order) in sorted(layout.mental_map.items())},
    }
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


def load_layout_json(text: str) -> Layout:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphError(
            f"malformed JSON at byte offset {exc.pos}: {exc.msg}") from exc
    try:
        graph = DirectedGraph(
            frozenset(data["graph"]["nodes"]),
            frozenset((u, v) for u, v in data["graph"]["edges"]))
        positions = {n: (float(x), float(y))
                     for n, (x, y) in data["positions"].items()}
        mental_map = {n: (int(layer), int(order))
                      for n, (layer, order) in data["mental_map"].items()}
    except (KeyError, TypeError, ValueError) as exc:
        raise GraphError(f"malformed layout document: {exc}") from exc
    graph.validate()
    missing = graph.nodes - set(positions)
    if missing or graph.nodes - set(mental_map):
        raise GraphError("layout document does not cover every node")
    return Layout(graph, positions, mental_map)
