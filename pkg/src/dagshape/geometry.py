"""Shape geometry for layout comparison.

The outer shape of a drawing is a concave hull built by ray casting:
axis-parallel rays march in from all four sides on a fixed spacing, and
the first obstacle (a node, or a sample point along an edge) hit by each
ray contributes a hull vertex.  The four hit chains are stitched into a
closed polygon, indentations deeper than the concavity budget are
clipped, and the result is offset outward by a small enclosure margin.

Inner white space is measured on a bounding rectangle around a change:
every drawn edge that crosses the rectangle splits it into faces, and
each face is summarized by its largest inscribed circle (pole of
inaccessibility, found by quadtree refinement).

Also here: symmetric Hausdorff distance between hull boundaries and the
intersection-over-union of hull areas, the two outer-shape metrics.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, List, Sequence, Tuple

import numpy as np
import shapely
from shapely.geometry import LineString, MultiPolygon, Point, Polygon, box
from shapely.ops import split as shapely_split
from shapely.ops import unary_union

if TYPE_CHECKING:
    from .sugiyama import Layout

_SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class HullConfig:
    """Parameters of the ray-cast concave hull."""

    ray_spacing: float = 20.0
    concavity: float = 0.80
    enclosure: float = 0.10
    horizontal_spacing: float = 80.0

    @property
    def offset(self) -> float:
        """Outward offset distance applied to the finished hull."""
        return self.enclosure * self.horizontal_spacing


@dataclass(frozen=True)
class InscribedCircle:
    center: Tuple[float, float]
    radius: float

    @property
    def area(self) -> float:
        return math.pi * self.radius * self.radius


class HullPolygon:
    """A simple closed hull polygon with its pre-offset boundary.

    ``vertices`` is the exterior ring of the final (offset) hull.  The
    pre-offset polygon is kept for boundary-relevance queries, where the
    hull vertices coincide with actual obstacle points.
    """

    def __init__(self, polygon: Polygon, raw: Polygon):
        self._polygon = polygon
        self._raw = raw
        self.vertices = np.asarray(polygon.exterior.coords[:-1], dtype=float)

    @property
    def polygon(self) -> Polygon:
        return self._polygon

    @property
    def raw_polygon(self) -> Polygon:
        return self._raw

    def perimeter(self) -> float:
        return float(self._polygon.exterior.length)

    def area(self) -> float:
        return float(self._polygon.area)

    def contains_point(self, point: Tuple[float, float]) -> bool:
        """Inside-or-on-boundary test."""
        return bool(shapely.covers(self._polygon, Point(point)))

    def raw_boundary_distance(self, point: Tuple[float, float]) -> float:
        return float(self._raw.exterior.distance(Point(point)))

    def boundary_samples(self, spacing: float) -> np.ndarray:
        """Exterior vertices plus evenly spaced points along each side."""
        return _ring_samples(self.vertices, spacing)


def _ring_samples(vertices: np.ndarray, spacing: float) -> np.ndarray:
    pts: List[np.ndarray] = []
    n = len(vertices)
    for i in range(n):
        a = vertices[i]
        b = vertices[(i + 1) % n]
        pts.append(a.reshape(1, 2))
        seg_len = float(np.hypot(*(b - a)))
        extra = int(seg_len // spacing)
        if extra:
            ts = np.arange(1, extra + 1, dtype=float) * spacing / seg_len
            ts = ts[ts < 1.0]
            if len(ts):
                pts.append(a[None, :] + ts[:, None] * (b - a)[None, :])
    return np.vstack(pts)


def layout_obstacle_points(layout: "Layout", ray_spacing: float) -> np.ndarray:
    """Node positions plus edge samples at half the ray spacing."""
    step = ray_spacing / 2.0
    chunks = [np.array([layout.positions[n] for n in sorted(layout.graph.nodes)],
                       dtype=float).reshape(-1, 2)]
    for src, dst in sorted(layout.graph.edges):
        a = np.asarray(layout.positions[src], dtype=float)
        b = np.asarray(layout.positions[dst], dtype=float)
        length = float(np.hypot(*(b - a)))
        count = max(2, int(math.ceil(length / step)) + 1)
        ts = np.linspace(0.0, 1.0, count)
        chunks.append(a[None, :] + ts[:, None] * (b - a)[None, :])
    return np.vstack(chunks)


def _clip_chain(values: np.ndarray, outward_small: bool, max_depth: float) -> np.ndarray:
    """Clip indentations of a hit chain.

    ``values`` are the hit coordinates along the chain's free axis.  An
    indentation is a retreat from the support level, the nearer of the
    best values seen before and after the point; retreating slopes at the
    chain ends are not indentations and stay untouched.
    """
    if len(values) < 3:
        return values
    v = values if outward_small else -values
    prefix = np.minimum.accumulate(v)
    suffix = np.minimum.accumulate(v[::-1])[::-1]
    support = np.maximum(prefix, suffix)
    clipped = np.minimum(v, support + max_depth)
    return clipped if outward_small else -clipped


def _staircase(points: np.ndarray, outward: Tuple[float, float]
               ) -> List[Tuple[float, float]]:
    """Chain points with axis-aligned steps bulging in ``outward``.

    The L-step between consecutive hit points keeps every obstacle point
    of the traversed bands on the inner side of the chain.
    """
    out: List[Tuple[float, float]] = []

    def push(q: Tuple[float, float]) -> None:
        if not out or (abs(out[-1][0] - q[0]) > 1e-12
                       or abs(out[-1][1] - q[1]) > 1e-12):
            out.append(q)

    for i in range(len(points)):
        p = (float(points[i][0]), float(points[i][1]))
        push(p)
        if i + 1 == len(points):
            break
        q = (float(points[i + 1][0]), float(points[i + 1][1]))
        c1 = (p[0], q[1])
        c2 = (q[0], p[1])
        s1 = outward[0] * c1[0] + outward[1] * c1[1]
        s2 = outward[0] * c2[0] + outward[1] * c2[1]
        push(c1 if s1 >= s2 else c2)
    return out


def _silhouette_region(chain: np.ndarray, side: str, bounds, margin: float
                       ) -> Polygon:
    """Half-plane-like region on the inner side of one ray silhouette.

    The staircase through the per-band hit points is extended to the
    padded bounding box and closed around the side opposite the rays, so
    the region contains everything the rays from this side cannot reach.
    """
    minx, miny, maxx, maxy = bounds
    lo_x, lo_y = minx - margin, miny - margin
    hi_x, hi_y = maxx + margin, maxy + margin
    outward = {"left": (-1.0, 0.0), "right": (1.0, 0.0),
               "top": (0.0, -1.0), "bottom": (0.0, 1.0)}[side]
    stair = _staircase(chain, outward)
    first, last = stair[0], stair[-1]
    if side in ("left", "right"):
        far = hi_x if side == "left" else lo_x
        ring = ([(first[0], lo_y)] + stair
                + [(last[0], hi_y), (far, hi_y), (far, lo_y)])
    else:
        far = hi_y if side == "top" else lo_y
        ring = ([(lo_x, first[1])] + stair
                + [(hi_x, last[1]), (hi_x, far), (lo_x, far)])
    return Polygon(ring)


def _bbox_polygon(points: np.ndarray, margin: float) -> Polygon:
    minx, miny = points.min(axis=0)
    maxx, maxy = points.max(axis=0)
    return box(minx - margin, miny - margin, maxx + margin, maxy + margin)


def _largest_polygon(geom) -> Polygon:
    if isinstance(geom, Polygon):
        return geom
    if isinstance(geom, MultiPolygon):
        return max(geom.geoms, key=lambda g: g.area)
    polys = [g for g in getattr(geom, "geoms", []) if isinstance(g, Polygon)]
    if polys:
        return max(polys, key=lambda g: g.area)
    return Polygon()


def _drop_holes(poly: Polygon) -> Polygon:
    if poly.interiors:
        return Polygon(poly.exterior)
    return poly


def concave_hull(layout: "Layout", config: HullConfig | None = None) -> HullPolygon:
    """Ray-cast concave hull of a drawn layout.

    Horizontal rays enter from the left and right, vertical rays from
    the top and bottom, one per ``ray_spacing`` band.  Each direction's
    per-band extreme obstacle points form a silhouette staircase;
    indentations deeper than the concavity budget are clipped; the hull
    is the intersection of the four silhouette regions -- exactly the
    area no ray can reach -- offset outward by the enclosure margin.
    Layouts with fewer than three nodes, or whose silhouettes collapse,
    fall back to the offset bounding box.
    """
    config = config or HullConfig()
    points = layout_obstacle_points(layout, config.ray_spacing)
    s = config.ray_spacing

    if len(layout.graph.nodes) <= 2:
        rect = _bbox_polygon(points, config.offset)
        return HullPolygon(rect, _bbox_polygon(points, 0.0))

    minx, miny = points.min(axis=0)
    maxx, maxy = points.max(axis=0)
    width = maxx - minx
    height = maxy - miny

    hband = np.rint((points[:, 1] - miny) / s).astype(int)
    vband = np.rint((points[:, 0] - minx) / s).astype(int)

    def band_extremes(bands: np.ndarray, coord: np.ndarray):
        """Per band: (band id, index of min coord, index of max coord)."""
        out = []
        for b in np.unique(bands):
            idx = np.nonzero(bands == b)[0]
            vals = coord[idx]
            out.append((int(b), int(idx[np.argmin(vals)]), int(idx[np.argmax(vals)])))
        return out

    horiz = band_extremes(hband, points[:, 0])
    vert = band_extremes(vband, points[:, 1])

    left = np.array([points[lo] for _, lo, _ in horiz], dtype=float)
    right = np.array([points[hi] for _, _, hi in horiz], dtype=float)
    top = np.array([points[lo] for _, lo, _ in vert], dtype=float)
    bottom = np.array([points[hi] for _, _, hi in vert], dtype=float)

    depth_x = (1.0 - config.concavity) * width
    depth_y = (1.0 - config.concavity) * height
    left[:, 0] = _clip_chain(left[:, 0], True, depth_x)
    right[:, 0] = _clip_chain(right[:, 0], False, depth_x)
    top[:, 1] = _clip_chain(top[:, 1], True, depth_y)
    bottom[:, 1] = _clip_chain(bottom[:, 1], False, depth_y)

    bounds = (minx, miny, maxx, maxy)
    poly = _silhouette_region(left, "left", bounds, s)
    for chain, side in ((right, "right"), (top, "top"), (bottom, "bottom")):
        poly = poly.intersection(_silhouette_region(chain, side, bounds, s))
    poly = _drop_holes(_largest_polygon(poly))
    if poly.is_empty or poly.area < s * s:
        rect = _bbox_polygon(points, config.offset)
        return HullPolygon(rect, _bbox_polygon(points, 0.0))

    # repair: every obstacle point must end up inside or on the hull
    shapely.prepare(poly)
    escaped = points[~shapely.covers(poly, shapely.points(points))]
    if len(escaped):
        half = shapely.distance(poly, shapely.points(escaped)) + s / 2.0
        patches = shapely.box(escaped[:, 0] - half, escaped[:, 1] - half,
                              escaped[:, 0] + half, escaped[:, 1] + half)
        poly = _drop_holes(_largest_polygon(unary_union([poly, *patches])))

    raw = poly
    final = poly.buffer(config.offset, join_style="mitre", mitre_limit=2.0)
    final = _drop_holes(_largest_polygon(final))
    return HullPolygon(final, raw)


def hausdorff_distance(a: HullPolygon, b: HullPolygon,
                       sample_spacing: float = 10.0) -> float:
    """Symmetric Hausdorff distance over boundary samples of both hulls."""
    pa = a.boundary_samples(sample_spacing)
    pb = b.boundary_samples(sample_spacing)
    d2 = ((pa[:, 0][:, None] - pb[:, 0][None, :]) ** 2
          + (pa[:, 1][:, None] - pb[:, 1][None, :]) ** 2)
    forward = d2.min(axis=1).max()
    backward = d2.min(axis=0).max()
    return float(math.sqrt(max(forward, backward)))


def normalized_hausdorff(base: HullPolygon, other: HullPolygon,
                         sample_spacing: float = 10.0) -> float:
    """Hausdorff distance normalized by the base hull's perimeter."""
    size = base.perimeter()
    if size <= 0.0:
        raise ValueError("base hull has zero perimeter")
    return hausdorff_distance(base, other, sample_spacing) / size


def intersection_over_union(a: HullPolygon, b: HullPolygon) -> float:
    """Area IoU of two hulls; 1 for identical shapes, 0 for disjoint."""
    inter = a.polygon.intersection(b.polygon).area
    union = a.polygon.union(b.polygon).area
    if union <= 0.0:
        raise ValueError("degenerate hulls with zero union area")
    return float(inter / union)


def convex_hull_area(layout: "Layout") -> float:
    """Area of the convex hull of the node positions."""
    pts = shapely.multipoints(
        np.array([layout.positions[n] for n in sorted(layout.graph.nodes)],
                 dtype=float))
    return float(pts.convex_hull.area)


def white_space_faces(layout: "Layout",
                      rect: Tuple[float, float, float, float],
                      extend_edges: frozenset = frozenset()) -> List[Polygon]:
    """Faces the drawn edges cut a bounding rectangle into.

    Starting from the rectangle as a single face, each edge segment that
    crosses the rectangle splits every face it passes through.  Segments
    that merely dangle inside a face (clipped ends on a node inside the
    rectangle) cannot split it and are ignored by the underlying split.
    Edges listed in ``extend_edges`` are extended along their own line
    past both endpoints instead, so they cut through even when they end
    on a node inside the rectangle.  The faces partition the rectangle,
    so their areas sum to its area.
    """
    minx, miny, maxx, maxy = rect
    if maxx - minx <= 0 or maxy - miny <= 0:
        return []
    frame = box(minx, miny, maxx, maxy)
    diag = math.hypot(maxx - minx, maxy - miny)
    eps = 1e-9 * max(maxx - minx, maxy - miny, 1.0)

    faces: List[Polygon] = [frame]
    for src, dst in sorted(layout.graph.edges):
        seg = LineString([layout.positions[src], layout.positions[dst]])
        clipped = frame.intersection(seg)
        if clipped.is_empty or clipped.length < eps:
            continue
        if (src, dst) in extend_edges:
            cutters = [_extend_segment(seg, diag)]
        else:
            pieces = (clipped.geoms if hasattr(clipped, "geoms") else [clipped])
            cutters = [_extend_segment(p, eps + 1e-6) for p in pieces
                       if isinstance(p, LineString) and p.length >= eps]
        for cutter in cutters:
            next_faces: List[Polygon] = []
            for face in faces:
                if face.intersects(cutter):
                    parts = shapely_split(face, cutter)
                    for part in parts.geoms:
                        if isinstance(part, Polygon) and part.area > eps:
                            next_faces.append(part)
                else:
                    next_faces.append(face)
            faces = next_faces
    return faces


def _extend_segment(seg: LineString, amount: float) -> LineString:
    """Stretch a segment slightly past both ends (robust face splitting)."""
    (x1, y1), (x2, y2) = seg.coords[0], seg.coords[-1]
    dx, dy = x2 - x1, y2 - y1
    length = math.hypot(dx, dy)
    if length == 0:
        return seg
    ux, uy = dx / length, dy / length
    return LineString([(x1 - ux * amount, y1 - uy * amount),
                       (x2 + ux * amount, y2 + uy * amount)])


def _signed_distance(poly: Polygon, x: float, y: float) -> float:
    """Positive inside the polygon, negative outside; zero on the boundary."""
    p = Point(x, y)
    d = poly.boundary.distance(p)
    return d if poly.contains(p) else -d


def largest_inscribed_circle(poly: Polygon, precision: float = 0.5) -> InscribedCircle:
    """Pole of inaccessibility by quadtree refinement.

    Starts from a square grid covering the bounding box, keeps a priority
    queue on each cell's best possible distance (cell center distance
    plus half diagonal), and subdivides until no cell can beat the best
    center found by more than ``precision``.
    """
    minx, miny, maxx, maxy = poly.bounds
    width, height = maxx - minx, maxy - miny
    if width <= 0 or height <= 0 or poly.is_empty:
        cx, cy = poly.centroid.x if not poly.is_empty else 0.0, \
            poly.centroid.y if not poly.is_empty else 0.0
        return InscribedCircle((cx, cy), 0.0)

    cell_size = min(width, height)
    half = cell_size / 2.0

    counter = 0
    heap: List[Tuple[float, int, float, float, float]] = []

    def push(x: float, y: float, h: float) -> Tuple[float, float, float, float]:
        nonlocal counter
        d = _signed_distance(poly, x, y)
        maxd = d + h * _SQRT2
        heapq.heappush(heap, (-maxd, counter, x, y, h))
        counter += 1
        return d, x, y, h

    best_d = -math.inf
    best_xy = (minx + width / 2.0, miny + height / 2.0)

    x = minx
    while x < maxx:
        y = miny
        while y < maxy:
            d, cx, cy, _ = push(x + half, y + half, half)
            if d > best_d:
                best_d, best_xy = d, (cx, cy)
            y += cell_size
        x += cell_size

    # centroid is often a strong initial candidate
    c = poly.centroid
    d0 = _signed_distance(poly, c.x, c.y)
    if d0 > best_d:
        best_d, best_xy = d0, (c.x, c.y)

    while heap:
        neg_maxd, _, x, y, h = heapq.heappop(heap)
        if -neg_maxd - best_d <= precision:
            break
        h2 = h / 2.0
        for nx, ny in ((x - h2, y - h2), (x + h2, y - h2),
                       (x - h2, y + h2), (x + h2, y + h2)):
            d, cx, cy, _ = push(nx, ny, h2)
            if d > best_d:
                best_d, best_xy = d, (cx, cy)

    return InscribedCircle(best_xy, max(best_d, 0.0))
