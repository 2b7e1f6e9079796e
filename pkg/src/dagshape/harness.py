"""Evaluation harness: seeded corpus, change enumeration, paired metrics.

Base graphs are random connected DAGs built from a shuffled topological
order, a spanning arborescence for connectivity, and uniformly random
forward edges.  Six change types produce alternatives per base:

* ``add_node`` -- one new leaf per possible parent,
* ``remove_node`` -- one alternative per removable node,
* ``add_edge`` -- one per absent forward pair of a fixed topological order,
* ``remove_edge`` -- one per existing edge,
* ``add_3_nodes`` -- three new leaves, parent combinations sampled,
* ``add_1_node_2_edges`` -- one new node wired with two edges, sampled.

Every base/alternative pair is laid out twice: by the plain foresighted
layout (the baseline) and by the enhancement pipeline; the harness then
records hull Hausdorff distance, hull intersection-over-union (reported
as the shape-change score ``1 - IoU``), relative white space at interior
changes, the aesthetics average, and the crossing count for both.
"""

from __future__ import annotations

import itertools
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .aesthetics import score_aesthetics
from .enhance import (Change, EnhanceConfig, change_circles, changes_of,
                      classify_changes, enhance_changes,
                      increase_outer_relevant)
from .geometry import concave_hull, intersection_over_union, normalized_hausdorff
from .model import (ChangeSet, DirectedGraph, build_supergraph, diff,
                    topological_order)
from .sugiyama import Layout, layout_crossings, layout_supergraph, restrict_layout

SINGLE_CHANGE_TYPES = ("add_node", "remove_node", "add_edge", "remove_edge")
MULTI_CHANGE_TYPES = ("add_3_nodes", "add_1_node_2_edges")
CHANGE_TYPES = SINGLE_CHANGE_TYPES + MULTI_CHANGE_TYPES

EQUALITY_TOLERANCE = 1e-9


def generate_base_graphs(count: int, n_nodes: int, n_edges: int,
                         seed: int) -> List[DirectedGraph]:
    """Deterministic corpus of random connected DAGs."""
    max_edges = n_nodes * (n_nodes - 1) // 2
    if n_nodes < 1 or n_edges < n_nodes - 1 or n_edges > max_edges:
        raise ValueError(
            f"infeasible corpus parameters: {n_nodes} nodes, {n_edges} edges")
    rng = random.Random(seed)
    graphs = []
    for _ in range(count):
        order = [f"n{i:02d}" for i in range(n_nodes)]
        rng.shuffle(order)
        edges = set()
        for i in range(1, n_nodes):
            parent = order[rng.randrange(i)]
            edges.add((parent, order[i]))
        while len(edges) < n_edges:
            i, j = sorted(rng.sample(range(n_nodes), 2))
            edges.add((order[i], order[j]))
        g = DirectedGraph(frozenset(order), frozenset(edges))
        g.validate()
        graphs.append(g)
    return graphs


def generate_alternatives(base: DirectedGraph, change_type: str, seed: int,
                          cap: int = 200) -> List[Tuple[DirectedGraph, ChangeSet]]:
    """All alternatives of one change type, sampled down to ``cap``.

    Single change types enumerate every possibility; the combined types
    enumerate valid combinations and draw a seeded sample when the space
    exceeds the cap.
    """
    rng = random.Random(seed)
    nodes = sorted(base.nodes)
    topo = topological_order(base)
    assert topo is not None
    out: List[Tuple[DirectedGraph, ChangeSet]] = []

    def emit(alt: DirectedGraph) -> None:
        alt.validate()
        out.append((alt, diff(base, alt)))

    if change_type == "add_node":
        for parent in nodes:
            emit(DirectedGraph(base.nodes | {"x00"},
                               base.edges | {(parent, "x00")}))
    elif change_type == "remove_node":
        for node in nodes:
            if len(base.nodes) <= 1:
                continue
            emit(DirectedGraph(base.nodes - {node},
                               frozenset(e for e in base.edges if node not in e)))
    elif change_type == "add_edge":
        for i, j in itertools.combinations(range(len(topo)), 2):
            edge = (topo[i], topo[j])
            if edge not in base.edges:
                emit(DirectedGraph(base.nodes, base.edges | {edge}))
    elif change_type == "remove_edge":
        for edge in sorted(base.edges):
            emit(DirectedGraph(base.nodes, base.edges - {edge}))
    elif change_type == "add_3_nodes":
        combos = list(itertools.combinations_with_replacement(nodes, 3))
        if len(combos) > cap:
            combos = rng.sample(combos, cap)
        for parents in combos:
            new_nodes = {f"x{k:02d}" for k in range(3)}
            new_edges = {(parents[k], f"x{k:02d}") for k in range(3)}
            emit(DirectedGraph(base.nodes | new_nodes, base.edges | new_edges))
    elif change_type == "add_1_node_2_edges":
        combos: List[Tuple[Tuple[str, str], Tuple[str, str]]] = []
        # two parents feeding the new node
        for u, v in itertools.combinations(nodes, 2):
            combos.append(((u, "x00"), (v, "x00")))
        # interior insertion between a forward pair
        for i, j in itertools.combinations(range(len(topo)), 2):
            combos.append(((topo[i], "x00"), ("x00", topo[j])))
        if len(combos) > cap:
            combos = rng.sample(combos, cap)
        for e1, e2 in combos:
            emit(DirectedGraph(base.nodes | {"x00"}, base.edges | {e1, e2}))
    else:
        raise ValueError(f"unknown change type {change_type!r}")
    return out


def relative_whitespace(layout: Layout, change: Change,
                        config: EnhanceConfig | None = None) -> float:
    """White space visibility of one interior change in one drawing.

    The largest circle adjacent to the change, scaled by how balanced
    the two flanking circles are (their area ratio), relative to the
    drawing's concave hull area.  Degenerate situations -- no adjacent
    face to measure, collapsed circles or hull -- score zero.
    """
    config = config or EnhanceConfig()
    info = change_circles(layout, change, config)
    if info is None:
        return 0.0
    hull_area = concave_hull(layout, config.hull).area()
    if hull_area <= 0:
        return 0.0
    cmax = info.circle_max
    if cmax.area <= 0:
        return 0.0
    ratio = info.circle_min.area / cmax.area
    return info.circle_large.area * ratio / hull_area


@dataclass
class PairRow:
    """Metrics of one base/alternative pair under one configuration."""

    change_type: str
    base_index: int
    alt_index: int
    approach: str                 # inner approach, or "-" for outer-only pairs
    classification: str           # "outer" | "inner" | "mixed"
    hausdorff_base: float
    hausdorff_enhanced: float
    iou_base: float
    iou_enhanced: float
    shape_change_base: float
    shape_change_enhanced: float
    whitespace_base: Optional[float]
    whitespace_enhanced: Optional[float]
    aesthetics_base: float
    aesthetics_enhanced: float
    crossings_base: int
    crossings_enhanced: int
    init_average: float
    final_average: float
    guard_ok: bool
    applied_any: bool
    reasons: str


@dataclass
class EvalReport:
    rows: List[PairRow]
    meta: Dict[str, object]


def _mirror_tol(config: EnhanceConfig) -> float:
    return config.layout.horizontal_spacing / 2.0


def _owning_layout(change: Change, base_layout: Layout,
                   alt_layout: Layout) -> Layout:
    return alt_layout if change.sign == "added" else base_layout


def _pair_whitespace(inner_changes: Sequence[Change], base_layout: Layout,
                     alt_layout: Layout, config: EnhanceConfig) -> Optional[float]:
    """Mean relative white space over the pair's interior changes.

    None when the pair has no interior change at all (the metric does
    not apply), never because a value degenerated to zero.
    """
    if not inner_changes:
        return None
    values = [relative_whitespace(_owning_layout(change, base_layout, alt_layout),
                                  change, config)
              for change in inner_changes]
    return sum(values) / len(values)


def evaluate_pair(base: DirectedGraph, alternative: DirectedGraph,
                  change_type: str, base_index: int, alt_index: int,
                  approaches: Sequence[str],
                  config: EnhanceConfig) -> List[PairRow]:
    """Baseline and enhanced metrics for one pair, one row per approach.

    Pairs whose changes are all hull-relevant do not depend on the inner
    approach; they produce a single row tagged ``-``.
    """
    supergraph = build_supergraph(base, alternative)
    initial = layout_supergraph(supergraph, config.layout)
    init_score = score_aesthetics(initial, mirror_tolerance=_mirror_tol(config))

    base_plain = restrict_layout(initial, base)
    alt_plain = restrict_layout(initial, alternative)
    hull_base_plain = concave_hull(base_plain, config.hull)
    hull_alt_plain = concave_hull(alt_plain, config.hull)
    spacing = config.hull.ray_spacing / 2.0
    hausdorff_base = normalized_hausdorff(hull_base_plain, hull_alt_plain, spacing)
    iou_base = intersection_over_union(hull_base_plain, hull_alt_plain)
    aesthetics_base = score_aesthetics(
        alt_plain, mirror_tolerance=_mirror_tol(config)).average
    crossings_base = layout_crossings(alt_plain)

    increased, _records = increase_outer_relevant(initial, config, init_score)
    changes = changes_of(diff(base, alternative))
    plans = classify_changes(increased, changes, config)
    inner_changes = [c for c, route in plans if route == "inner"]
    routes = {route for _, route in plans}
    if not routes:
        classification = "outer"
    elif routes == {"inner"}:
        classification = "inner"
    elif "inner" in routes:
        classification = "mixed"
    else:
        classification = "outer"

    whitespace_base = _pair_whitespace(inner_changes, base_plain, alt_plain, config)

    effective = list(approaches) if inner_changes else ["-"]
    rows: List[PairRow] = []
    for approach in effective:
        cfg = config if approach == "-" else replace(config, inner_approach=approach)
        enhanced, outcomes = enhance_changes(supergraph, increased.copy(),
                                             init_score, cfg)
        if not any(outcome.applied for outcome in outcomes):
            # The increase phase only makes room for enhancements; when
            # none applies, its displacement must not outlive them.
            enhanced = initial.copy()
        final_score = score_aesthetics(enhanced, mirror_tolerance=_mirror_tol(cfg))
        base_enh = restrict_layout(enhanced, base)
        alt_enh = restrict_layout(enhanced, alternative)
        hull_base_enh = concave_hull(base_enh, cfg.hull)
        hull_alt_enh = concave_hull(alt_enh, cfg.hull)
        iou_enh = intersection_over_union(hull_base_enh, hull_alt_enh)
        rows.append(PairRow(
            change_type=change_type,
            base_index=base_index,
            alt_index=alt_index,
            approach=approach,
            classification=classification,
            hausdorff_base=hausdorff_base,
            hausdorff_enhanced=normalized_hausdorff(hull_base_enh, hull_alt_enh,
                                                    spacing),
            iou_base=iou_base,
            iou_enhanced=iou_enh,
            shape_change_base=1.0 - iou_base,
            shape_change_enhanced=1.0 - iou_enh,
            whitespace_base=whitespace_base,
            whitespace_enhanced=_pair_whitespace(inner_changes, base_enh,
                                                 alt_enh, cfg),
            aesthetics_base=aesthetics_base,
            aesthetics_enhanced=score_aesthetics(
                alt_enh, mirror_tolerance=_mirror_tol(cfg)).average,
            crossings_base=crossings_base,
            crossings_enhanced=layout_crossings(alt_enh),
            init_average=init_score.average,
            final_average=final_score.average,
            guard_ok=final_score.average >= init_score.average
            * (1.0 - cfg.aesthetics_tolerance),
            applied_any=any(o.applied for o in outcomes),
            reasons=";".join(o.reason for o in outcomes),
        ))
    return rows


def _worker(task) -> List[PairRow]:
    base, alt, change_type, base_index, alt_index, approaches, config = task
    return evaluate_pair(base, alt, change_type, base_index, alt_index,
                         approaches, config)


def evaluate(bases: Sequence[DirectedGraph],
             change_types: Sequence[str] = CHANGE_TYPES,
             approaches: Sequence[str] = ("ws1", "ws3", "ws4"),
             config: EnhanceConfig | None = None,
             seed: int = 0,
             cap: int = 200,
             workers: int = 1) -> EvalReport:
    """Run the paired evaluation over a corpus.

    Deterministic for a fixed corpus, seed, and configuration; rows come
    back sorted regardless of worker scheduling.
    """
    config = config or EnhanceConfig()
    started = time.perf_counter()
    tasks = []
    for ti, change_type in enumerate(change_types):
        for bi, base in enumerate(bases):
            alt_seed = seed + 1009 * (bi + 1) + ti
            alternatives = generate_alternatives(base, change_type, alt_seed, cap)
            for ai, (alt, _changeset) in enumerate(alternatives):
                tasks.append((base, alt, change_type, bi, ai, tuple(approaches),
                              config))
    rows: List[PairRow] = []
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for chunk in pool.map(_worker, tasks, chunksize=8):
                rows.extend(chunk)
    else:
        for task in tasks:
            rows.extend(_worker(task))
    rows.sort(key=lambda r: (r.change_type, r.base_index, r.alt_index, r.approach))
    meta = {
        "bases": len(bases),
        "change_types": list(change_types),
        "approaches": list(approaches),
        "seed": seed,
        "cap": cap,
        "pairs": len(tasks),
        "rows": len(rows),
        "elapsed_seconds": round(time.perf_counter() - started, 3),
    }
    return EvalReport(rows, meta)


# ---------------------------------------------------------------------------
# aggregation
# ---------------------------------------------------------------------------

def _mean(values: Iterable[float]) -> Optional[float]:
    values = [v for v in values if v is not None]
    if not values:
        return None
    return sum(values) / len(values)


def _metric_pairs(rows: Sequence[PairRow], metric: str
                  ) -> List[Tuple[float, float]]:
    pairs = []
    for r in rows:
        b = getattr(r, f"{metric}_base")
        e = getattr(r, f"{metric}_enhanced")
        if b is None or e is None:
            continue
        pairs.append((b, e))
    return pairs


def _group_rows(rows: Sequence[PairRow], by_approach: bool
                ) -> Dict[Tuple[str, str], List[PairRow]]:
    """Group rows by change type (and approach).

    Rows tagged ``-`` did not depend on the inner approach (every change
    was hull-relevant); in per-approach tables they count toward every
    approach, mirroring that a run configured with any approach would
    have produced exactly that row.
    """
    groups: Dict[Tuple[str, str], List[PairRow]] = {}
    if by_approach:
        approaches = sorted({r.approach for r in rows if r.approach != "-"})
        for r in rows:
            targets = approaches if (r.approach == "-" and approaches) \
                else [r.approach]
            for approach in targets:
                groups.setdefault((r.change_type, approach), []).append(r)
    else:
        for r in rows:
            groups.setdefault((r.change_type, "-"), []).append(r)
    return dict(sorted(groups.items()))


def _approach_totals(groups: Dict[Tuple[str, str], List[PairRow]]
                     ) -> Dict[str, int]:
    """Row counts per approach, the denominator of dataset proportions."""
    totals: Dict[str, int] = {}
    for (_, approach), group in groups.items():
        totals[approach] = totals.get(approach, 0) + len(group)
    return totals


def _summary_rows(table: List[dict], columns: Sequence[str]) -> List[dict]:
    """Summary rows per approach: equally weighted and proportion weighted.

    Each approach summarizes its own change-type rows, so per-approach
    tables end with one pair of summary lines per approach.
    """
    out = []
    for approach in sorted({t["approach"] for t in table}):
        data = [t for t in table if t["approach"] == approach]
        for label, weighted in (("average", False), ("weighted", True)):
            row = {"change_type": label, "approach": approach,
                   "pairs": sum(t["pairs"] for t in data),
                   "proportion": 1.0}
            for col in columns:
                vals = [(t[col], t["proportion"])
                        for t in data if t[col] is not None]
                if not vals:
                    row[col] = None
                elif weighted:
                    total = sum(w for _, w in vals)
                    row[col] = (sum(v * w for v, w in vals) / total
                                if total else None)
                else:
                    row[col] = sum(v for v, _ in vals) / len(vals)
            out.append(row)
    return out


def metric_table(rows: Sequence[PairRow], metric: str,
                 by_approach: bool) -> List[dict]:
    """Per-group means, differences, and ratios for one metric."""
    groups = _group_rows(rows, by_approach)
    totals = _approach_totals(groups)
    table = []
    for (change_type, approach), group in groups.items():
        pairs = _metric_pairs(group, metric)
        if not pairs:
            continue
        base_mean = _mean(b for b, _ in pairs)
        enh_mean = _mean(e for _, e in pairs)
        table.append({
            "change_type": change_type,
            "approach": approach,
            "pairs": len(pairs),
            "proportion": len(group) / totals[approach],
            "base_mean": base_mean,
            "enhanced_mean": enh_mean,
            "difference": enh_mean - base_mean,
            "ratio": (enh_mean / base_mean) if base_mean else None,
        })
    table.extend(_summary_rows(
        table, ("base_mean", "enhanced_mean", "difference", "ratio")))
    return table


def wins_table(rows: Sequence[PairRow], metric: str,
               by_approach: bool) -> List[dict]:
    """Better/equal/worse fractions by the sign of enhanced minus base."""
    groups = _group_rows(rows, by_approach)
    totals = _approach_totals(groups)
    table = []
    for (change_type, approach), group in groups.items():
        pairs = _metric_pairs(group, metric)
        if not pairs:
            continue
        worse = sum(1 for b, e in pairs if e - b < -EQUALITY_TOLERANCE)
        better = sum(1 for b, e in pairs if e - b > EQUALITY_TOLERANCE)
        equal = len(pairs) - worse - better
        table.append({
            "change_type": change_type,
            "approach": approach,
            "pairs": len(pairs),
            "proportion": len(group) / totals[approach],
            "base_better": worse / len(pairs),
            "equal": equal / len(pairs),
            "enhanced_better": better / len(pairs),
        })
    table.extend(_summary_rows(
        table, ("base_better", "equal", "enhanced_better")))
    return table


def aesthetics_table(rows: Sequence[PairRow], by_approach: bool) -> List[dict]:
    """Aesthetics averages and crossing counts, base versus enhanced."""
    groups = _group_rows(rows, by_approach)
    totals = _approach_totals(groups)
    table = []
    for (change_type, approach), group in groups.items():
        base_mean = _mean(r.aesthetics_base for r in group)
        enh_mean = _mean(r.aesthetics_enhanced for r in group)
        table.append({
            "change_type": change_type,
            "approach": approach,
            "pairs": len(group),
            "proportion": len(group) / totals[approach],
            "aesthetics_base": base_mean,
            "aesthetics_enhanced": enh_mean,
            "aesthetics_loss": (1.0 - enh_mean / base_mean) if base_mean else None,
            "crossings_base": _mean(r.crossings_base for r in group),
            "crossings_enhanced": _mean(r.crossings_enhanced for r in group),
            "crossings_increase": _mean(r.crossings_enhanced - r.crossings_base
                                        for r in group),
        })
    table.extend(_summary_rows(
        table, ("aesthetics_base", "aesthetics_enhanced", "aesthetics_loss",
                "crossings_base", "crossings_enhanced", "crossings_increase")))
    return table


def aggregate(report: EvalReport) -> Dict[str, List[dict]]:
    """All comparison tables from the per-pair rows.

    Single change types split into hull-relevant (outer) and interior
    (inner) populations.  The combined change types are reported per
    inner approach: their hull-difference tables cover the pairs where
    at least one change touches the outer shape (interior-only pairs
    leave both restrictions' hulls identical, so the intersection-over-
    union score cannot distinguish the implementations there), while
    their white-space table covers the pairs with interior changes.
    """
    rows = report.rows
    singles = [r for r in rows if r.change_type in SINGLE_CHANGE_TYPES]
    outer = [r for r in singles if r.classification == "outer"]
    inner = [r for r in singles if r.classification == "inner"]
    multi = [r for r in rows if r.change_type in MULTI_CHANGE_TYPES]
    multi_outer = [r for r in multi if r.classification in ("outer", "mixed")]
    multi_inner = [r for r in multi if r.classification in ("inner", "mixed")]
    return {
        "outer_hausdorff": metric_table(outer, "hausdorff", by_approach=False),
        "outer_hausdorff_wins": wins_table(outer, "hausdorff", by_approach=False),
        "outer_aesthetics": aesthetics_table(outer, by_approach=False),
        "inner_whitespace": metric_table(inner, "whitespace", by_approach=True),
        "inner_whitespace_wins": wins_table(inner, "whitespace", by_approach=True),
        "inner_aesthetics": aesthetics_table(inner, by_approach=True),
        "multi_shape_change": metric_table(multi_outer, "shape_change",
                                           by_approach=True),
        "multi_shape_change_wins": wins_table(multi_outer, "shape_change",
                                              by_approach=True),
        "multi_whitespace": metric_table(multi_inner, "whitespace",
                                         by_approach=True),
        "multi_aesthetics": aesthetics_table(multi, by_approach=True),
    }
