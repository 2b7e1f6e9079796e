"""Command line interface.

Four subcommands cover the workflow:

* ``layout``   -- lay out one graph, write layout JSON (and SVG).
* ``render``   -- render a saved layout JSON to SVG.
* ``compare``  -- run the full comparison pipeline on a base/alternative
  pair, writing both drawings with a shared view box plus an outcome log.
* ``evaluate`` -- run the paired evaluation over a generated corpus and
  write CSV tables, a JSON summary, figures, and the configuration echo.

Exit codes: 0 on success, 2 for invalid input (unreadable files,
malformed graphs, bad configuration or flags), 1 for unexpected runtime
failures.
"""

from __future__ import annotations

import argparse
import json
import sys
import traceback
from pathlib import Path
from typing import List, Optional, Sequence

from .config import ConfigError, RunConfig, format_config, load_config, resolve
from .enhance import INNER_APPROACHES, change_circles, changes_of
from .geometry import concave_hull
from .harness import CHANGE_TYPES, evaluate, generate_base_graphs
from .model import GraphError, diff, load_graph_json
from .render import (load_layout_json, membership_colors, render_svg,
                     save_layout_json, shared_viewbox)
from .report import write_report
from .sugiyama import layout_graph
from . import enhance as enhance_mod

OVERLAYS = ("hull", "circles")


def _read_text(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise GraphError(f"cannot read {path}: {exc}") from exc


def _write_text(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")


def _load_run_config(args) -> RunConfig:
    base = load_config(args.config) if args.config else RunConfig()
    overrides = {}
    if getattr(args, "seed", None) is not None:
        overrides["seed"] = args.seed
    if getattr(args, "approach", None) is not None:
        overrides["inner_approach"] = args.approach
    return resolve(base, overrides)


def _parse_overlays(raw: Optional[str], allowed: Sequence[str]) -> List[str]:
    if not raw:
        return []
    parts = [p.strip() for p in raw.split(",") if p.strip()]
    for part in parts:
        if part not in OVERLAYS:
            raise ConfigError(f"unknown overlay {part!r}; "
                              f"choose from {', '.join(OVERLAYS)}")
        if part not in allowed:
            raise ConfigError(f"overlay {part!r} is not available here")
    return parts


def _cmd_layout(args) -> int:
    config = _load_run_config(args)
    overlays = _parse_overlays(args.overlay, allowed=("hull",))
    graph = load_graph_json(_read_text(args.graph))
    layout = layout_graph(graph, config.to_layout_config())
    out = Path(args.out)
    _write_text(out / "layout.json", save_layout_json(layout))
    if args.svg or overlays:
        hull = (concave_hull(layout, config.to_hull_config())
                if "hull" in overlays else None)
        svg = render_svg(layout, hull=hull,
                         comment=f"nodes={len(graph.nodes)} "
                                 f"edges={len(graph.edges)}")
        _write_text(out / "layout.svg", svg)
    _write_text(out / "config.txt", format_config(config))
    print(f"layout written to {out}")
    return 0


def _cmd_render(args) -> int:
    config = _load_run_config(args)
    overlays = _parse_overlays(args.overlay, allowed=("hull",))
    layout = load_layout_json(_read_text(args.layout))
    hull = (concave_hull(layout, config.to_hull_config())
            if "hull" in overlays else None)
    svg = render_svg(layout, hull=hull,
                     comment=f"nodes={len(layout.graph.nodes)} "
                             f"edges={len(layout.graph.edges)}")
    out = Path(args.out)
    _write_text(out / "layout.svg", svg)
    _write_text(out / "config.txt", format_config(config))
    print(f"render written to {out}")
    return 0


def _overlay_circles(report, config, sign: str):
    """Inscribed circles at the interior changes of one restriction."""
    circles = []
    layout = (report.alternative_layout if sign == "added"
              else report.base_layout)
    changeset = diff(report.supergraph.base, report.supergraph.alternative)
    for change in changes_of(changeset):
        if change.sign != sign:
            continue
        if enhance_mod.is_outer_shape_relevant(layout, change, config):
            continue
        info = change_circles(layout, change, config)
        if info is not None:
            circles.extend((info.circle_large, info.circle_opposite))
    return circles


def _cmd_compare(args) -> int:
    config = _load_run_config(args)
    overlays = _parse_overlays(args.overlay, allowed=OVERLAYS)
    base = load_graph_json(_read_text(args.base))
    alternative = load_graph_json(_read_text(args.alternative))
    econf = config.to_enhance_config()
    report = enhance_mod.run_pipeline(base, alternative, econf,
                                      enhance=not args.no_enhance)
    changeset = diff(base, alternative)

    hulls = []
    hull_base = hull_alt = None
    if "hull" in overlays:
        hull_base = concave_hull(report.base_layout, econf.hull)
        hull_alt = concave_hull(report.alternative_layout, econf.hull)
        hulls = [hull_base, hull_alt]
    box = shared_viewbox([report.base_layout, report.alternative_layout],
                         hulls=hulls)
    node_colors, edge_colors = membership_colors(report.supergraph)
    out = Path(args.out)
    _write_text(out / "base.svg", render_svg(
        report.base_layout, viewbox=box, node_colors=node_colors,
        edge_colors=edge_colors, changed_nodes=changeset.removed_nodes,
        changed_edges=changeset.removed_edges, hull=hull_base,
        circles=(_overlay_circles(report, econf, "removed")
                 if "circles" in overlays else ()),
        comment="base drawing"))
    _write_text(out / "alternative.svg", render_svg(
        report.alternative_layout, viewbox=box, node_colors=node_colors,
        edge_colors=edge_colors, changed_nodes=changeset.added_nodes,
        changed_edges=changeset.added_edges, hull=hull_alt,
        circles=(_overlay_circles(report, econf, "added")
                 if "circles" in overlays else ()),
        comment="alternative drawing"))
    _write_text(out / "base_layout.json", save_layout_json(report.base_layout))
    _write_text(out / "alternative_layout.json",
                save_layout_json(report.alternative_layout))

    outcome = {
        "initial_average": report.initial_score.average,
        "final_average": report.final_score.average,
        "increase_moves": [{"leaf": r.leaf, "direction": r.direction,
                            "moved": sorted(r.moved)}
                           for r in report.increase_records],
        "changes": [{"kind": o.change.kind,
                     "element": list(o.change.element)
                     if o.change.kind == "edge" else o.change.element,
                     "sign": o.change.sign, "route": o.route,
                     "applied": o.applied, "iterations": o.iterations_used,
                     "reason": o.reason}
                    for o in report.outcomes],
    }
    _write_text(out / "outcomes.json",
                json.dumps(outcome, indent=2, sort_keys=True) + "\n")
    _write_text(out / "config.txt", format_config(config))
    for entry in outcome["changes"]:
        element = entry["element"]
        name = "->".join(element) if isinstance(element, list) else element
        print(f"{entry['sign']} {entry['kind']} {name}: {entry['route']} "
              f"({entry['reason']}, iterations={entry['iterations']})")
    print(f"aesthetics {outcome['initial_average']:.4f} -> "
          f"{outcome['final_average']:.4f}")
    print(f"comparison written to {out}")
    return 0


def _parse_list(raw: Optional[str], allowed: Sequence[str],
                default: Sequence[str]) -> List[str]:
    if not raw:
        return list(default)
    parts = [p.strip() for p in raw.split(",") if p.strip()]
    for part in parts:
        if part not in allowed:
            raise ConfigError(f"unknown value {part!r}; "
                              f"choose from {', '.join(allowed)}")
    return parts


def _cmd_evaluate(args) -> int:
    config = _load_run_config(args)
    overrides = {}
    for key, name in (("bases", "base_count"), ("nodes", "base_nodes"),
                      ("edges", "base_edges"), ("cap", "multi_cap")):
        value = getattr(args, key)
        if value is not None:
            overrides[name] = value
    config = resolve(config, overrides)
    change_types = _parse_list(args.types, CHANGE_TYPES, CHANGE_TYPES)
    approaches = _parse_list(args.approaches, INNER_APPROACHES,
                             INNER_APPROACHES)
    bases = generate_base_graphs(config.base_count, config.base_nodes,
                                 config.base_edges, config.seed)
    report = evaluate(bases, change_types=change_types, approaches=approaches,
                      config=config.to_enhance_config(), seed=config.seed,
                      cap=config.multi_cap, workers=args.workers)
    written = write_report(Path(args.out), config, report)
    print(f"{report.meta['pairs']} pairs, {report.meta['rows']} rows "
          f"in {report.meta['elapsed_seconds']}s")
    for path in written:
        print(f"wrote {path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dagshape",
        description="Shape-preserving comparison layouts for DAGs.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, seed=False, approach=False):
        p.add_argument("--config", help="key = value configuration file")
        p.add_argument("--out", required=True, help="output directory")
        if seed:
            p.add_argument("--seed", type=int, help="override the seed")
        if approach:
            p.add_argument("--approach", choices=INNER_APPROACHES,
                           help="white-space enhancement approach")

    p = sub.add_parser("layout", help="lay out one graph")
    p.add_argument("graph", help="graph JSON file")
    p.add_argument("--svg", action="store_true", help="also write an SVG")
    p.add_argument("--overlay", help="comma list: hull")
    common(p)
    p.set_defaults(func=_cmd_layout)

    p = sub.add_parser("render", help="render a saved layout")
    p.add_argument("layout", help="layout JSON file")
    p.add_argument("--overlay", help="comma list: hull")
    common(p)
    p.set_defaults(func=_cmd_render)

    p = sub.add_parser("compare", help="compare a base/alternative pair")
    p.add_argument("base", help="base graph JSON file")
    p.add_argument("alternative", help="alternative graph JSON file")
    p.add_argument("--overlay", help="comma list: hull,circles")
    p.add_argument("--no-enhance", action="store_true",
                   help="plain foresighted layout only")
    common(p, approach=True)
    p.set_defaults(func=_cmd_compare)

    p = sub.add_parser("evaluate", help="run the paired evaluation")
    p.add_argument("--types", help=f"comma list of change types "
                                   f"({','.join(CHANGE_TYPES)})")
    p.add_argument("--approaches", help="comma list of white-space approaches")
    p.add_argument("--bases", type=int, help="number of base graphs")
    p.add_argument("--nodes", type=int, help="nodes per base graph")
    p.add_argument("--edges", type=int, help="edges per base graph")
    p.add_argument("--cap", type=int,
                   help="sample cap for combined change types")
    p.add_argument("--workers", type=int, default=1,
                   help="parallel worker processes")
    common(p, seed=True)
    p.set_defaults(func=_cmd_evaluate)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (GraphError, ConfigError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception:
        traceback.print_exc()
        return 1


if __name__ == "__main__":
    sys.exit(main())
