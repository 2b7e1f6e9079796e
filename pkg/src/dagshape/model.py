"""Graph model for pairwise DAG comparison.

Provides the value types everything else operates on:

* :class:`DirectedGraph` -- an immutable DAG over string node ids.
* :class:`ChangeSet` -- the element-wise difference between two DAGs.
* :class:`Supergraph` -- the union of a base graph and an alternative,
  with membership tags per element, so both can be drawn from one layout.

Graphs are deliberately dumb containers; algorithms live in the layout
and enhancement modules.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Set, Tuple

Edge = Tuple[str, str]

MEMBER_BASE = "base"
MEMBER_ALTERNATIVE = "alternative"
MEMBER_BOTH = "both"


class GraphError(ValueError):
    """Raised for structurally invalid graphs or graph operations."""


@dataclass(frozen=True)
class DirectedGraph:
    """An immutable directed acyclic graph over string node ids."""

    nodes: FrozenSet[str]
    edges: FrozenSet[Edge]

    @staticmethod
    def from_lists(nodes: Iterable[str], edges: Iterable[Edge]) -> "DirectedGraph":
        return DirectedGraph(frozenset(nodes), frozenset(tuple(e) for e in edges))

    def validate(self) -> None:
        """Check structural invariants; raise :class:`GraphError` on failure."""
        if not self.nodes:
            raise GraphError("graph has no nodes")
        for src, dst in self.edges:
            if src == dst:
                raise GraphError(f"self loop on node {src!r}")
            if src not in self.nodes or dst not in self.nodes:
                raise GraphError(f"edge ({src!r}, {dst!r}) references unknown node")
        order = topological_order(self)
        if order is None:
            raise GraphError("graph contains a directed cycle")

    def parents_map(self) -> Dict[str, List[str]]:
        out: Dict[str, List[str]] = {n: [] for n in self.nodes}
        for src, dst in sorted(self.edges):
            out[dst].append(src)
        return out

    def children_map(self) -> Dict[str, List[str]]:
        out: Dict[str, List[str]] = {n: [] for n in self.nodes}
        for src, dst in sorted(self.edges):
            out[src].append(dst)
        return out

    def sources(self) -> List[str]:
        have_in = {dst for _, dst in self.edges}
        return sorted(n for n in self.nodes if n not in have_in)

    def sinks(self) -> List[str]:
        have_out = {src for src, _ in self.edges}
        return sorted(n for n in self.nodes if n not in have_out)


def topological_order(graph: DirectedGraph) -> List[str] | None:
    """Kahn's algorithm with sorted tie-breaking; None if cyclic."""
    indeg = {n: 0 for n in graph.nodes}
    children = {n: [] for n in graph.nodes}
    for src, dst in graph.edges:
        indeg[dst] += 1
        children[src].append(dst)
    ready = sorted(n for n, d in indeg.items() if d == 0)
    order: List[str] = []
    while ready:
        node = ready.pop(0)
        order.append(node)
        inserted = False
        for child in sorted(children[node]):
            indeg[child] -= 1
            if indeg[child] == 0:
                ready.append(child)
                inserted = True
        if inserted:
            ready.sort()
    if len(order) != len(graph.nodes):
        return None
    return order


@dataclass(frozen=True)
class ChangeSet:
    """Element-wise difference between a base graph and an alternative."""

    added_nodes: FrozenSet[str]
    removed_nodes: FrozenSet[str]
    added_edges: FrozenSet[Edge]
    removed_edges: FrozenSet[Edge]

    def is_empty(self) -> bool:
        return not (self.added_nodes or self.removed_nodes
                    or self.added_edges or self.removed_edges)

    def changed_nodes(self) -> FrozenSet[str]:
        return self.added_nodes | self.removed_nodes

    def changed_edges(self) -> FrozenSet[Edge]:
        return self.added_edges | self.removed_edges


def diff(base: DirectedGraph, alternative: DirectedGraph) -> ChangeSet:
    """Changes that turn ``base`` into ``alternative``."""
    return ChangeSet(
        added_nodes=alternative.nodes - base.nodes,
        removed_nodes=base.nodes - alternative.nodes,
        added_edges=alternative.edges - base.edges,
        removed_edges=base.edges - alternative.edges,
    )


def apply_changes(base: DirectedGraph, changes: ChangeSet) -> DirectedGraph:
    """Apply a change set to a base graph."""
    nodes = (base.nodes - changes.removed_nodes) | changes.added_nodes
    edges = (base.edges - changes.removed_edges) | changes.added_edges
    return DirectedGraph(frozenset(nodes), frozenset(edges))


@dataclass(frozen=True)
class Supergraph:
    """Union of base and alternative with per-element membership tags.

    ``graph`` holds every node and edge of either input; membership maps
    tag each element 'base', 'alternative', or 'both'.
    """

    graph: DirectedGraph
    node_membership: Dict[str, str] = field(hash=False)
    edge_membership: Dict[Edge, str] = field(hash=False)
    base: DirectedGraph = field(hash=False)
    alternative: DirectedGraph = field(hash=False)

    def restrict_graph(self, which: str) -> DirectedGraph:
        if which == MEMBER_BASE:
            return self.base
        if which == MEMBER_ALTERNATIVE:
            return self.alternative
        raise GraphError(f"unknown restriction {which!r}")


def build_supergraph(base: DirectedGraph, alternative: DirectedGraph) -> Supergraph:
    """Union both graphs and tag element membership.

    Raises :class:`GraphError` if the union is cyclic, which can happen
    for individually acyclic inputs whose edges disagree on direction.
    """
    base.validate()
    alternative.validate()
    union = DirectedGraph(base.nodes | alternative.nodes, base.edges | alternative.edges)
    if topological_order(union) is None:
        raise GraphError("union of base and alternative contains a cycle")

    def tag(in_base: bool, in_alt: bool) -> str:
        if in_base and in_alt:
            return MEMBER_BOTH
        return MEMBER_BASE if in_base else MEMBER_ALTERNATIVE

    node_membership = {n: tag(n in base.nodes, n in alternative.nodes)
                       for n in union.nodes}
    edge_membership = {e: tag(e in base.edges, e in alternative.edges)
                       for e in union.edges}
    return Supergraph(union, node_membership, edge_membership, base, alternative)


def load_graph_json(text: str) -> DirectedGraph:
    """Parse the wire format ``{"nodes": [{"id": ...}], "edges": [...]}}``."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphError(f"malformed JSON at byte offset {exc.pos}: {exc.msg}") from exc
    if not isinstance(data, dict):
        raise GraphError("top-level JSON value must be an object")
    raw_nodes = data.get("nodes")
    raw_edges = data.get("edges")
    if not isinstance(raw_nodes, list) or not isinstance(raw_edges, list):
        raise GraphError("expected 'nodes' and 'edges' arrays")
    nodes: Set[str] = set()
    for item in raw_nodes:
        if not isinstance(item, dict) or not isinstance(item.get("id"), str):
            raise GraphError(f"node entry {item!r} lacks a string 'id'")
        nodes.add(item["id"])
    edges: Set[Edge] = set()
    for item in raw_edges:
        if (not isinstance(item, dict)
                or not isinstance(item.get("source"), str)
                or not isinstance(item.get("target"), str)):
            raise GraphError(f"edge entry {item!r} lacks string 'source'/'target'")
        edges.add((item["source"], item["target"]))
    graph = DirectedGraph(frozenset(nodes), frozenset(edges))
    graph.validate()
    return graph


def dump_graph_json(graph: DirectedGraph) -> str:
    data = {
        "nodes": [{"id": n} for n in sorted(graph.nodes)],
        "edges": [{"source": s, "target": t} for s, t in sorted(graph.edges)],
    }
    return json.dumps(data, indent=2)
