"""Relational operator tree: nodes, graph materialization, errors.

Operator kinds: TableScan, Filter, Project, Join, Aggregate, Sort, Limit,
SetOp, Values. Expression kinds: expr-column, expr-literal, expr-binary,
expr-unary, agg-call, expr-subquery, expr-in-subquery, expr-exists,
expr-case, case-when, case-else, sort-key.

Attribute keys starting with "_" are plumbing (relation instance ids,
cached schemas) and never contribute to labels, digests, or equality.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Any

CHILD_EDGE = "child"
DATAFLOW_EDGE = "data-flow"


class RotError(Exception):
    """Lowering failure: class is one of unresolved-column, unresolved-table,
    ambiguous-name, unsupported."""

    def __init__(self, error_class: str, message: str):
        super().__init__(message)
        self.error_class = error_class
        self.message = message

    def __str__(self) -> str:
        return f"{self.error_class}: {self.message}"


@dataclass
class RotNode:
    kind: str
    attrs: dict[str, Any] = field(default_factory=dict)
    children: list["RotNode"] = field(default_factory=list)

    def semantic_attrs(self) -> dict[str, Any]:
        return {k: v for k, v in self.attrs.items() if not k.startswith("_")}

    def attr_text(self) -> str:
        parts = []
        for key in sorted(self.attrs):
            if key.startswith("_"):
                continue
            value = self.attrs[key]
            if value is None or value is False:
                continue
            parts.append(f"{key}={value!r}" if isinstance(value, str) else f"{key}={value}")
        return " ".join(parts)

    def walk(self):
        yield self
        for child in self.children:
            yield from child.walk()

    def clone(self) -> "RotNode":
        return RotNode(self.kind, dict(self.attrs), [c.clone() for c in self.children])

    def structurally_equal(self, other: "RotNode") -> bool:
        if self.kind != other.kind or self.semantic_attrs() != other.semantic_attrs():
            return False
        if len(self.children) != len(other.children):
            return False
        return all(a.structurally_equal(b) for a, b in zip(self.children, other.children))


def subtree_digest(node: RotNode) -> str:
    parts = [node.kind, node.attr_text()]
    parts.extend(subtree_digest(c) for c in node.children)
    return hashlib.blake2b("|".join(parts).encode(), digest_size=8).hexdigest()


@dataclass
class RotGraph:
    """Materialized graph view of an operator tree.

    nodes are in preorder (ids equal list positions); edges carry a kind tag.
    """

    root: RotNode
    nodes: list[RotNode]
    edges: list[tuple[int, int, str]]
    node_ids: dict[int, int]  # id(RotNode object) -> node index

    @classmethod
    def from_root(cls, root: RotNode) -> "RotGraph":
        nodes: list[RotNode] = []
        node_ids: dict[int, int] = {}

        def visit(node: RotNode):
            node_ids[id(node)] = len(nodes)
            nodes.append(node)
            for child in node.children:
                visit(child)

        visit(root)

        edges: list[tuple[int, int, str]] = []
        producers: dict[int, int] = {}
        for node in nodes:
            rel_def = node.attrs.get("_rel_def")
            if rel_def is not None:
                producers[rel_def] = node_ids[id(node)]
        for node in nodes:
            for child in node.children:
                edges.append((node_ids[id(node)], node_ids[id(child)], CHILD_EDGE))
        for node in nodes:
            consumer = node_ids[id(node)]
            rel = node.attrs.get("_rel")
            if rel is not None and rel in producers:
                edges.append((producers[rel], consumer, DATAFLOW_EDGE))
            agg_rel = node.attrs.get("_agg_rel")
            if agg_rel is not None and agg_rel in producers:
                edges.append((producers[agg_rel], consumer, DATAFLOW_EDGE))
        return cls(root, nodes, edges, node_ids)

    def __len__(self) -> int:
        return len(self.nodes)

    def structurally_equal(self, other: "RotGraph") -> bool:
        return self.root.structurally_equal(other.root)

    def dump(self) -> dict:
        """JSON-friendly rendering (used by the CLI plan dump)."""
        return {
            "nodes": [
                {"id": i, "kind": n.kind, "attrs": n.semantic_attrs()}
                for i, n in enumerate(self.nodes)
            ],
            "edges": [{"src": s, "dst": d, "kind": k} for s, d, k in self.edges],
            "root": self.node_ids[id(self.root)],
        }


TRUE_LITERAL_ATTRS = {"type": "bool", "value": True}


def true_literal() -> RotNode:
    return RotNode("expr-literal", dict(TRUE_LITERAL_ATTRS))


def is_true_literal(node: RotNode) -> bool:
    return node.kind == "expr-literal" and node.semantic_attrs() == TRUE_LITERAL_ATTRS
