"""Exports of normalized plans: labeled trees for matching, feature graphs
for the graph matching network."""
from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass

import numpy as np

from ..ltree import LabeledTree, TreeNode
from .rot import CHILD_EDGE, RotGraph, RotNode

NODE_KINDS = (
    "TableScan",
    "Filter",
    "Project",
    "Join",
    "Aggregate",
    "Sort",
    "Limit",
    "SetOp",
    "Values",
    "expr-column",
    "expr-literal",
    "expr-binary",
    "expr-unary",
    "agg-call",
    "expr-subquery",
    "expr-in-subquery",
    "expr-in",
    "expr-between",
    "expr-case",
    "case-when",
    "case-else",
    "sort-key",
)
_KIND_INDEX = {kind: i for i, kind in enumerate(NODE_KINDS)}

ATTR_BUCKETS = 32
LITERAL_BUCKETS = 64
LITERAL_TYPES = ("number", "text", "bool")
FEATURE_DIM = len(NODE_KINDS) + ATTR_BUCKETS + len(LITERAL_TYPES) + LITERAL_BUCKETS + 1

# child down / child up / data-flow down / data-flow up
EDGE_TYPE_COUNT = 4
MAX_POSITIONAL_DEPTH = 16

_NONCOMMUTATIVE_OPS = {"-", "/", "%", "<", "<=", ">", ">=", "like", "not-like"}
_ORDERED_KINDS = {
    "Project",
    "Sort",
    "sort-key",
    "Filter",
    "Limit",
    "expr-in-subquery",
    "expr-in",
    "expr-between",
    "expr-subquery",
    "expr-case",
    "case-when",
    "case-else",
    "agg-call",
    "expr-unary",
}


def _node_ordered(node: RotNode) -> bool:
    if node.kind in _ORDERED_KINDS:
        return True
    if node.kind == "expr-binary" and node.attrs.get("op") in _NONCOMMUTATIVE_OPS:
        return True
    if node.kind == "Join" and node.attrs.get("jointype") == "left":
        return True
    if node.kind == "SetOp" and node.attrs.get("op") == "except":
        return True
    return False


def _tree_node(node: RotNode) -> TreeNode:
    return TreeNode(
        0,
        (node.kind, node.attr_text()),
        [_tree_node(c) for c in node.children],
        _node_ordered(node),
    )


def rot_as_tree(rot: RotGraph) -> LabeledTree:
    """Child-edge tree with (operator kind, attribute digest) labels."""
    return LabeledTree.build(_tree_node(rot.root))


def _stable_bucket(token: str, buckets: int) -> int:
    digest = hashlib.blake2b(token.encode(), digest_size=8).digest()
    return int.from_bytes(digest, "big") % buckets


@dataclass
class EncodedGraph:
    features: np.ndarray  # (n, FEATURE_DIM) float64
    positions: np.ndarray  # (n, d_pos) float64
    edge_src: np.ndarray  # (m,) int64
    edge_dst: np.ndarray  # (m,) int64
    edge_type: np.ndarray  # (m,) int64

    @property
    def num_nodes(self) -> int:
        return self.features.shape[0]

    def permuted(self, order: np.ndarray) -> "EncodedGraph":
        """Relabel nodes: node i moves to position order[i]."""
        inverse = np.empty_like(order)
        inverse[order] = np.arange(len(order))
        return EncodedGraph(
            self.features[inverse],
            self.positions[inverse],
            order[self.edge_src],
            order[self.edge_dst],
            self.edge_type.copy(),
        )


def _positional_code(path: tuple[int, ...], d_pos: int) -> np.ndarray:
    code = np.zeros(d_pos, dtype=np.float64)
    trimmed = path[:MAX_POSITIONAL_DEPTH]
    if not trimmed:
        return code
    half = d_pos // 2
    for level, index in enumerate(trimmed):
        for k in range(half):
            freq = 1.0 / (10000.0 ** (2.0 * k / d_pos))
            phase = (index + 1) * freq + 0.7 * level
            code[2 * k] += math.sin(phase)
            code[2 * k + 1] += math.cos(phase)
    return code / len(trimmed)


def rot_as_graph(rot: RotGraph, d_pos: int = 16) -> EncodedGraph:
    """Feature descriptors plus typed directed edges (tree and data-flow)."""
    nodes = rot.nodes
    n = len(nodes)
    features = np.zeros((n, FEATURE_DIM), dtype=np.float64)
    positions = np.zeros((n, d_pos), dtype=np.float64)

    paths: dict[int, tuple[int, ...]] = {id(rot.root): ()}

    def assign_paths(node: RotNode):
        base = paths[id(node)]
        for i, child in enumerate(node.children):
            paths[id(child)] = base + (i,)
            assign_paths(child)

    assign_paths(rot.root)

    offset_kind = 0
    offset_attr = offset_kind + len(NODE_KINDS)
    offset_ltype = offset_attr + ATTR_BUCKETS
    offset_lbucket = offset_ltype + len(LITERAL_TYPES)
    offset_lmag = offset_lbucket + LITERAL_BUCKETS

    for idx, node in enumerate(nodes):
        kind_index = _KIND_INDEX.get(node.kind)
        if kind_index is None:
            raise ValueError(f"unknown operator kind {node.kind!r}")
        features[idx, offset_kind + kind_index] = 1.0
        for key, value in sorted(node.semantic_attrs().items()):
            if node.kind == "expr-literal" and key == "value":
                continue
            token = f"{key}={value}"
            features[idx, offset_attr + _stable_bucket(token, ATTR_BUCKETS)] += 1.0
        if node.kind == "expr-literal":
            type_tag = node.attrs.get("type", "text")
            if type_tag in LITERAL_TYPES:
                features[idx, offset_ltype + LITERAL_TYPES.index(type_tag)] = 1.0
            token = repr(node.attrs.get("value"))
            features[idx, offset_lbucket + _stable_bucket(token, LITERAL_BUCKETS)] = 1.0
            value = node.attrs.get("value")
            if isinstance(value, (int, float)) and not isinstance(value, bool):
                magnitude = min(math.log10(1.0 + abs(float(value))) / 6.0, 1.0)
                features[idx, offset_lmag] = math.copysign(magnitude, value) if value else 0.0
        positions[idx] = _positional_code(paths[id(node)], d_pos)

    src: list[int] = []
    dst: list[int] = []
    etype: list[int] = []
    for a, b, kind in rot.edges:
        base = 0 if kind == CHILD_EDGE else 2
        src.extend((a, b))
        dst.extend((b, a))
        etype.extend((base, base + 1))

    return EncodedGraph(
        features,
        positions,
        np.asarray(src, dtype=np.int64),
        np.asarray(dst, dtype=np.int64),
        np.asarray(etype, dtype=np.int64),
    )
