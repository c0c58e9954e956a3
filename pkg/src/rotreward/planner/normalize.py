"""Normalization passes over relational operator trees.

Fixed, ordered pass list applied bottom-up in one sweep:
  1. IN-list expansion into OR (NOT IN into AND of inequalities)
  2. BETWEEN into a conjunction of comparisons
  3. filter merging plus predicate flattening with commutative operands
     ordered canonically by subtree digest
  4. double-negation elimination and NOT pushdown over comparisons
     (rewritten conjunctions are re-canonicalized)
  5. redundant (identity) Project elimination
  6. constant-true Filter removal
  7. inner-join input ordering by subtree digest

Every pass preserves query semantics on the executable subset; the whole
sweep is idempotent.
"""
from __future__ import annotations

from .rot import RotGraph, RotNode, is_true_literal, subtree_digest, true_literal

COMMUTATIVE_OPS = {"and", "or", "=", "!=", "+", "*"}
NEGATED_COMPARISON = {"=": "!=", "!=": "=", "<": ">=", ">=": "<", ">": "<=", "<=": ">"}
FLIPPED_UNARY = {"isnull": "notnull", "notnull": "isnull", "like": "not-like", "not-like": "like"}


def _expand_in(node: RotNode) -> RotNode:
    if node.kind != "expr-in":
        return node
    lhs = node.children[0]
    items = node.children[1:]
    negated = bool(node.attrs.get("negated"))
    op = "!=" if negated else "="
    glue = "and" if negated else "or"
    terms = [
        RotNode("expr-binary", {"op": op}, [lhs.clone(), item]) for item in items
    ]
    if len(terms) == 1:
        return terms[0]
    combined = terms[0]
    for term in terms[1:]:
        combined = RotNode("expr-binary", {"op": glue}, [combined, term])
    return combined


def _expand_between(node: RotNode) -> RotNode:
    if node.kind != "expr-between":
        return node
    value, low, high = node.children
    ge = RotNode("expr-binary", {"op": ">="}, [value, low])
    le = RotNode("expr-binary", {"op": "<="}, [value.clone(), high])
    both = RotNode("expr-binary", {"op": "and"}, [ge, le])
    if node.attrs.get("negated"):
        return RotNode("expr-unary", {"op": "not"}, [both])
    return both


def _canonicalize_bool(node: RotNode) -> RotNode:
    """Flatten nested AND/OR chains into n-ary nodes with digest-sorted operands;
    order the operands of commutative binary operators."""
    if node.kind != "expr-binary":
        return node
    op = node.attrs["op"]
    if op in ("and", "or"):
        operands: list[RotNode] = []

        def flatten(child: RotNode):
            if child.kind == "expr-binary" and child.attrs["op"] == op:
                for grandchild in child.children:
                    flatten(grandchild)
            else:
                operands.append(child)

        for child in node.children:
            flatten(child)
        operands.sort(key=subtree_digest)
        return RotNode("expr-binary", {"op": op}, operands)
    if op in COMMUTATIVE_OPS and len(node.children) == 2:
        left, right = node.children
        if subtree_digest(left) > subtree_digest(right):
            node.children = [right, left]
    return node


def _push_not(node: RotNode) -> RotNode:
    if node.kind != "expr-unary" or node.attrs.get("op") != "not":
        return node
    inner = node.children[0]
    if inner.kind == "expr-unary" and inner.attrs.get("op") == "not":
        return inner.children[0]
    if inner.kind == "expr-unary" and inner.attrs.get("op") in FLIPPED_UNARY:
        return RotNode("expr-unary", {"op": FLIPPED_UNARY[inner.attrs["op"]]}, inner.children)
    if inner.kind == "expr-binary":
        op = inner.attrs["op"]
        if op in NEGATED_COMPARISON:
            return RotNode("expr-binary", {"op": NEGATED_COMPARISON[op]}, inner.children)
        if op in ("and", "or"):
            flipped = "or" if op == "and" else "and"
            negated_children = [
                _push_not(RotNode("expr-unary", {"op": "not"}, [c])) for c in inner.children
            ]
            return _canonicalize_bool(RotNode("expr-binary", {"op": flipped}, negated_children))
    if inner.kind == "expr-binary" and inner.attrs["op"] == "not-like":
        return RotNode("expr-binary", {"op": "like"}, inner.children)
    if inner.kind == "expr-in-subquery":
        return RotNode(
            "expr-in-subquery",
            {"negated": not inner.attrs.get("negated")},
            inner.children,
        )
    return node


def _merge_filters(node: RotNode) -> RotNode:
    if node.kind != "Filter":
        return node
    child = node.children[0]
    if child.kind == "Filter":
        merged_pred = RotNode(
            "expr-binary", {"op": "and"}, [child.children[1], node.children[1]]
        )
        node = RotNode("Filter", {}, [child.children[0], merged_pred])
        node = _merge_filters(node)
    node.children[1] = _canonicalize_bool(node.children[1])
    return node


def _output_columns(node: RotNode) -> list[tuple[object, str]] | None:
    """(producer rel, label) pairs of a node's output, None when unknown."""
    kind = node.kind
    if kind == "TableScan":
        rel = node.attrs.get("_rel_def")
        table = node.attrs.get("table")
        return [(rel, f"{table}.{name}") for name, _ in node.attrs.get("_columns", [])]
    if kind in ("Filter", "Sort", "Limit"):
        return _output_columns(node.children[0])
    if kind == "Join":
        left = _output_columns(node.children[0])
        right = _output_columns(node.children[1])
        if left is None or right is None:
            return None
        return left + right
    if kind == "Project":
        names = node.attrs.get("_names")
        if names is None:
            return None
        out = []
        for name, expr in zip(names, node.children[1:]):
            if expr.kind == "expr-column":
                out.append((expr.attrs.get("_rel"), expr.attrs["column"]))
            else:
                out.append((node.attrs.get("_rel_def"), f"?.{name}"))
        return out
    return None


def _eliminate_identity_project(node: RotNode) -> RotNode:
    if node.kind != "Project":
        return node
    exprs = node.children[1:]
    if not all(e.kind == "expr-column" for e in exprs):
        return node
    input_columns = _output_columns(node.children[0])
    if input_columns is None or len(input_columns) != len(exprs):
        return node
    for (rel, label), expr in zip(input_columns, exprs):
        if expr.attrs.get("_rel") != rel or expr.attrs["column"] != label:
            return node
    return node.children[0]


def _drop_true_filter(node: RotNode) -> RotNode:
    if node.kind == "Filter" and is_true_literal(node.children[1]):
        return node.children[0]
    return node


def _order_inner_join(node: RotNode) -> RotNode:
    if node.kind == "Join" and node.attrs.get("jointype") == "inner":
        left, right, cond = node.children
        if subtree_digest(left) > subtree_digest(right):
            node.children = [right, left, cond]
    return node


def _normalize_node(node: RotNode) -> RotNode:
    node.children = [_normalize_node(c) for c in node.children]
    # rewrites that synthesize new subtrees re-enter the sweep so their
    # fresh nodes get canonicalized too
    expanded = _expand_in(node)
    if expanded is not node:
        return _normalize_node(expanded)
    expanded = _expand_between(node)
    if expanded is not node:
        return _normalize_node(expanded)
    node = _canonicalize_bool(node)
    node = _merge_filters(node)
    pushed = _push_not(node)
    if pushed is not node:
        return _normalize_node(pushed)
    node = _eliminate_identity_project(node)
    node = _drop_true_filter(node)
    node = _order_inner_join(node)
    return node


def normalize(rot: RotGraph) -> RotGraph:
    """Return the canonical form of a plan; input is left untouched."""
    root = _normalize_node(rot.root.clone())
    return RotGraph.from_root(root)
