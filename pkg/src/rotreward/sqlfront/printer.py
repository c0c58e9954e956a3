"""Canonical text rendering of parsed SQL: uppercase keywords, single spaces."""
from __future__ import annotations

from .nodes import AstNode, SqlAst

_SET_OP_KEYWORDS = {
    "union": "UNION",
    "union-all": "UNION ALL",
    "except": "EXCEPT",
    "intersect": "INTERSECT",
}


def _format_literal(attrs) -> str:
    if attrs["type"] == "text":
        escaped = str(attrs["value"]).replace("'", "''")
        return f"'{escaped}'"
    return repr(attrs["value"])


def _print_expr(node: AstNode) -> str:
    kind = node.kind
    if kind == "expr-literal":
        return _format_literal(node.attrs)
    if kind == "expr-column":
        qualifier = node.attrs.get("qualifier")
        name = node.attrs["column"]
        return f"{qualifier}.{name}" if qualifier else name
    if kind == "expr-binary":
        op = node.attrs["op"].upper()
        left, right = (_print_expr(c) for c in node.children)
        if op in ("AND", "OR", "LIKE", "NOT-LIKE"):
            op = op.replace("NOT-LIKE", "NOT LIKE")
            return f"({left} {op} {right})"
        return f"{left} {op} {right}"
    if kind == "expr-unary":
        op = node.attrs["op"]
        inner = _print_expr(node.children[0])
        if op == "not":
            return f"NOT ({inner})"
        if op == "-":
            return f"-{inner}"
        if op == "isnull":
            return f"{inner} IS NULL"
        if op == "notnull":
            return f"{inner} IS NOT NULL"
        if op == "exists":
            return f"EXISTS {inner}"
        raise ValueError(f"unknown unary op {op}")
    if kind == "expr-function":
        name = node.attrs["name"].upper()
        if node.attrs.get("star"):
            return f"{name}(*)"
        args = ", ".join(_print_expr(c) for c in node.children)
        if node.attrs.get("distinct"):
            return f"{name}(DISTINCT {args})"
        return f"{name}({args})"
    if kind == "expr-between":
        value, low, high = (_print_expr(c) for c in node.children)
        word = "NOT BETWEEN" if node.attrs.get("negated") else "BETWEEN"
        return f"{value} {word} {low} AND {high}"
    if kind == "expr-in":
        lhs = _print_expr(node.children[0])
        word = "NOT IN" if node.attrs.get("negated") else "IN"
        if node.attrs.get("subquery"):
            return f"{lhs} {word} {_print_expr(node.children[1])}"
        items = ", ".join(_print_expr(c) for c in node.children[1:])
        return f"{lhs} {word} ({items})"
    if kind == "expr-subquery":
        return f"({_print_statement(node.children[0])})"
    if kind == "expr-case":
        parts = ["CASE"]
        children = list(node.children)
        if node.attrs.get("has_operand"):
            parts.append(_print_expr(children.pop(0)))
        for child in children:
            if child.kind == "case-when":
                parts.append(f"WHEN {_print_expr(child.children[0])} THEN {_print_expr(child.children[1])}")
            else:
                parts.append(f"ELSE {_print_expr(child.children[0])}")
        parts.append("END")
        return " ".join(parts)
    raise ValueError(f"cannot print node kind {kind}")


def _print_source(node: AstNode) -> str:
    if node.kind == "table-ref":
        text = node.attrs["table"]
    elif node.kind == "join":
        left = _print_source(node.children[0])
        right = _print_source(node.children[1])
        jointype = node.attrs["jointype"]
        if jointype == "cross":
            return f"{left}, {right}"
        word = {"inner": "JOIN", "left": "LEFT JOIN"}[jointype]
        cond = _print_expr(node.children[2])
        return f"{left} {word} {right} ON {cond}"
    elif node.kind == "expr-subquery":
        text = f"({_print_statement(node.children[0])})"
    else:
        raise ValueError(f"cannot print source kind {node.kind}")
    alias = node.attrs.get("alias")
    return f"{text} AS {alias}" if alias else text


def _print_statement(node: AstNode) -> str:
    if node.kind == "with-clause":
        ctes = [c for c in node.children if c.kind == "cte-def"]
        main = node.children[-1]
        cte_text = ", ".join(f"{c.attrs['name']} AS ({_print_statement(c.children[0])})" for c in ctes)
        return f"WITH {cte_text} {_print_statement(main)}"
    if node.kind == "set-op":
        left = _print_statement(node.children[0])
        right = _print_statement(node.children[1])
        parts = [f"{left} {_SET_OP_KEYWORDS[node.attrs['op']]} {right}"]
        parts.extend(_print_trailing(node.children[2:]))
        return " ".join(parts)
    if node.kind == "select-core":
        parts = ["SELECT"]
        if node.attrs.get("distinct"):
            parts.append("DISTINCT")
        trailing: list[AstNode] = []
        for child in node.children:
            if child.kind == "projection":
                items = []
                for item in child.children:
                    text = _print_expr(item)
                    if item.attrs.get("alias"):
                        text += f" AS {item.attrs['alias']}"
                    items.append(text)
                parts.append(", ".join(items))
            elif child.kind == "from-clause":
                parts.append("FROM " + _print_source(child.children[0]))
            elif child.kind == "where-clause":
                parts.append("WHERE " + _print_expr(child.children[0]))
            elif child.kind == "group-clause":
                parts.append("GROUP BY " + ", ".join(_print_expr(c) for c in child.children))
            elif child.kind == "having-clause":
                parts.append("HAVING " + _print_expr(child.children[0]))
            else:
                trailing.append(child)
        parts.extend(_print_trailing(trailing))
        return " ".join(parts)
    raise ValueError(f"cannot print statement kind {node.kind}")


def _print_trailing(children) -> list[str]:
    parts = []
    order_items = [c for c in children if c.kind == "order-item"]
    if order_items:
        rendered = []
        for item in order_items:
            text = _print_expr(item.children[0])
            if item.attrs["direction"] == "desc":
                text += " DESC"
            rendered.append(text)
        parts.append("ORDER BY " + ", ".join(rendered))
    for child in children:
        if child.kind == "limit-clause":
            text = "LIMIT " + _print_expr(child.children[0])
            if len(child.children) > 1:
                text += " OFFSET " + _print_expr(child.children[1])
            parts.append(text)
    return parts


def print_canonical(ast: SqlAst) -> str:
    return _print_statement(ast.root)


print_expr = _print_expr

