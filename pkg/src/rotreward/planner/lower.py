"""Lower a parsed AST into a relational operator tree with resolved names.

Column references resolve through FROM/JOIN/CTE scopes to ``table.column``
labels; columns of derived tables and set operations get the alias-erased
``?.column`` form so that plans are invariant under alias renaming.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from ..sqlfront import AGGREGATE_FUNCTIONS, SqlAst, print_canonical
from ..sqlfront.nodes import AstNode
from ..sqlfront.printer import print_expr
from .catalog import Catalog
from .rot import RotError, RotGraph, RotNode, subtree_digest, true_literal


@dataclass(frozen=True)
class ColumnRef:
    name: str  # lookup key within its relation
    label: str  # resolved display, e.g. "country.population" or "?.score"
    rel: int  # producer relation instance id
    type_tag: str | None = None


@dataclass
class ScopeEntry:
    name: str | None  # alias / table name / CTE name; None for anonymous sources
    columns: list[ColumnRef]


@dataclass
class Scope:
    entries: list[ScopeEntry] = field(default_factory=list)
    parent: "Scope | None" = None

    def lookup(self, qualifier: str | None, column: str) -> ColumnRef:
        scope: Scope | None = self
        if qualifier is not None:
            while scope is not None:
                for entry in scope.entries:
                    if entry.name == qualifier:
                        for ref in entry.columns:
                            if ref.name == column:
                                return ref
                        raise RotError(
                            "unresolved-column",
                            f"column '{column}' not found in '{qualifier}'",
                        )
                scope = scope.parent
            raise RotError("unresolved-table", f"table or alias '{qualifier}' is not in scope")
        while scope is not None:
            hits = [
                ref
                for entry in scope.entries
                for ref in entry.columns
                if ref.name == column
            ]
            if len(hits) > 1:
                raise RotError("ambiguous-name", f"column '{column}' is ambiguous")
            if hits:
                return hits[0]
            scope = scope.parent
        raise RotError("unresolved-column", f"column '{column}' not found in any in-scope table")

    def star_columns(self, qualifier: str | None) -> list[ColumnRef]:
        if qualifier is None:
            columns = [ref for entry in self.entries for ref in entry.columns]
            if not columns:
                raise RotError("unsupported", "SELECT * with no FROM source")
            return columns
        for entry in self.entries:
            if entry.name == qualifier:
                return list(entry.columns)
        raise RotError("unresolved-table", f"table or alias '{qualifier}' is not in scope")


@dataclass
class AggContext:
    """Present while lowering expressions above an Aggregate node."""

    rel: int
    calls: list[tuple[str, RotNode]]  # (canonical AST text, lowered agg-call)

    def clone_for(self, key: str) -> RotNode:
        for text, node in self.calls:
            if text == key:
                clone = node.clone()
                clone.attrs["_agg_rel"] = self.rel
                return clone
        raise RotError("unsupported", f"aggregate {key!r} was not collected")


class Lowering:
    def __init__(self, catalog: Catalog):
        self.catalog = catalog
        self.next_rel = 1
        self.ctes: dict[str, tuple[RotNode, list[ColumnRef]]] = {}

    def fresh_rel(self) -> int:
        rel = self.next_rel
        self.next_rel += 1
        return rel

    # -- statements -----------------------------------------------------

    def lower_statement(self, node: AstNode, scope: Scope | None) -> tuple[RotNode, list[ColumnRef]]:
        if node.kind == "with-clause":
            saved = dict(self.ctes)
            try:
                for child in node.children[:-1]:
                    body_root, body_schema = self.lower_statement(child.children[0], scope)
                    self.ctes[child.attrs["name"]] = (body_root, body_schema)
                return self.lower_statement(node.children[-1], scope)
            finally:
                self.ctes = saved
        if node.kind == "set-op":
            return self.lower_set_op(node, scope)
        if node.kind == "select-core":
            return self.lower_select_core(node, scope)
        raise RotError("unsupported", f"cannot lower statement kind {node.kind}")

    def lower_set_op(self, node: AstNode, scope: Scope | None) -> tuple[RotNode, list[ColumnRef]]:
        left_root, left_schema = self.lower_statement(node.children[0], scope)
        right_root, right_schema = self.lower_statement(node.children[1], scope)
        if len(left_schema) != len(right_schema):
            raise RotError(
                "unsupported",
                f"set operation arity mismatch ({len(left_schema)} vs {len(right_schema)})",
            )
        rel = self.fresh_rel()
        setop = RotNode("SetOp", {"op": node.attrs["op"], "_rel_def": rel}, [left_root, right_root])
        schema = [ColumnRef(c.name, f"?.{c.name}", rel, c.type_tag) for c in left_schema]
        root = setop
        trailing = node.children[2:]
        root = self.attach_sort(root, trailing, schema, None, None)
        root = self.attach_limit(root, trailing)
        return root, schema

    # -- FROM sources ----------------------------------------------------

    def lower_source(self, node: AstNode, outer: Scope | None) -> tuple[RotNode, list[ScopeEntry]]:
        if node.kind == "table-ref":
            table_name = node.attrs["table"]
            alias = node.attrs.get("alias")
            if table_name in self.ctes:
                template_root, template_schema = self.ctes[table_name]
                root, schema = self.instantiate(template_root, template_schema)
                return root, [ScopeEntry(alias or table_name, schema)]
            table = self.catalog.table(table_name)
            if table is None:
                raise RotError("unresolved-table", f"table '{table_name}' not found")
            rel = self.fresh_rel()
            scan = RotNode(
                "TableScan",
                {
                    "table": table.name,
                    "_rel_def": rel,
                    "_columns": [list(c) for c in table.columns],
                },
            )
            columns = [
                ColumnRef(c, f"{table.name}.{c}", rel, t) for c, t in table.columns
            ]
            return scan, [ScopeEntry(alias or table.name, columns)]
        if node.kind == "expr-subquery":
            root, schema = self.lower_statement(node.children[0], outer)
            return root, [ScopeEntry(node.attrs.get("alias"), schema)]
        if node.kind == "join":
            left_root, left_entries = self.lower_source(node.children[0], outer)
            right_root, right_entries = self.lower_source(node.children[1], outer)
            jointype = node.attrs["jointype"]
            join_scope = Scope(left_entries + right_entries, outer)
            if jointype == "cross":
                cond = true_literal()
                jointype = "inner"
            else:
                cond = self.lower_expr(node.children[2], join_scope, None)
            join = RotNode("Join", {"jointype": jointype}, [left_root, right_root, cond])
            return join, left_entries + right_entries
        raise RotError("unsupported", f"cannot lower FROM source kind {node.kind}")

    def instantiate(self, template: RotNode, schema: list[ColumnRef]) -> tuple[RotNode, list[ColumnRef]]:
        """Clone a CTE body with fresh relation instance ids."""
        clone = template.clone()
        mapping: dict[int, int] = {}
        for sub in clone.walk():
            rel_def = sub.attrs.get("_rel_def")
            if rel_def is not None:
                mapping[rel_def] = self.fresh_rel()
        for sub in clone.walk():
            for key in ("_rel_def", "_rel", "_agg_rel"):
                value = sub.attrs.get(key)
                if value in mapping:
                    sub.attrs[key] = mapping[value]
        new_schema = [
            ColumnRef(c.name, c.label, mapping.get(c.rel, c.rel), c.type_tag) for c in schema
        ]
        return clone, new_schema

    # -- SELECT core -----------------------------------------------------

    def lower_select_core(self, node: AstNode, outer: Scope | None) -> tuple[RotNode, list[ColumnRef]]:
        clauses: dict[str, AstNode] = {}
        order_items: list[AstNode] = []
        limit_clause: AstNode | None = None
        for child in node.children:
            if child.kind == "order-item":
                order_items.append(child)
            elif child.kind == "limit-clause":
                limit_clause = child
            else:
                clauses[child.kind] = child

        if "from-clause" in clauses:
            input_node, entries = self.lower_source(clauses["from-clause"].children[0], outer)
        else:
            input_node = RotNode("Values", {"rows": 1, "_rel_def": self.fresh_rel()})
            entries = []
        scope = Scope(entries, outer)

        if "where-clause" in clauses:
            predicate = self.lower_expr(clauses["where-clause"].children[0], scope, None)
            input_node = RotNode("Filter", {}, [input_node, predicate])

        select_items = clauses["projection"].children
        group_clause = clauses.get("group-clause")
        having_clause = clauses.get("having-clause")

        agg_asts: list[AstNode] = []
        for item in select_items:
            collect_aggregates(item, agg_asts)
        if having_clause is not None:
            collect_aggregates(having_clause.children[0], agg_asts)
        for item in order_items:
            collect_aggregates(item.children[0], agg_asts)

        agg_ctx: AggContext | None = None
        if group_clause is not None or agg_asts:
            keys = []
            if group_clause is not None:
                for key_ast in group_clause.children:
                    key_ast = resolve_positional(key_ast, select_items)
                    collect_aggregates(key_ast, probe := [])
                    if probe:
                        raise RotError("unsupported", "aggregate call in GROUP BY")
                    keys.append(self.lower_expr(key_ast, scope, None))
            keys.sort(key=subtree_digest)
            seen: dict[str, RotNode] = {}
            for agg_ast in agg_asts:
                text = print_expr(agg_ast)
                if text not in seen:
                    seen[text] = self.lower_aggregate_call(agg_ast, scope)
            calls = sorted(seen.items(), key=lambda kv: subtree_digest(kv[1]))
            rel = self.fresh_rel()
            agg_node = RotNode(
                "Aggregate",
                {"_rel_def": rel, "_n_keys": len(keys)},
                [input_node, *keys, *(node for _, node in calls)],
            )
            input_node = agg_node
            agg_ctx = AggContext(rel, calls)
            if having_clause is not None:
                predicate = self.lower_expr(having_clause.children[0], scope, agg_ctx)
                input_node = RotNode("Filter", {}, [input_node, predicate])
        elif having_clause is not None:
            raise RotError("unsupported", "HAVING without GROUP BY or aggregates")

        proj_exprs: list[RotNode] = []
        proj_names: list[str] = []
        for item in select_items:
            if item.kind == "expr-column" and item.attrs["column"] == "*":
                for ref in scope.star_columns(item.attrs.get("qualifier")):
                    proj_exprs.append(RotNode("expr-column", {"column": ref.label, "_rel": ref.rel}))
                    proj_names.append(ref.name)
                continue
            proj_exprs.append(self.lower_expr(item, scope, agg_ctx))
            proj_names.append(output_name(item))

        if node.attrs.get("distinct"):
            rel = self.fresh_rel()
            input_node = RotNode(
                "Aggregate",
                {"_rel_def": rel, "_n_keys": len(proj_exprs)},
                [input_node, *(e.clone() for e in sorted(proj_exprs, key=subtree_digest))],
            )

        input_node = self.attach_sort(input_node, order_items, None, select_items, (scope, agg_ctx))

        project_rel = self.fresh_rel()
        project = RotNode(
            "Project",
            {"_rel_def": project_rel, "_names": list(proj_names)},
            [input_node, *proj_exprs],
        )
        schema = []
        for name, expr in zip(proj_names, proj_exprs):
            if expr.kind == "expr-column":
                schema.append(ColumnRef(name, expr.attrs["column"], expr.attrs["_rel"]))
            else:
                schema.append(ColumnRef(name, f"?.{name}", project_rel))
        root = self.attach_limit(project, [limit_clause] if limit_clause else [])
        return root, schema

    def lower_aggregate_call(self, node: AstNode, scope: Scope) -> RotNode:
        attrs = {"name": node.attrs["name"]}
        if node.attrs.get("distinct"):
            attrs["distinct"] = True
        if node.attrs.get("star"):
            attrs["star"] = True
            return RotNode("agg-call", attrs)
        children = []
        for arg in node.children:
            collect_aggregates(arg, probe := [])
            if probe:
                raise RotError("unsupported", "nested aggregate call")
            children.append(self.lower_expr(arg, scope, None))
        return RotNode("agg-call", attrs, children)

    def attach_sort(self, input_node, order_items, setop_schema, select_items, env) -> RotNode:
        items = [c for c in order_items if c is not None and c.kind == "order-item"]
        if not items:
            return input_node
        sort_keys = []
        for item in items:
            key_ast = item.children[0]
            if setop_schema is not None:
                expr = self.lower_setop_sort_key(key_ast, setop_schema)
            else:
                key_ast = resolve_positional(key_ast, select_items)
                scope, agg_ctx = env
                expr = self.lower_expr(key_ast, scope, agg_ctx)
            sort_keys.append(RotNode("sort-key", {"direction": item.attrs["direction"]}, [expr]))
        return RotNode("Sort", {}, [input_node, *sort_keys])

    def lower_setop_sort_key(self, key_ast: AstNode, schema: list[ColumnRef]) -> RotNode:
        if key_ast.kind == "expr-literal" and key_ast.attrs["type"] == "number":
            index = int(key_ast.attrs["value"]) - 1
            if not 0 <= index < len(schema):
                raise RotError("unsupported", f"ORDER BY position {index + 1} out of range")
            ref = schema[index]
            return RotNode("expr-column", {"column": ref.label, "_rel": ref.rel})
        if key_ast.kind == "expr-column" and key_ast.attrs.get("qualifier") is None:
            name = key_ast.attrs["column"]
            for ref in schema:
                if ref.name == name:
                    return RotNode("expr-column", {"column": ref.label, "_rel": ref.rel})
        raise RotError("unsupported", "ORDER BY key must name an output column of a set operation")

    def attach_limit(self, input_node, trailing) -> RotNode:
        for clause in trailing:
            if clause is not None and clause.kind == "limit-clause":
                attrs = {"count": literal_int(clause.children[0], "LIMIT")}
                if len(clause.children) > 1:
                    attrs["offset"] = literal_int(clause.children[1], "OFFSET")
                return RotNode("Limit", attrs, [input_node])
        return input_node

    # -- expressions ------------------------------------------------------

    def lower_expr(self, node: AstNode, scope: Scope, agg_ctx: AggContext | None) -> RotNode:
        kind = node.kind
        if kind == "expr-literal":
            return RotNode("expr-literal", {"value": node.attrs["value"], "type": node.attrs["type"]})
        if kind == "expr-column":
            if node.attrs["column"] == "*":
                raise RotError("unsupported", "'*' outside a projection or COUNT(*)")
            ref = scope.lookup(node.attrs.get("qualifier"), node.attrs["column"])
            return RotNode("expr-column", {"column": ref.label, "_rel": ref.rel})
        if kind == "expr-binary":
            return RotNode(
                "expr-binary",
                {"op": node.attrs["op"]},
                [self.lower_expr(c, scope, agg_ctx) for c in node.children],
            )
        if kind == "expr-unary":
            return RotNode(
                "expr-unary",
                {"op": node.attrs["op"]},
                [self.lower_expr(c, scope, agg_ctx) for c in node.children],
            )
        if kind == "expr-between":
            return RotNode(
                "expr-between",
                {"negated": bool(node.attrs.get("negated"))},
                [self.lower_expr(c, scope, agg_ctx) for c in node.children],
            )
        if kind == "expr-in":
            if node.attrs.get("subquery"):
                lhs = self.lower_expr(node.children[0], scope, agg_ctx)
                sub_root, sub_schema = self.lower_statement(node.children[1].children[0], scope)
                if len(sub_schema) != 1:
                    raise RotError("unsupported", "IN subquery must select exactly one column")
                return RotNode(
                    "expr-in-subquery",
                    {"negated": bool(node.attrs.get("negated"))},
                    [lhs, sub_root],
                )
            return RotNode(
                "expr-in",
                {"negated": bool(node.attrs.get("negated"))},
                [self.lower_expr(c, scope, agg_ctx) for c in node.children],
            )
        if kind == "expr-subquery":
            sub_root, sub_schema = self.lower_statement(node.children[0], scope)
            if len(sub_schema) != 1:
                raise RotError("unsupported", "scalar subquery must select exactly one column")
            return RotNode("expr-subquery", {}, [sub_root])
        if kind == "expr-function":
            name = node.attrs["name"]
            if name in AGGREGATE_FUNCTIONS:
                if agg_ctx is None:
                    raise RotError("unsupported", f"aggregate {name}() is not allowed here")
                return agg_ctx.clone_for(print_expr(node))
            raise RotError("unsupported", f"function {name}() is not supported")
        if kind == "expr-case":
            children = [self.lower_expr(c, scope, agg_ctx) for c in node.children]
            attrs = {"has_operand": True} if node.attrs.get("has_operand") else {}
            return RotNode("expr-case", attrs, children)
        if kind in ("case-when", "case-else"):
            return RotNode(kind, {}, [self.lower_expr(c, scope, agg_ctx) for c in node.children])
        raise RotError("unsupported", f"cannot lower expression kind {kind}")


def collect_aggregates(node: AstNode, out: list[AstNode]):
    """Find aggregate calls in an expression, not descending into subqueries."""
    if node.kind == "expr-subquery":
        return
    if node.kind == "expr-function" and node.attrs["name"] in AGGREGATE_FUNCTIONS:
        out.append(node)
        return
    for child in node.children:
        collect_aggregates(child, out)


def resolve_positional(key_ast: AstNode, select_items: list[AstNode] | None) -> AstNode:
    """ORDER BY / GROUP BY ordinals and projection aliases refer to select items."""
    if select_items is None:
        return key_ast
    if key_ast.kind == "expr-literal" and key_ast.attrs["type"] == "number":
        value = key_ast.attrs["value"]
        if isinstance(value, int) and 1 <= value <= len(select_items):
            return select_items[value - 1]
        raise RotError("unsupported", f"ordinal {value!r} out of projection range")
    if key_ast.kind == "expr-column" and key_ast.attrs.get("qualifier") is None:
        for item in select_items:
            if item.attrs.get("alias") == key_ast.attrs["column"]:
                return item
    return key_ast


def output_name(item: AstNode) -> str:
    if item.attrs.get("alias"):
        return item.attrs["alias"]
    if item.kind == "expr-column":
        return item.attrs["column"]
    return print_expr(item).lower()


def literal_int(node: AstNode, what: str) -> int:
    if node.kind == "expr-literal" and isinstance(node.attrs["value"], int):
        value = node.attrs["value"]
        if value >= 0:
            return value
    if node.kind == "expr-unary" and node.attrs.get("op") == "-":
        raise RotError("unsupported", f"{what} must be a non-negative integer literal")
    raise RotError("unsupported", f"{what} must be a non-negative integer literal")


def lower(ast: SqlAst, catalog: Catalog) -> RotGraph:
    """Lower a parsed statement; raises RotError on resolution failure."""
    lowering = Lowering(catalog)
    root, _ = lowering.lower_statement(ast.root, None)
    return RotGraph.from_root(root)
