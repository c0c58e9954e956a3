"""Deterministic in-memory executor for the SQL subset over toy databases.

Used as the graded execution-accuracy reward and as the semantic oracle in
tests. Evaluates the AST directly with three-valued null logic; it shares no
code with the planner's lowering so the two stay independent evidence paths.

Deliberate subset behavior (SQLite-leaning, documented here once):
  - comparisons across number/text never error: equality is false, ordering
    puts numbers before text; arithmetic on text is a runtime error
  - integer '/' truncates toward zero like SQLite; x/0 and x%0 yield NULL
  - LIKE is case-insensitive with % and _ wildcards
  - ORDER BY is stable; NULLs sort first ascending, last descending
  - bare columns under GROUP BY take their value from the group's first row
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass

from .sqlfront import AGGREGATE_FUNCTIONS, parse
from .sqlfront.nodes import AstNode
from .sqlfront.tokens import ParseError

Value = None | int | float | str
REAL_TOLERANCE = 1e-6


class ExecError(Exception):
    def __init__(self, error_class: str, message: str):
        super().__init__(message)
        self.error_class = error_class  # "syntax" | "runtime"
        self.message = message


class ConfigurationError(Exception):
    """Reference-side failure: a setup problem, never a reward grade."""


@dataclass
class Relation:
    columns: list[str]
    rows: list[tuple]
    ordered: bool = False


@dataclass
class Database:
    tables: dict[str, Relation]


def load_database(document: str, catalog=None) -> Database:
    try:
        raw = json.loads(document)
    except json.JSONDecodeError as exc:
        raise ExecError("runtime", f"malformed database document: {exc}") from exc
    tables: dict[str, Relation] = {}
    for name, spec in raw.get("tables", {}).items():
        columns = [str(c).lower() for c in spec.get("columns", [])]
        rows = []
        for row in spec.get("rows", []):
            if len(row) != len(columns):
                raise ExecError("runtime", f"row arity mismatch in table {name!r}")
            rows.append(tuple(row))
        tables[name.lower()] = Relation(columns, rows)
    if catalog is not None:
        for name, relation in tables.items():
            table = catalog.table(name)
            if table is None:
                raise ExecError("runtime", f"table {name!r} is not in the catalog")
            declared = list(table.column_names())
            if declared != relation.columns:
                raise ExecError("runtime", f"columns of {name!r} do not match the catalog")
            for row in relation.rows:
                for (col, type_tag), value in zip(table.columns, row):
                    if value is None:
                        continue
                    if type_tag == "number" and not isinstance(value, (int, float)):
                        raise ExecError("runtime", f"{name}.{col} expects numbers")
                    if type_tag == "text" and not isinstance(value, str):
                        raise ExecError("runtime", f"{name}.{col} expects text")
    return Database(tables)


def load_database_file(path, catalog=None) -> Database:
    with open(path, "r", encoding="utf-8") as handle:
        return load_database(handle.read(), catalog)


# -- environments ---------------------------------------------------------


@dataclass
class Frame:
    entries: list[tuple[str | None, list[str], int]]  # (name, columns, offset)
    row: tuple
    parent: "Frame | None" = None
    group_rows: list[tuple] | None = None  # present while evaluating grouped exprs
    agg_values: dict[str, Value] | None = None

    def lookup(self, qualifier: str | None, column: str) -> Value:
        frame: Frame | None = self
        while frame is not None:
            hits = []
            for name, columns, offset in frame.entries:
                if qualifier is not None and name != qualifier:
                    continue
                if column in columns:
                    hits.append(offset + columns.index(column))
            if qualifier is not None and hits:
                return frame.row[hits[0]]
            if qualifier is None:
                if len(hits) > 1:
                    raise ExecError("runtime", f"column '{column}' is ambiguous")
                if hits:
                    return frame.row[hits[0]]
            frame = frame.parent
        target = f"{qualifier}.{column}" if qualifier else column
        raise ExecError("runtime", f"column '{target}' not found")

    def star_values(self, qualifier: str | None) -> list[Value]:
        values = []
        for name, columns, offset in self.entries:
            if qualifier is not None and name != qualifier:
                continue
            values.extend(self.row[offset : offset + len(columns)])
        if qualifier is not None and not values:
            raise ExecError("runtime", f"table or alias '{qualifier}' not found")
        return values


# -- value helpers ---------------------------------------------------------


def is_number(value) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool)


def sort_key(value: Value):
    if value is None:
        return (0, 0)
    if is_number(value):
        return (1, float(value))
    return (2, str(value))


def compare(a: Value, b: Value) -> int | None:
    """SQL comparison: None when either side is NULL, else -1/0/1."""
    if a is None or b is None:
        return None
    ka, kb = sort_key(a), sort_key(b)
    if ka < kb:
        return -1
    if ka > kb:
        return 1
    return 0


def like_match(value: Value, pattern: Value) -> bool | None:
    if value is None or pattern is None:
        return None
    text = str(value)
    pat = str(pattern)
    regex = "".join(
        ".*" if ch == "%" else "." if ch == "_" else re.escape(ch) for ch in pat
    )
    return re.fullmatch(regex, text, re.IGNORECASE | re.DOTALL) is not None


def _canonical(value: Value):
    if is_number(value):
        return float(value)
    return value


# -- statement evaluation ----------------------------------------------------


class Executor:
    def __init__(self, db: Database):
        self.db = db
        self.ctes: dict[str, Relation] = {}

    def run(self, node: AstNode, frame: Frame | None) -> Relation:
        if node.kind == "with-clause":
            saved = dict(self.ctes)
            try:
                for cte in node.children[:-1]:
                    self.ctes[cte.attrs["name"]] = self.run(cte.children[0], frame)
                return self.run(node.children[-1], frame)
            finally:
                self.ctes = saved
        if node.kind == "set-op":
            return self.run_set_op(node, frame)
        if node.kind == "select-core":
            return self.run_select(node, frame)
        raise ExecError("runtime", f"cannot execute node kind {node.kind}")

    def run_set_op(self, node: AstNode, frame: Frame | None) -> Relation:
        left = self.run(node.children[0], frame)
        right = self.run(node.children[1], frame)
        if len(left.columns) != len(right.columns):
            raise ExecError("runtime", "set operation arity mismatch")
        op = node.attrs["op"]
        if op == "union-all":
            rows = left.rows + right.rows
        else:
            def distinct(rows):
                seen, out = set(), []
                for row in rows:
                    key = tuple(_canonical(v) for v in row)
                    if key not in seen:
                        seen.add(key)
                        out.append(row)
                return out

            if op == "union":
                rows = distinct(left.rows + right.rows)
            elif op == "except":
                right_keys = {tuple(_canonical(v) for v in r) for r in right.rows}
                rows = [r for r in distinct(left.rows) if tuple(_canonical(v) for v in r) not in right_keys]
            elif op == "intersect":
                right_keys = {tuple(_canonical(v) for v in r) for r in right.rows}
                rows = [r for r in distinct(left.rows) if tuple(_canonical(v) for v in r) in right_keys]
            else:
                raise ExecError("runtime", f"unknown set operation {op!r}")
        relation = Relation(left.columns, rows)
        return self.apply_trailing(relation, node.children[2:], None, frame)

    def source_relation(self, node: AstNode, frame: Frame | None) -> tuple[list[tuple[str | None, list[str]]], list[tuple]]:
        """Returns ([(entry name, columns)...], combined rows)."""
        if node.kind == "table-ref":
            name = node.attrs["table"]
            if name in self.ctes:
                relation = self.ctes[name]
            elif name in self.db.tables:
                relation = self.db.tables[name]
            else:
                raise ExecError("runtime", f"table '{name}' not found")
            entry = node.attrs.get("alias") or name
            return [(entry, list(relation.columns))], list(relation.rows)
        if node.kind == "expr-subquery":
            relation = self.run(node.children[0], frame)
            return [(node.attrs.get("alias"), list(relation.columns))], list(relation.rows)
        if node.kind == "join":
            left_entries, left_rows = self.source_relation(node.children[0], frame)
            right_entries, right_rows = self.source_relation(node.children[1], frame)
            entries = left_entries + right_entries
            jointype = node.attrs["jointype"]
            right_width = sum(len(cols) for _, cols in right_entries)
            rows = []
            if jointype == "cross":
                for lrow in left_rows:
                    for rrow in right_rows:
                        rows.append(lrow + rrow)
            else:
                cond = node.children[2]
                for lrow in left_rows:
                    matched = False
                    for rrow in right_rows:
                        combined = lrow + rrow
                        env = self.make_frame(entries, combined, frame)
                        if self.eval_expr(cond, env) is True:
                            rows.append(combined)
                            matched = True
                    if jointype == "left" and not matched:
                        rows.append(lrow + (None,) * right_width)
            return entries, rows
        raise ExecError("runtime", f"cannot evaluate FROM source kind {node.kind}")

    @staticmethod
    def make_frame(entries, row, parent) -> Frame:
        placed = []
        offset = 0
        for name, columns in entries:
            placed.append((name, columns, offset))
            offset += len(columns)
        return Frame(placed, row, parent)

    def run_select(self, node: AstNode, outer: Frame | None) -> Relation:
        clauses: dict[str, AstNode] = {}
        order_items: list[AstNode] = []
        limit_clause = None
        for child in node.children:
            if child.kind == "order-item":
                order_items.append(child)
            elif child.kind == "limit-clause":
                limit_clause = child
            else:
                clauses[child.kind] = child

        if "from-clause" in clauses:
            entries, rows = self.source_relation(clauses["from-clause"].children[0], outer)
        else:
            entries, rows = [], [()]

        if "where-clause" in clauses:
            predicate = clauses["where-clause"].children[0]
            rows = [
                row
                for row in rows
                if self.eval_expr(predicate, self.make_frame(entries, row, outer)) is True
            ]

        select_items = clauses["projection"].children
        group_clause = clauses.get("group-clause")
        having_clause = clauses.get("having-clause")

        agg_asts: list[AstNode] = []
        for item in select_items:
            self.collect_aggs(item, agg_asts)
        if having_clause is not None:
            self.collect_aggs(having_clause.children[0], agg_asts)
        for item in order_items:
            self.collect_aggs(item.children[0], agg_asts)

        output_columns = self.output_names(select_items, entries)

        if group_clause is not None or agg_asts:
            groups = self.group_rows(group_clause, select_items, entries, rows, outer)
            result_rows = []
            frames = []
            for group in groups:
                frame = self.group_frame(group, entries, agg_asts, outer)
                if having_clause is not None:
                    if self.eval_expr(having_clause.children[0], frame) is not True:
                        continue
                frames.append(frame)
                result_rows.append(self.project_row(select_items, frame))
        else:
            frames = [self.make_frame(entries, row, outer) for row in rows]
            result_rows = [self.project_row(select_items, frame) for frame in frames]

        if node.attrs.get("distinct"):
            seen, deduped, kept = set(), [], []
            for row, frame in zip(result_rows, frames):
                key = tuple(_canonical(v) for v in row)
                if key not in seen:
                    seen.add(key)
                    deduped.append(row)
                    kept.append(frame)
            result_rows, frames = deduped, kept

        relation = Relation(output_columns, result_rows)
        return self.apply_trailing(
            relation,
            order_items + ([limit_clause] if limit_clause else []),
            (select_items, frames),
            outer,
        )

    def collect_aggs(self, node: AstNode, out: list[AstNode]):
        if node.kind == "expr-subquery":
            return
        if node.kind == "expr-function" and node.attrs["name"] in AGGREGATE_FUNCTIONS:
            out.append(node)
            return
        for child in node.children:
            self.collect_aggs(child, out)

    def resolve_positional(self, key: AstNode, select_items: list[AstNode]) -> AstNode:
        if key.kind == "expr-literal" and key.attrs["type"] == "number":
            value = key.attrs["value"]
            if isinstance(value, int) and 1 <= value <= len(select_items):
                return select_items[value - 1]
            raise ExecError("runtime", f"ordinal {value!r} out of projection range")
        if key.kind == "expr-column" and key.attrs.get("qualifier") is None:
            for item in select_items:
                if item.attrs.get("alias") == key.attrs["column"]:
                    return item
        return key

    def group_rows(self, group_clause, select_items, entries, rows, outer):
        if group_clause is None:
            return [rows]  # single implicit group, even when empty
        keys = [self.resolve_positional(k, select_items) for k in group_clause.children]
        buckets: dict[tuple, list[tuple]] = {}
        for row in rows:
            frame = self.make_frame(entries, row, outer)
            key = tuple(_canonical(self.eval_expr(k, frame)) for k in keys)
            buckets.setdefault(key, []).append(row)
        return list(buckets.values())

    def group_frame(self, group_rows, entries, agg_asts, outer) -> Frame:
        first = group_rows[0] if group_rows else tuple()
        width = sum(len(cols) for _, cols in entries)
        row = first if group_rows else (None,) * width
        frame = self.make_frame(entries, row, outer)
        frame.group_rows = group_rows
        agg_values: dict[str, Value] = {}
        for agg in agg_asts:
            key = self.agg_key(agg)
            if key not in agg_values:
                agg_values[key] = self.eval_aggregate(agg, group_rows, entries, outer)
        frame.agg_values = agg_values
        return frame

    @staticmethod
    def agg_key(node: AstNode) -> str:
        from .sqlfront.printer import print_expr

        return print_expr(node)

    def eval_aggregate(self, node: AstNode, group_rows, entries, outer) -> Value:
        name = node.attrs["name"]
        if node.attrs.get("star"):
            if name != "count":
                raise ExecError("runtime", f"{name}(*) is not supported")
            return len(group_rows)
        if not node.children:
            raise ExecError("runtime", f"{name}() requires an argument")
        arg = node.children[0]
        values = []
        for row in group_rows:
            frame = self.make_frame(entries, row, outer)
            value = self.eval_expr(arg, frame)
            if value is not None:
                values.append(value)
        if node.attrs.get("distinct"):
            seen, unique = set(), []
            for value in values:
                key = _canonical(value)
                if key not in seen:
                    seen.add(key)
                    unique.append(value)
            values = unique
        if name == "count":
            return len(values)
        if not values:
            return None
        if name in ("sum", "avg"):
            if not all(is_number(v) for v in values):
                raise ExecError("runtime", f"{name}() over non-numeric values")
            total = sum(values)
            if name == "avg":
                return total / len(values)
            return total
        if name == "min":
            return min(values, key=sort_key)
        if name == "max":
            return max(values, key=sort_key)
        raise ExecError("runtime", f"unknown aggregate {name!r}")

    def project_row(self, select_items, frame: Frame) -> tuple:
        values: list[Value] = []
        for item in select_items:
            if item.kind == "expr-column" and item.attrs["column"] == "*":
                values.extend(frame.star_values(item.attrs.get("qualifier")))
            else:
                values.append(self.eval_expr(item, frame))
        return tuple(values)

    def output_names(self, select_items, entries) -> list[str]:
        names: list[str] = []
        for item in select_items:
            if item.kind == "expr-column" and item.attrs["column"] == "*":
                for name, columns in entries:
                    if item.attrs.get("qualifier") in (None, name):
                        names.extend(columns)
                continue
            if item.attrs.get("alias"):
                names.append(item.attrs["alias"])
            elif item.kind == "expr-column":
                names.append(item.attrs["column"])
            else:
                names.append(self.agg_key(item).lower())
        return names

    def apply_trailing(self, relation: Relation, trailing, projection_env, outer) -> Relation:
        order_items = [c for c in trailing if c is not None and c.kind == "order-item"]
        if order_items:
            decorated = list(enumerate(relation.rows))

            def order_value(row_index: int, key_ast: AstNode) -> Value:
                if projection_env is not None:
                    select_items, frames = projection_env
                    resolved = self.resolve_positional(key_ast, select_items)
                    return self.eval_expr(resolved, frames[row_index])
                # set operations: sort keys name output columns or ordinals
                row = relation.rows[row_index]
                if key_ast.kind == "expr-literal" and isinstance(key_ast.attrs["value"], int):
                    index = key_ast.attrs["value"] - 1
                    if not 0 <= index < len(relation.columns):
                        raise ExecError("runtime", "ORDER BY position out of range")
                    return row[index]
                if key_ast.kind == "expr-column" and key_ast.attrs["column"] in relation.columns:
                    return row[relation.columns.index(key_ast.attrs["column"])]
                raise ExecError("runtime", "ORDER BY key must name an output column")

            for item in reversed(order_items):
                desc = item.attrs["direction"] == "desc"
                decorated.sort(
                    key=lambda pair: sort_key(order_value(pair[0], item.children[0])),
                    reverse=desc,
                )
            relation = Relation(relation.columns, [relation.rows[i] for i, _ in decorated], True)
            # re-point frame indices after reordering
            if projection_env is not None:
                select_items, frames = projection_env
                projection_env = (select_items, [frames[i] for i, _ in decorated])
        for clause in trailing:
            if clause is not None and clause.kind == "limit-clause":
                count = self.limit_value(clause.children[0])
                offset = self.limit_value(clause.children[1]) if len(clause.children) > 1 else 0
                relation = Relation(
                    relation.columns, relation.rows[offset : offset + count], relation.ordered
                )
        return relation

    @staticmethod
    def limit_value(node: AstNode) -> int:
        if node.kind == "expr-literal" and isinstance(node.attrs["value"], int):
            value = node.attrs["value"]
            if value >= 0:
                return value
        raise ExecError("runtime", "LIMIT/OFFSET must be a non-negative integer literal")

    # -- expressions ------------------------------------------------------

    def eval_expr(self, node: AstNode, frame: Frame) -> Value:
        kind = node.kind
        if kind == "expr-literal":
            return node.attrs["value"]
        if kind == "expr-column":
            if node.attrs["column"] == "*":
                raise ExecError("runtime", "'*' is only valid in a projection or COUNT(*)")
            return frame.lookup(node.attrs.get("qualifier"), node.attrs["column"])
        if kind == "expr-binary":
            return self.eval_binary(node, frame)
        if kind == "expr-unary":
            return self.eval_unary(node, frame)
        if kind == "expr-between":
            value = self.eval_expr(node.children[0], frame)
            low = self.eval_expr(node.children[1], frame)
            high = self.eval_expr(node.children[2], frame)
            ge = _bool_from_compare(compare(value, low), lambda c: c >= 0)
            le = _bool_from_compare(compare(value, high), lambda c: c <= 0)
            result = _and3(ge, le)
            return _not3(result) if node.attrs.get("negated") else result
        if kind == "expr-in":
            return self.eval_in(node, frame)
        if kind == "expr-function":
            name = node.attrs["name"]
            if name in AGGREGATE_FUNCTIONS:
                if frame.agg_values is None:
                    raise ExecError("runtime", f"aggregate {name}() is not allowed here")
                key = self.agg_key(node)
                if key not in frame.agg_values:
                    raise ExecError("runtime", f"aggregate {key!r} not available in this context")
                return frame.agg_values[key]
            raise ExecError("runtime", f"function {name}() is not supported")
        if kind == "expr-subquery":
            relation = self.run(node.children[0], frame)
            if len(relation.columns) != 1:
                raise ExecError("runtime", "scalar subquery must return one column")
            if len(relation.rows) == 0:
                return None
            if len(relation.rows) > 1:
                raise ExecError("runtime", "scalar subquery returned more than one row")
            return relation.rows[0][0]
        if kind == "expr-case":
            return self.eval_case(node, frame)
        raise ExecError("runtime", f"cannot evaluate expression kind {kind}")

    def eval_binary(self, node: AstNode, frame: Frame) -> Value:
        op = node.attrs["op"]
        if op == "and":
            return _and3(*(_truth(self.eval_expr(c, frame)) for c in node.children))
        if op == "or":
            return _or3(*(_truth(self.eval_expr(c, frame)) for c in node.children))
        left = self.eval_expr(node.children[0], frame)
        right = self.eval_expr(node.children[1], frame)
        if op in ("like", "not-like"):
            result = like_match(left, right)
            return _not3(result) if op == "not-like" else result
        if op in ("=", "!=", "<", "<=", ">", ">="):
            comparison = compare(left, right)
            checks = {
                "=": lambda c: c == 0,
                "!=": lambda c: c != 0,
                "<": lambda c: c < 0,
                "<=": lambda c: c <= 0,
                ">": lambda c: c > 0,
                ">=": lambda c: c >= 0,
            }
            return _bool_from_compare(comparison, checks[op])
        if left is None or right is None:
            return None
        if not is_number(left) or not is_number(right):
            raise ExecError("runtime", f"arithmetic {op!r} over non-numeric values")
        if op == "+":
            return left + right
        if op == "-":
            return left - right
        if op == "*":
            return left * right
        if op == "/":
            if right == 0:
                return None
            if isinstance(left, int) and isinstance(right, int):
                quotient = abs(left) // abs(right)
                return -quotient if (left < 0) != (right < 0) else quotient
            return left / right
        if op == "%":
            if right == 0:
                return None
            if isinstance(left, int) and isinstance(right, int):
                return left - right * (abs(left) // abs(right)) * (1 if (left < 0) == (right < 0) else -1)
            raise ExecError("runtime", "'%' requires integer operands")
        raise ExecError("runtime", f"unknown operator {op!r}")

    def eval_unary(self, node: AstNode, frame: Frame) -> Value:
        op = node.attrs["op"]
        if op == "exists":
            relation = self.run(node.children[0].children[0], frame)
            return len(relation.rows) > 0
        value = self.eval_expr(node.children[0], frame) if op != "exists" else None
        if op == "not":
            return _not3(_truth(value))
        if op == "isnull":
            return value is None
        if op == "notnull":
            return value is not None
        if op == "-":
            if value is None:
                return None
            if not is_number(value):
                raise ExecError("runtime", "unary '-' over non-numeric value")
            return -value
        raise ExecError("runtime", f"unknown unary operator {op!r}")

    def eval_in(self, node: AstNode, frame: Frame) -> Value:
        lhs = self.eval_expr(node.children[0], frame)
        if node.attrs.get("subquery"):
            relation = self.run(node.children[1].children[0], frame)
            if len(relation.columns) != 1:
                raise ExecError("runtime", "IN subquery must return one column")
            items = [row[0] for row in relation.rows]
        else:
            items = [self.eval_expr(c, frame) for c in node.children[1:]]
        found = False
        saw_null = lhs is None
        for item in items:
            comparison = compare(lhs, item)
            if comparison is None:
                saw_null = True
            elif comparison == 0:
                found = True
                break
        result: Value = True if found else (None if saw_null else False)
        return _not3(_truth(result)) if node.attrs.get("negated") else result

    def eval_case(self, node: AstNode, frame: Frame) -> Value:
        children = list(node.children)
        operand = None
        has_operand = bool(node.attrs.get("has_operand"))
        if has_operand:
            operand = self.eval_expr(children.pop(0), frame)
        for child in children:
            if child.kind == "case-when":
                condition, result = child.children
                if has_operand:
                    hit = _bool_from_compare(
                        compare(operand, self.eval_expr(condition, frame)), lambda c: c == 0
                    )
                else:
                    hit = _truth(self.eval_expr(condition, frame))
                if hit is True:
                    return self.eval_expr(result, frame)
            elif child.kind == "case-else":
                return self.eval_expr(child.children[0], frame)
        return None


def _truth(value: Value) -> bool | None:
    """SQL truthiness of a value in a boolean context."""
    if value is None:
        return None
    if isinstance(value, bool):
        return value
    if is_number(value):
        return value != 0
    return False


def _not3(value: bool | None) -> bool | None:
    return None if value is None else not value


def _and3(*values: bool | None) -> bool | None:
    if any(v is False for v in values):
        return False
    if any(v is None for v in values):
        return None
    return True


def _or3(*values: bool | None) -> bool | None:
    if any(v is True for v in values):
        return True
    if any(v is None for v in values):
        return None
    return False


def _bool_from_compare(comparison: int | None, check) -> bool | None:
    return None if comparison is None else check(comparison)


# -- public operations -------------------------------------------------------


def execute(sql: str, db: Database, catalog=None) -> Relation:
    """Evaluate one statement; raises ExecError(class syntax|runtime)."""
    try:
        ast = parse(sql)
    except ParseError as exc:
        raise ExecError("syntax", str(exc)) from exc
    try:
        return Executor(db).run(ast.root, None)
    except ExecError:
        raise
    except RecursionError:
        raise ExecError("runtime", "query nesting too deep")


def _values_equal(a: Value, b: Value) -> bool:
    if a is None or b is None:
        return a is None and b is None
    if is_number(a) and is_number(b):
        if isinstance(a, int) and isinstance(b, int):
            return a == b
        x, y = float(a), float(b)
        return abs(x - y) <= REAL_TOLERANCE * max(1.0, abs(x), abs(y))
    if isinstance(a, str) and isinstance(b, str):
        return a == b
    return False


def _row_key(row: tuple):
    key = []
    for value in row:
        if value is None:
            key.append((0, 0.0))
        elif is_number(value):
            key.append((1, round(float(value), 9)))
        else:
            key.append((2, str(value)))
    return tuple(key)


def results_equal(a: Relation, b: Relation) -> bool:
    """Ordered comparison when both are ordered, multiset otherwise;
    reals compare within a relative tolerance; column names are ignored."""
    if len(a.columns) != len(b.columns) or len(a.rows) != len(b.rows):
        return False
    if a.ordered and b.ordered:
        rows_a, rows_b = a.rows, b.rows
    else:
        rows_a = sorted(a.rows, key=_row_key)
        rows_b = sorted(b.rows, key=_row_key)
    return all(
        all(_values_equal(x, y) for x, y in zip(ra, rb)) for ra, rb in zip(rows_a, rows_b)
    )


@dataclass(frozen=True)
class ExReward:
    grade: float  # 1.0 | -0.3 | -0.6 | -1.0
    detail: str


def ex_reward(gen_sql: str, ref_sql: str, db: Database, catalog=None) -> ExReward:
    """Graded execution-accuracy reward over a toy database."""
    try:
        reference = execute(ref_sql, db, catalog)
    except ExecError as exc:
        raise ConfigurationError(f"reference SQL failed to execute: {exc}") from exc
    try:
        generated = execute(gen_sql, db, catalog)
    except ExecError as exc:
        if exc.error_class == "syntax":
            return ExReward(-1.0, f"syntax error: {exc.message}")
        return ExReward(-0.6, f"runtime error: {exc.message}")
    if results_equal(generated, reference):
        return ExReward(1.0, "correct execution")
    return ExReward(-0.3, "incorrect execution")
