"""AST node type for parsed SQL statements.

Node kinds:
  statement containers: with-clause, cte-def, select-core, set-op
  clauses: projection, from-clause, where-clause, group-clause,
           having-clause, order-item, limit-clause
  relations: table-ref, join
  expressions: expr-binary, expr-unary, expr-function, expr-column,
               expr-literal, expr-case, case-when, expr-subquery,
               expr-between, expr-in
Attributes hold operator symbols, function/identifier names (lowercased),
literal values with a type tag, aliases, and flags such as ``distinct``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass
class AstNode:
    kind: str
    attrs: dict[str, Any] = field(default_factory=dict)
    children: list["AstNode"] = field(default_factory=list)

    def attr_text(self) -> str:
        """Deterministic one-line rendering of the attributes.

        Keys starting with "_" are positional bookkeeping, not semantics.
        """
        parts = []
        for key in sorted(self.attrs):
            value = self.attrs[key]
            if key.startswith("_") or value is None or value is False:
                continue
            parts.append(f"{key}={value!r}" if isinstance(value, str) else f"{key}={value}")
        return " ".join(parts)

    def semantic_attrs(self) -> dict:
        return {k: v for k, v in self.attrs.items() if not k.startswith("_")}

    def walk(self):
        yield self
        for child in self.children:
            yield from child.walk()

    def clone(self) -> "AstNode":
        return AstNode(self.kind, dict(self.attrs), [c.clone() for c in self.children])

    def structurally_equal(self, other: "AstNode") -> bool:
        if self.kind != other.kind or self.semantic_attrs() != other.semantic_attrs():
            return False
        if len(self.children) != len(other.children):
            return False
        return all(a.structurally_equal(b) for a, b in zip(self.children, other.children))


@dataclass
class SqlAst:
    root: AstNode

    def structurally_equal(self, other: "SqlAst") -> bool:
        return self.root.structurally_equal(other.root)
