"""SQL front end: lexer, parser, canonical printer, AST tree export."""
from __future__ import annotations

from ..ltree import LabeledTree, TreeNode
from .nodes import AstNode, SqlAst
from .parser import AGGREGATE_FUNCTIONS, parse
from .printer import print_canonical
from .tokens import ParseError, Token, tokenize

# AST kinds whose child order is positional by role (see the matcher's
# pairing policy); everything else pairs children greedily.
_ORDERED_KINDS = {
    "projection",
    "expr-between",
    "expr-in",
    "case-when",
    "case-else",
    "expr-case",
    "order-item",
    "limit-clause",
    "join",
    "set-op",
    "expr-function",
    "from-clause",
    "where-clause",
    "having-clause",
    "cte-def",
}
_NONCOMMUTATIVE_OPS = {"-", "/", "%", "<", "<=", ">", ">=", "like", "not-like"}


def _ast_tree_node(node: AstNode) -> TreeNode:
    ordered = node.kind in _ORDERED_KINDS
    if node.kind == "expr-binary" and node.attrs["op"] in _NONCOMMUTATIVE_OPS:
        ordered = True
    return TreeNode(
        0,
        (node.kind, node.attr_text()),
        [_ast_tree_node(c) for c in node.children],
        ordered,
    )


def ast_as_tree(ast: SqlAst) -> LabeledTree:
    """Labeled ordered tree over the AST, the substrate for AST partial matching."""
    return LabeledTree.build(_ast_tree_node(ast.root))


__all__ = [
    "AGGREGATE_FUNCTIONS",
    "AstNode",
    "ParseError",
    "SqlAst",
    "Token",
    "ast_as_tree",
    "parse",
    "print_canonical",
    "tokenize",
]
