"""Recursive-descent parser for the SELECT-shaped SQL subset.

Each parse_* method assumes the cursor sits on the first token of its
fragment and leaves it one past the last consumed token.
"""
from __future__ import annotations

from .nodes import AstNode, SqlAst
from .tokens import ParseError, Token, tokenize

COMPARISON_OPS = {"=", "==", "!=", "<>", "<", "<=", ">", ">="}
AGGREGATE_FUNCTIONS = {"count", "sum", "avg", "min", "max"}


def _normalize_identifier(lexeme: str) -> str:
    if lexeme[:1] in "\"`" and lexeme[-1:] in "\"`":
        return lexeme[1:-1].lower()
    if lexeme[:1] == "[" and lexeme[-1:] == "]":
        return lexeme[1:-1].lower()
    return lexeme.lower()


def _literal_value(token: Token):
    if token.kind == "literal-number":
        text = token.lexeme
        if any(c in text for c in ".eE"):
            return float(text), "number"
        return int(text), "number"
    # strip quotes, unescape doubled quotes
    return token.lexeme[1:-1].replace("''", "'"), "text"


class Parser:
    def __init__(self, tokens: list[Token], source: str):
        self.tokens = tokens
        self.source = source
        self.pos = 0

    # -- cursor helpers -------------------------------------------------

    def peek(self, offset: int = 0) -> Token | None:
        i = self.pos + offset
        return self.tokens[i] if i < len(self.tokens) else None

    def at_keyword(self, *words: str) -> bool:
        tok = self.peek()
        return tok is not None and tok.kind == "keyword" and tok.lexeme.lower() in words

    def advance(self) -> Token:
        tok = self.peek()
        if tok is None:
            raise ParseError("syntax", "unexpected end of input", len(self.source))
        self.pos += 1
        return tok

    def expect_keyword(self, word: str) -> Token:
        tok = self.peek()
        if tok is None or tok.kind != "keyword" or tok.lexeme.lower() != word:
            self.fail(f"expected {word.upper()}")
        return self.advance()

    def expect_punct(self, ch: str) -> Token:
        tok = self.peek()
        if tok is None or tok.kind != "punctuation" or tok.lexeme != ch:
            self.fail(f"expected {ch!r}")
        return self.advance()

    def take_punct(self, ch: str) -> bool:
        tok = self.peek()
        if tok is not None and tok.kind == "punctuation" and tok.lexeme == ch:
            self.pos += 1
            return True
        return False

    def fail(self, message: str):
        tok = self.peek()
        position = tok.span[0] if tok is not None else len(self.source)
        got = f" (got {tok.lexeme!r})" if tok is not None else " (at end of input)"
        raise ParseError("syntax", message + got, position)

    # -- statements -----------------------------------------------------

    def parse_statement(self) -> AstNode:
        if self.at_keyword("with"):
            node = self.parse_with()
        else:
            node = self.parse_compound_select()
        self.take_punct(";")
        if self.peek() is not None:
            self.fail("trailing input after statement")
        return node

    def parse_subquery_body(self) -> AstNode:
        if self.at_keyword("with"):
            return self.parse_with()
        return self.parse_compound_select()

    def parse_with(self) -> AstNode:
        self.expect_keyword("with")
        ctes = []
        while True:
            name_tok = self.advance()
            if name_tok.kind != "identifier":
                raise ParseError("syntax", f"expected CTE name (got {name_tok.lexeme!r})", name_tok.span[0])
            self.expect_keyword("as")
            self.expect_punct("(")
            body_start = self.peek()
            body = self.parse_compound_select()
            close = self.expect_punct(")")
            body_end = self.tokens[close.index - 1]
            cte = AstNode(
                "cte-def",
                {
                    "name": _normalize_identifier(name_tok.lexeme),
                    "_end_token": close.index,
                    "_body_span": (body_start.span[0], body_end.span[1]),
                },
                [body],
            )
            ctes.append(cte)
            if not self.take_punct(","):
                break
        main_start = self.peek()
        main = self.parse_compound_select()
        node = AstNode("with-clause", {}, ctes + [main])
        if main_start is not None:
            node.attrs["_main_start"] = main_start.span[0]
        return node

    def parse_compound_select(self) -> AstNode:
        node = self.parse_select_core()
        while self.at_keyword("union", "except", "intersect"):
            op_tok = self.advance()
            op = op_tok.lexeme.lower()
            if op == "union" and self.at_keyword("all"):
                self.advance()
                op = "union-all"
            right = self.parse_select_core()
            node = AstNode("set-op", {"op": op}, [node, right])
        # ORDER BY / LIMIT on the compound result attach to the outermost node
        order_items = self.parse_order_by()
        node.children.extend(order_items)
        limit = self.parse_limit()
        if limit is not None:
            node.children.append(limit)
        return node

    def parse_select_core(self) -> AstNode:
        if self.take_punct("("):
            # parenthesized SELECT inside a compound
            inner = self.parse_compound_select()
            self.expect_punct(")")
            return inner
        self.expect_keyword("select")
        core = AstNode("select-core", {})
        if self.at_keyword("distinct"):
            self.advance()
            core.attrs["distinct"] = True
        projection = AstNode("projection", {})
        while True:
            item = self.parse_expr()
            if self.at_keyword("as"):
                self.advance()
                alias_tok = self.advance()
                if alias_tok.kind != "identifier":
                    raise ParseError("syntax", "expected alias name", alias_tok.span[0])
                item.attrs["alias"] = _normalize_identifier(alias_tok.lexeme)
            projection.children.append(item)
            if not self.take_punct(","):
                break
        core.children.append(projection)
        if self.at_keyword("from"):
            self.advance()
            source = self.parse_join_source()
            core.children.append(AstNode("from-clause", {}, [source]))
        if self.at_keyword("where"):
            self.advance()
            core.children.append(AstNode("where-clause", {}, [self.parse_expr()]))
        if self.at_keyword("group"):
            self.advance()
            self.expect_keyword("by")
            group = AstNode("group-clause", {})
            while True:
                group.children.append(self.parse_expr())
                if not self.take_punct(","):
                    break
            core.children.append(group)
        if self.at_keyword("having"):
            self.advance()
            core.children.append(AstNode("having-clause", {}, [self.parse_expr()]))
        return core

    def parse_order_by(self) -> list[AstNode]:
        items: list[AstNode] = []
        if self.at_keyword("order"):
            self.advance()
            self.expect_keyword("by")
            while True:
                expr = self.parse_expr()
                direction = "asc"
                if self.at_keyword("asc", "desc"):
                    direction = self.advance().lexeme.lower()
                items.append(AstNode("order-item", {"direction": direction}, [expr]))
                if not self.take_punct(","):
                    break
        return items

    def parse_limit(self) -> AstNode | None:
        if not self.at_keyword("limit"):
            return None
        self.advance()
        first = self.parse_expr()
        node = AstNode("limit-clause", {}, [first])
        if self.at_keyword("offset"):
            self.advance()
            node.children.append(self.parse_expr())
            node.attrs["offset_form"] = "offset"
        elif self.take_punct(","):
            # LIMIT m, n means OFFSET m LIMIT n
            count = self.parse_expr()
            node.children = [count, first]
            node.attrs["offset_form"] = "offset"
        return node

    # -- FROM sources ---------------------------------------------------

    def parse_join_source(self) -> AstNode:
        node = self.parse_single_source()
        while True:
            if self.take_punct(","):
                right = self.parse_single_source()
                node = AstNode("join", {"jointype": "cross"}, [node, right])
                continue
            jointype = None
            if self.at_keyword("join"):
                self.advance()
                jointype = "inner"
            elif self.at_keyword("inner"):
                self.advance()
                self.expect_keyword("join")
                jointype = "inner"
            elif self.at_keyword("left"):
                self.advance()
                if self.at_keyword("outer"):
                    self.advance()
                self.expect_keyword("join")
                jointype = "left"
            elif self.at_keyword("cross"):
                self.advance()
                self.expect_keyword("join")
                jointype = "cross"
            if jointype is None:
                return node
            right = self.parse_single_source()
            join = AstNode("join", {"jointype": jointype}, [node, right])
            if jointype != "cross":
                self.expect_keyword("on")
                join.children.append(self.parse_expr())
            node = join

    def parse_single_source(self) -> AstNode:
        if self.take_punct("("):
            body = self.parse_subquery_body()
            self.expect_punct(")")
            node = AstNode("expr-subquery", {"in_from": True}, [body])
        else:
            tok = self.advance()
            if tok.kind != "identifier":
                raise ParseError("syntax", f"expected table name (got {tok.lexeme!r})", tok.span[0])
            node = AstNode("table-ref", {"table": _normalize_identifier(tok.lexeme)})
        alias = self.parse_optional_alias()
        if alias:
            node.attrs["alias"] = alias
        return node

    def parse_optional_alias(self) -> str | None:
        if self.at_keyword("as"):
            self.advance()
            tok = self.advance()
            if tok.kind != "identifier":
                raise ParseError("syntax", "expected alias name", tok.span[0])
            return _normalize_identifier(tok.lexeme)
        tok = self.peek()
        if tok is not None and tok.kind == "identifier":
            self.pos += 1
            return _normalize_identifier(tok.lexeme)
        return None

    # -- expressions (top-down by precedence) ---------------------------

    def parse_expr(self) -> AstNode:
        return self.parse_or()

    def parse_or(self) -> AstNode:
        node = self.parse_and()
        while self.at_keyword("or"):
            self.advance()
            node = AstNode("expr-binary", {"op": "or"}, [node, self.parse_and()])
        return node

    def parse_and(self) -> AstNode:
        node = self.parse_not()
        while self.at_keyword("and"):
            self.advance()
            node = AstNode("expr-binary", {"op": "and"}, [node, self.parse_not()])
        return node

    def parse_not(self) -> AstNode:
        if self.at_keyword("not"):
            self.advance()
            return AstNode("expr-unary", {"op": "not"}, [self.parse_not()])
        return self.parse_predicate()

    def parse_predicate(self) -> AstNode:
        node = self.parse_additive()
        while True:
            tok = self.peek()
            if tok is None:
                return node
            if tok.kind == "operator" and tok.lexeme in COMPARISON_OPS:
                self.advance()
                op = {"==": "=", "<>": "!="}.get(tok.lexeme, tok.lexeme)
                node = AstNode("expr-binary", {"op": op}, [node, self.parse_additive()])
                continue
            negated = False
            save = self.pos
            if self.at_keyword("not"):
                self.advance()
                negated = True
            if self.at_keyword("between"):
                self.advance()
                low = self.parse_additive()
                self.expect_keyword("and")
                high = self.parse_additive()
                node = AstNode("expr-between", {"negated": negated}, [node, low, high])
                continue
            if self.at_keyword("in"):
                self.advance()
                self.expect_punct("(")
                if self.at_keyword("select", "with"):
                    sub = self.parse_subquery_body()
                    self.expect_punct(")")
                    node = AstNode(
                        "expr-in",
                        {"negated": negated, "subquery": True},
                        [node, AstNode("expr-subquery", {}, [sub])],
                    )
                else:
                    items = [node]
                    while True:
                        items.append(self.parse_expr())
                        if not self.take_punct(","):
                            break
                    self.expect_punct(")")
                    node = AstNode("expr-in", {"negated": negated}, items)
                continue
            if self.at_keyword("like"):
                self.advance()
                op = "not-like" if negated else "like"
                node = AstNode("expr-binary", {"op": op}, [node, self.parse_additive()])
                continue
            if negated:
                self.pos = save  # NOT belonged to a boolean expression, rewind
                return node
            if self.at_keyword("is"):
                self.advance()
                op = "isnull"
                if self.at_keyword("not"):
                    self.advance()
                    op = "notnull"
                self.expect_keyword("null")
                node = AstNode("expr-unary", {"op": op}, [node])
                continue
            return node

    def parse_additive(self) -> AstNode:
        node = self.parse_multiplicative()
        while True:
            tok = self.peek()
            if tok is not None and tok.kind == "operator" and tok.lexeme in ("+", "-"):
                self.advance()
                node = AstNode("expr-binary", {"op": tok.lexeme}, [node, self.parse_multiplicative()])
            else:
                return node

    def parse_multiplicative(self) -> AstNode:
        node = self.parse_unary()
        while True:
            tok = self.peek()
            if tok is not None and tok.kind == "operator" and tok.lexeme in ("*", "/", "%"):
                self.advance()
                node = AstNode("expr-binary", {"op": tok.lexeme}, [node, self.parse_unary()])
            else:
                return node

    def parse_unary(self) -> AstNode:
        tok = self.peek()
        if tok is not None and tok.kind == "operator" and tok.lexeme in ("-", "+"):
            self.advance()
            operand = self.parse_unary()
            if tok.lexeme == "+":
                return operand
            if operand.kind == "expr-literal" and operand.attrs["type"] == "number":
                return AstNode("expr-literal", {"value": -operand.attrs["value"], "type": "number"})
            return AstNode("expr-unary", {"op": "-"}, [operand])
        return self.parse_primary()

    def parse_primary(self) -> AstNode:
        tok = self.peek()
        if tok is None:
            raise ParseError("syntax", "unexpected end of expression", len(self.source))
        if tok.kind in ("literal-number", "literal-text"):
            self.advance()
            value, type_tag = _literal_value(tok)
            return AstNode("expr-literal", {"value": value, "type": type_tag})
        if tok.kind == "punctuation" and tok.lexeme == "(":
            self.advance()
            if self.at_keyword("select", "with"):
                sub = self.parse_subquery_body()
                self.expect_punct(")")
                return AstNode("expr-subquery", {}, [sub])
            expr = self.parse_expr()
            self.expect_punct(")")
            return expr
        if self.at_keyword("exists"):
            self.advance()
            self.expect_punct("(")
            sub = self.parse_subquery_body()
            self.expect_punct(")")
            return AstNode("expr-unary", {"op": "exists"}, [AstNode("expr-subquery", {}, [sub])])
        if self.at_keyword("case"):
            return self.parse_case()
        if tok.kind == "operator" and tok.lexeme == "*":
            self.advance()
            return AstNode("expr-column", {"column": "*"})
        if tok.kind == "identifier":
            self.advance()
            name = _normalize_identifier(tok.lexeme)
            nxt = self.peek()
            if nxt is not None and nxt.kind == "punctuation" and nxt.lexeme == "(":
                return self.parse_function_call(name, tok)
            if nxt is not None and nxt.kind == "punctuation" and nxt.lexeme == ".":
                self.advance()
                col_tok = self.advance()
                if col_tok.kind == "operator" and col_tok.lexeme == "*":
                    return AstNode("expr-column", {"column": "*", "qualifier": name})
                if col_tok.kind != "identifier":
                    raise ParseError("syntax", "expected column name after '.'", col_tok.span[0])
                return AstNode(
                    "expr-column",
                    {"column": _normalize_identifier(col_tok.lexeme), "qualifier": name},
                )
            return AstNode("expr-column", {"column": name})
        self.fail("expected expression")

    def parse_function_call(self, name: str, name_tok: Token) -> AstNode:
        self.expect_punct("(")
        node = AstNode("expr-function", {"name": name})
        if self.take_punct(")"):
            return node
        if self.at_keyword("distinct"):
            self.advance()
            node.attrs["distinct"] = True
        tok = self.peek()
        if tok is not None and tok.kind == "operator" and tok.lexeme == "*":
            self.advance()
            node.attrs["star"] = True
        else:
            while True:
                node.children.append(self.parse_expr())
                if not self.take_punct(","):
                    break
        self.expect_punct(")")
        if node.attrs.get("star") and name != "count":
            raise ParseError("syntax", f"{name}(*) is not supported", name_tok.span[0])
        return node

    def parse_case(self) -> AstNode:
        self.expect_keyword("case")
        node = AstNode("expr-case", {})
        if not self.at_keyword("when"):
            node.attrs["has_operand"] = True
            node.children.append(self.parse_expr())
        while self.at_keyword("when"):
            self.advance()
            cond = self.parse_expr()
            self.expect_keyword("then")
            result = self.parse_expr()
            node.children.append(AstNode("case-when", {}, [cond, result]))
        if self.at_keyword("else"):
            self.advance()
            node.children.append(AstNode("case-else", {}, [self.parse_expr()]))
        self.expect_keyword("end")
        if not any(c.kind == "case-when" for c in node.children):
            self.fail("CASE requires at least one WHEN")
        return node


def parse(source: str) -> SqlAst:
    """Parse one SELECT-shaped statement; raises ParseError on failure."""
    tokens = tokenize(source)
    if not tokens:
        raise ParseError("syntax", "empty statement", 0)
    parser = Parser(tokens, source)
    return SqlAst(parser.parse_statement())
