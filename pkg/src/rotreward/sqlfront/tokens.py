"""Lexer for the SQLite-flavored SQL subset."""
from __future__ import annotations

from dataclasses import dataclass

KEYWORDS = frozenset(
    """
    select distinct from where group by having order asc desc limit offset
    union all except intersect with as on inner left join cross outer
    and or not in between like is null exists case when then else end
    """.split()
)

OPERATOR_CHARS = "<>=!+-*/%"
TWO_CHAR_OPERATORS = ("<=", ">=", "<>", "!=", "==")
PUNCTUATION = "(),.;"


@dataclass(frozen=True)
class Token:
    kind: str  # keyword | identifier | literal-number | literal-text | operator | punctuation
    lexeme: str
    span: tuple[int, int]
    index: int

    @property
    def upper(self) -> str:
        return self.lexeme.upper()


@dataclass(frozen=True)
class ParseError(Exception):
    error_class: str  # "lex" | "syntax"
    message: str
    position: int

    def __str__(self) -> str:
        return f"{self.error_class} error at offset {self.position}: {self.message}"


def tokenize(source: str) -> list[Token]:
    """Split source into tokens; raises ParseError(class="lex") on bad input.

    Comments (``--`` and ``/* */``) are treated as whitespace.
    """
    tokens: list[Token] = []
    i, n = 0, len(source)
    while i < n:
        ch = source[i]
        if ch.isspace():
            i += 1
            continue
        if ch == "-" and source.startswith("--", i):
            j = source.find("\n", i)
            i = n if j < 0 else j + 1
            continue
        if ch == "/" and source.startswith("/*", i):
            j = source.find("*/", i + 2)
            if j < 0:
                raise ParseError("lex", "unterminated block comment", i)
            i = j + 2
            continue
        start = i
        if ch == "'":
            i += 1
            while True:
                if i >= n:
                    raise ParseError("lex", "unterminated text literal", start)
                if source[i] == "'":
                    if i + 1 < n and source[i + 1] == "'":  # escaped quote
                        i += 2
                        continue
                    i += 1
                    break
                i += 1
            tokens.append(Token("literal-text", source[start:i], (start, i), len(tokens)))
            continue
        if ch == '"' or ch == "`":
            close = ch
            i += 1
            while i < n and source[i] != close:
                i += 1
            if i >= n:
                raise ParseError("lex", "unterminated quoted identifier", start)
            i += 1
            tokens.append(Token("identifier", source[start:i], (start, i), len(tokens)))
            continue
        if ch == "[":
            j = source.find("]", i)
            if j < 0:
                raise ParseError("lex", "unterminated bracketed identifier", start)
            i = j + 1
            tokens.append(Token("identifier", source[start:i], (start, i), len(tokens)))
            continue
        if ch.isdigit() or (ch == "." and i + 1 < n and source[i + 1].isdigit()):
            i += 1
            seen_dot = ch == "."
            while i < n and (source[i].isdigit() or (source[i] == "." and not seen_dot)):
                seen_dot = seen_dot or source[i] == "."
                i += 1
            if i < n and source[i] in "eE":
                j = i + 1
                if j < n and source[j] in "+-":
                    j += 1
                if j < n and source[j].isdigit():
                    i = j
                    while i < n and source[i].isdigit():
                        i += 1
            tokens.append(Token("literal-number", source[start:i], (start, i), len(tokens)))
            continue
        if ch.isalpha() or ch == "_":
            i += 1
            while i < n and (source[i].isalnum() or source[i] == "_"):
                i += 1
            text = source[start:i]
            kind = "keyword" if text.lower() in KEYWORDS else "identifier"
            tokens.append(Token(kind, text, (start, i), len(tokens)))
            continue
        if ch in OPERATOR_CHARS:
            two = source[i : i + 2]
            if two in TWO_CHAR_OPERATORS:
                i += 2
            else:
                i += 1
            tokens.append(Token("operator", source[start:i], (start, i), len(tokens)))
            continue
        if ch in PUNCTUATION:
            i += 1
            tokens.append(Token("punctuation", ch, (start, i), len(tokens)))
            continue
        raise ParseError("lex", f"illegal character {ch!r}", i)
    return tokens
