import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rotreward.sqlfront import ParseError, ast_as_tree, parse, print_canonical, tokenize


def test_tokenize_minimal_statement():
    tokens = tokenize("SELECT 1")
    assert [(t.kind, t.lexeme) for t in tokens] == [
        ("keyword", "SELECT"),
        ("literal-number", "1"),
    ]


def test_tokenize_compound_operator_is_single_token():
    tokens = tokenize("WHERE age >= 34")
    operators = [t for t in tokens if t.kind == "operator"]
    assert len(operators) == 1 and operators[0].lexeme == ">="


def test_tokenize_spans_reconstruct_source():
    source = "SELECT  name ,2 FROM t WHERE x >= 'a''b'"
    tokens = tokenize(source)
    for token in tokens:
        assert source[token.span[0] : token.span[1]] == token.lexeme
    spans = [t.span for t in tokens]
    assert spans == sorted(spans)
    assert all(a[1] <= b[0] for a, b in zip(spans, spans[1:]))


def test_tokenize_unterminated_literal_position():
    with pytest.raises(ParseError) as err:
        tokenize("SELECT 'unterminated")
    assert err.value.error_class == "lex"
    assert err.value.position == 7


def test_tokenize_illegal_character():
    with pytest.raises(ParseError) as err:
        tokenize("SELECT @x")
    assert err.value.error_class == "lex"


def test_parse_having_clause_under_select_core():
    ast = parse(
        "SELECT sum(Population), GovernmentForm FROM country "
        "GROUP BY GovernmentForm HAVING avg(LifeExpectancy) > 72"
    )
    kinds = [c.kind for c in ast.root.children]
    assert "having-clause" in kinds and "group-clause" in kinds


def test_parse_with_clause_holds_cte_defs():
    ast = parse("WITH step1 AS (SELECT 1) SELECT * FROM step1")
    assert ast.root.kind == "with-clause"
    ctes = [c for c in ast.root.children if c.kind == "cte-def"]
    assert len(ctes) == 1 and ctes[0].attrs["name"] == "step1"


def test_parse_syntax_error_position():
    with pytest.raises(ParseError) as err:
        parse("SELECT FROM t")
    assert err.value.error_class == "syntax"
    assert err.value.position == 7  # offset of FROM


def test_parse_rejects_window_functions():
    with pytest.raises(ParseError):
        parse("SELECT rank() OVER (ORDER BY x) FROM t")


def test_print_canonical_whitespace_and_case():
    assert print_canonical(parse("select  1")) == "SELECT 1"
    assert (
        print_canonical(parse("SELECT a FROM t WHERE x IN (36, 37)"))
        == "SELECT a FROM t WHERE x IN (36, 37)"
    )


def test_inequality_spellings_normalize_to_one_operator():
    assert parse("SELECT a FROM t WHERE x != 1").structurally_equal(
        parse("SELECT a FROM t WHERE x <> 1")
    )


def test_quoted_identifier_styles_normalize():
    plain = parse("SELECT name FROM singer")
    assert parse('SELECT "name" FROM `singer`').structurally_equal(plain)
    assert parse("SELECT [name] FROM singer").structurally_equal(plain)


def test_round_trip_table8_statement():
    source = (
        "SELECT sum(Population), GovernmentForm FROM country "
        "GROUP BY GovernmentForm HAVING avg(LifeExpectancy) > 72"
    )
    ast = parse(source)
    assert parse(print_canonical(ast)).structurally_equal(ast)


def test_round_trip_full_corpus(corpus):
    assert len(corpus) >= 200
    for seed in corpus:
        ast = parse(seed.sql)
        printed = print_canonical(ast)
        assert parse(printed).structurally_equal(ast), seed.sql
        # canonical text is a fixed point
        assert print_canonical(parse(printed)) == printed


def test_parse_determinism(corpus):
    for seed in corpus[:40]:
        first = ast_as_tree(parse(seed.sql))
        second = ast_as_tree(parse(seed.sql))
        assert first.labels() == second.labels()


def test_ast_as_tree_minimal_counts():
    tree = ast_as_tree(parse("SELECT 1"))
    assert len(tree) == 3
    assert [label[0] for label in tree.labels()] == ["select-core", "projection", "expr-literal"]


def test_ast_as_tree_case_insensitive_identifiers():
    assert ast_as_tree(parse("SELECT A")).labels() == ast_as_tree(parse("select a")).labels()


def test_comments_are_whitespace():
    ast = parse("SELECT 1 -- trailing comment\n")
    assert print_canonical(ast) == "SELECT 1"
    ast = parse("WITH step1 AS (/* body */ SELECT 1) SELECT * FROM step1")
    assert ast.root.kind == "with-clause"


@settings(max_examples=300, deadline=None)
@given(st.text(max_size=200))
def test_error_totality_fuzz(source):
    try:
        parse(source)
    except ParseError:
        pass


@settings(max_examples=60, deadline=None)
@given(st.text(alphabet="SELECTFROMWHERE()=',.1ab \n", min_size=0, max_size=1000))
def test_error_totality_sql_shaped_fuzz(source):
    try:
        parse(source)
    except ParseError:
        pass


def test_error_totality_large_input():
    big = "SELECT " + ", ".join(f"c{i}" for i in range(6000)) + " FROM t WHERE "
    big = big + " AND ".join(f"c{i} = {i}" for i in range(1500))
    assert len(big.encode()) <= 64 * 1024
    parse(big)
