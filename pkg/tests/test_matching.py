import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import exhaustive_matched_reference
from rotreward.ltree import LabeledTree, TreeNode
from rotreward.matching import (
    MatchError,
    _Matcher,
    astpm,
    f_beta_score,
    partial_match,
    relpm,
    relpm_report,
)
from rotreward.planner import rot_as_tree, lower, normalize
from rotreward.sqlfront import parse


def leaf(label):
    return TreeNode(0, (label, ""))


def tree(label, *children, ordered=False):
    return TreeNode(0, (label, ""), list(children), ordered)


def build(node) -> LabeledTree:
    return LabeledTree.build(node)


# -- node_score ------------------------------------------------------------


def test_node_score_identical_subtrees():
    t = build(tree("X", leaf("A"), tree("B", leaf("C"))))
    matcher = _Matcher(t, t, 0.9)
    assert matcher.score(t.root, t.root) == pytest.approx(1.0)


def test_node_score_disjoint_leaves():
    g = build(leaf("A"))
    r = build(leaf("B"))
    assert _Matcher(g, r, 0.9).score(g.root, r.root) == 0.0


def test_node_score_half_matching_children():
    # root labels equal, two children, one matching: 0.5*1 + 0.5*0.5 = 0.75
    g = build(tree("X", leaf("A"), leaf("B")))
    r = build(tree("X", leaf("A"), leaf("C")))
    assert _Matcher(g, r, 0.5).score(g.root, r.root) == pytest.approx(0.75)


# -- partial_match ----------------------------------------------------------


def test_partial_match_reflexive():
    t = build(tree("X", tree("Y", leaf("A"), leaf("B")), leaf("C")))
    report = partial_match(t, t)
    assert report.precision == 1.0 and report.recall == 1.0 and report.f_beta == 1.0


def test_partial_match_label_disjoint():
    g = build(tree("X", leaf("A")))
    r = build(tree("Q", leaf("Z")))
    report = partial_match(g, r)
    assert report.precision == 0.0 and report.recall == 0.0 and report.f_beta == 0.0


def test_partial_match_f_beta_consistency():
    g = build(tree("X", leaf("A"), leaf("B"), leaf("Z")))
    r = build(tree("X", leaf("A"), leaf("B"), leaf("C"), leaf("D")))
    report = partial_match(g, r, alpha=0.9, beta=2.0)
    expected = f_beta_score(report.precision, report.recall, 2.0)
    assert abs(report.f_beta - expected) < 1e-12


def test_partial_match_fig1_pair_regression(catalogs):
    report = relpm_report(
        "SELECT name FROM technician WHERE age > 34",
        "SELECT name FROM technician WHERE age >= 34",
        catalogs["workshop"],
        alpha=0.9,
        beta=2.0,
    )
    assert report.precision < 1.0 and report.recall < 1.0
    # one node of seven differs on each side
    assert report.precision == pytest.approx(6 / 7)
    assert report.recall == pytest.approx(6 / 7)
    assert report.f_beta == pytest.approx(6 / 7)


def test_monotone_recall_when_adding_matching_subtree():
    g = build(tree("X", leaf("A")))
    r = build(tree("X", leaf("A"), tree("Y", leaf("B"))))
    before = partial_match(g, r).recall
    g2 = build(tree("X", leaf("A"), tree("Y", leaf("B"))))
    after = partial_match(g2, r).recall
    assert after >= before
    assert after == 1.0


def test_determinism():
    g = build(tree("X", leaf("A"), leaf("A"), tree("Y", leaf("A"))))
    r = build(tree("X", tree("Y", leaf("A")), leaf("A")))
    first = partial_match(g, r)
    second = partial_match(g, r)
    assert first.pairs == second.pairs
    assert first.matched_reference == second.matched_reference


# small trees shaped like real plans: distinct roles, duplicates only in
# positions the parent pairing can reach symmetrically
GREEDY_FIXTURES = [
    tree("X", leaf("A"), leaf("B")),
    tree("X", tree("Y", leaf("A")), tree("Z", leaf("B"))),
    tree("F", tree("S", leaf("c1")), tree("P", leaf("c1"), leaf("c2"))),
    tree("X", tree("Y", leaf("A"), leaf("B")), leaf("C"), leaf("D")),
    tree("J", tree("S", leaf("t1")), tree("S", leaf("t2")), tree("E", leaf("k1"), leaf("k2"))),
    tree("X", tree("A", tree("B", leaf("C")))),
    tree("P", tree("F", tree("S", leaf("t1")), tree("E", leaf("c"), leaf("v"))), leaf("c")),
]


def small_sql_trees(catalogs):
    statements = [
        ("workshop", "SELECT 1"),
        ("workshop", "SELECT name FROM technician"),
        ("workshop", "SELECT name FROM technician WHERE age > 34"),
        ("workshop", "SELECT name FROM technician WHERE age >= 34"),
        ("music", "SELECT title FROM song LIMIT 2"),
    ]
    out = []
    for schema, sql in statements:
        out.append(rot_as_tree(normalize(lower(parse(sql), catalogs[schema]))))
    return out


def test_greedy_matches_exhaustive_on_small_trees(catalogs):
    trees = [build(t) for t in GREEDY_FIXTURES] + small_sql_trees(catalogs)
    for g in trees:
        for r in trees:
            assert len(g) <= 8 and len(r) <= 8
            greedy = len(partial_match(g, r).matched_reference)
            exhaustive = exhaustive_matched_reference(g, r)
            assert greedy == exhaustive, (g.labels(), r.labels())


label_strategy = st.sampled_from(["A", "B", "C", "X"])


@st.composite
def small_trees(draw, max_nodes=7):
    label = draw(label_strategy)
    count = draw(st.integers(min_value=0, max_value=3))
    children = []
    budget = max_nodes - 1
    for _ in range(count):
        if budget <= 0:
            break
        child = draw(small_trees(max_nodes=min(3, budget)))
        budget -= len(child.children) + 1
        children.append(child)
    return TreeNode(0, (label, ""), children, False)


@settings(max_examples=120, deadline=None)
@given(small_trees(), small_trees())
def test_partial_match_ranges_property(g_root, r_root):
    g, r = LabeledTree.build(g_root), LabeledTree.build(r_root)
    report = partial_match(g, r)
    assert 0.0 <= report.precision <= 1.0
    assert 0.0 <= report.recall <= 1.0
    assert 0.0 <= report.f_beta <= 1.0
    assert report.matched_reference <= {n.node_id for n in r.nodes}
    # reflexivity on the same structures
    assert partial_match(g, g).f_beta == 1.0


# -- SQL-level scorers --------------------------------------------------------


def test_relpm_identical(catalogs, corpus):
    for seed in corpus[:20]:
        assert relpm(seed.sql, seed.sql, catalogs[seed.schema_id]) == 1.0


def test_astpm_identical(corpus):
    for seed in corpus[:20]:
        assert astpm(seed.sql, seed.sql) == 1.0


def test_relpm_in_clause_pair_table6(catalogs):
    gen = "SELECT Name FROM (SELECT Name, Age FROM technician) AS t WHERE Age IN (36, 37)"
    ref = "SELECT Name FROM (SELECT Name, Age FROM technician) AS t WHERE Age = 36 OR Age = 37"
    assert relpm(gen, ref, catalogs["workshop"]) == 1.0
    assert astpm(gen, ref) < 1.0


def test_relpm_and_or_perturbation_below_one(catalogs):
    gen = "SELECT * FROM Products WHERE Price >= 60 OR Price <= 120"
    ref = "SELECT * FROM Products WHERE Price >= 60 AND Price <= 120"
    score = relpm(gen, ref, catalogs["shop"])
    assert score < 1.0
    assert score == pytest.approx(0.8888888888888888, abs=1e-9)  # regression lock


def test_astpm_projection_difference_regression():
    score = astpm("SELECT a, b FROM t", "SELECT a FROM t")
    assert score == pytest.approx(0.9615384615384615, abs=1e-9)  # regression lock


def test_relpm_error_sides(catalogs):
    with pytest.raises(MatchError) as err:
        relpm("SELECT nme FROM singer", "SELECT name FROM singer", catalogs["music"])
    assert err.value.side == "generated" and err.value.error_class == "rot"
    with pytest.raises(MatchError) as err:
        relpm("SELECT name FROM singer", "SELECT nme FROM singer", catalogs["music"])
    assert err.value.side == "reference"
    with pytest.raises(MatchError) as err:
        relpm("SELEC 1", "SELECT name FROM singer", catalogs["music"])
    assert err.value.error_class == "syntax"


def test_alpha_beta_validation():
    t = build(leaf("A"))
    with pytest.raises(ValueError):
        partial_match(t, t, alpha=1.5)
    with pytest.raises(ValueError):
        partial_match(t, t, beta=0.0)
