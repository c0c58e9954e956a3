"""Rule-based hierarchical partial matching over labeled trees.

Every generated node is scored against every reference candidate; the
score blends node-level label equality with the mean score of greedily
(or positionally, for order-sensitive nodes) paired children:

    m = alpha * m_self + (1 - alpha) * mean(paired child scores)

The global report derives precision over generated nodes, recall over
distinct covered reference nodes, and a recall-weighted F-beta.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .ltree import LabeledTree, TreeNode

DEFAULT_ALPHA = 0.9
DEFAULT_BETA = 2.0


class MatchError(Exception):
    """Parse or lowering failure on one side of a comparison."""

    def __init__(self, side: str, error_class: str, message: str):
        super().__init__(message)
        self.side = side  # "generated" | "reference"
        self.error_class = error_class  # "syntax" | "rot"
        self.message = message


@dataclass
class MatchReport:
    pairs: list[tuple[int, int, float]]  # (generated id, reference id, score)
    matched_generated: set[int]
    matched_reference: set[int]
    precision: float
    recall: float
    f_beta: float
    alpha: float
    beta: float


def f_beta_score(precision: float, recall: float, beta: float) -> float:
    denominator = beta * beta * precision + recall
    if denominator == 0.0:
        return 0.0
    return (1.0 + beta * beta) * precision * recall / denominator


class _Matcher:
    def __init__(self, gen: LabeledTree, ref: LabeledTree, alpha: float):
        self.gen = gen
        self.ref = ref
        self.alpha = alpha
        self.scores: dict[tuple[int, int], float] = {}
        self.pairings: dict[tuple[int, int], list[tuple[int, int]]] = {}

    def score(self, g: TreeNode, r: TreeNode) -> float:
        key = (g.node_id, r.node_id)
        cached = self.scores.get(key)
        if cached is not None:
            return cached
        m_self = 1.0 if g.label == r.label else 0.0
        if not g.children:
            self.scores[key] = m_self
            self.pairings[key] = []
            return m_self
        pairing = self.pair_children(g, r)
        if r.children:
            total = sum(self.scores[(gc, rc)] for gc, rc in pairing)
            child_mean = total / len(g.children)
        else:
            child_mean = 0.0
        value = self.alpha * m_self + (1.0 - self.alpha) * child_mean
        self.scores[key] = value
        self.pairings[key] = pairing
        return value

    def pair_children(self, g: TreeNode, r: TreeNode) -> list[tuple[int, int]]:
        if not g.children or not r.children:
            return []
        if g.ordered and r.ordered:
            pairing = []
            for gc, rc in zip(g.children, r.children):
                self.score(gc, rc)
                pairing.append((gc.node_id, rc.node_id))
            return pairing
        candidates = []
        for i, gc in enumerate(g.children):
            for j, rc in enumerate(r.children):
                candidates.append((-self.score(gc, rc), i, j))
        candidates.sort()
        used_g: set[int] = set()
        used_r: set[int] = set()
        pairing = []
        for negative_score, i, j in candidates:
            if i in used_g or j in used_r:
                continue
            used_g.add(i)
            used_r.add(j)
            pairing.append((g.children[i].node_id, r.children[j].node_id))
        return pairing

    def collect_matched_refs(self, g: TreeNode, r: TreeNode, out: set[int]):
        if g.label == r.label:
            out.add(r.node_id)
        for gc_id, rc_id in self.pairings.get((g.node_id, r.node_id), []):
            self.collect_matched_refs(self.gen.nodes[gc_id], self.ref.nodes[rc_id], out)


def partial_match(
    gen: LabeledTree,
    ref: LabeledTree,
    alpha: float = DEFAULT_ALPHA,
    beta: float = DEFAULT_BETA,
) -> MatchReport:
    """Match every generated node to its best reference candidate."""
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie in (0, 1)")
    if beta <= 0.0:
        raise ValueError("beta must be positive")
    matcher = _Matcher(gen, ref, alpha)
    pairs: list[tuple[int, int, float]] = []
    matched_gen: set[int] = set()
    matched_ref: set[int] = set()
    for g in gen.nodes:
        best_score = -1.0
        best: TreeNode | None = None
        for r in ref.nodes:  # preorder: earliest candidate wins ties
            value = matcher.score(g, r)
            if value > best_score:
                best_score = value
                best = r
        if best is not None and best.label == g.label:
            matched_gen.add(g.node_id)
            pairs.append((g.node_id, best.node_id, best_score))
            matcher.collect_matched_refs(g, best, matched_ref)
    precision = len(matched_gen) / len(gen.nodes) if len(gen.nodes) else 0.0
    recall = len(matched_ref) / len(ref.nodes) if len(ref.nodes) else 0.0
    return MatchReport(
        pairs,
        matched_gen,
        matched_ref,
        precision,
        recall,
        f_beta_score(precision, recall, beta),
        alpha,
        beta,
    )


def node_score(
    gen: LabeledTree, g: TreeNode, ref: LabeledTree, r: TreeNode, alpha: float = DEFAULT_ALPHA
) -> float:
    """Recursive similarity of one generated node against one candidate."""
    return _Matcher(gen, ref, alpha).score(g, r)


# -- SQL-level scorers -------------------------------------------------------


def _gen_ref_trees_rot(gen_sql: str, ref_sql: str, catalog, alpha, beta):
    from .planner import lower, normalize, rot_as_tree
    from .planner.rot import RotError
    from .sqlfront import ParseError, parse

    trees = []
    for side, sql in (("reference", ref_sql), ("generated", gen_sql)):
        try:
            ast = parse(sql)
        except ParseError as exc:
            raise MatchError(side, "syntax", str(exc)) from exc
        try:
            rot = normalize(lower(ast, catalog))
        except RotError as exc:
            raise MatchError(side, "rot", str(exc)) from exc
        trees.append(rot_as_tree(rot))
    ref_tree, gen_tree = trees
    return gen_tree, ref_tree


def relpm(
    gen_sql: str,
    ref_sql: str,
    catalog,
    alpha: float = DEFAULT_ALPHA,
    beta: float = DEFAULT_BETA,
) -> float:
    """F-beta of partial matching over normalized operator trees."""
    gen_tree, ref_tree = _gen_ref_trees_rot(gen_sql, ref_sql, catalog, alpha, beta)
    return partial_match(gen_tree, ref_tree, alpha, beta).f_beta


def relpm_report(
    gen_sql: str,
    ref_sql: str,
    catalog,
    alpha: float = DEFAULT_ALPHA,
    beta: float = DEFAULT_BETA,
) -> MatchReport:
    gen_tree, ref_tree = _gen_ref_trees_rot(gen_sql, ref_sql, catalog, alpha, beta)
    return partial_match(gen_tree, ref_tree, alpha, beta)


def astpm(
    gen_sql: str,
    ref_sql: str,
    alpha: float = DEFAULT_ALPHA,
    beta: float = DEFAULT_BETA,
) -> float:
    """F-beta of partial matching over surface syntax trees."""
    from .sqlfront import ParseError, ast_as_tree, parse

    trees = []
    for side, sql in (("reference", ref_sql), ("generated", gen_sql)):
        try:
            trees.append(ast_as_tree(parse(sql)))
        except ParseError as exc:
            raise MatchError(side, "syntax", str(exc)) from exc
    ref_tree, gen_tree = trees
    return partial_match(gen_tree, ref_tree, alpha, beta).f_beta
