"""Independent oracles used by the tests.

Each one recomputes a result through a different route than the code under
test: exhaustive enumeration for the greedy matcher, literal equation loops
for the graph matching network, AST surgery plus execution for CTE rewrites.
"""
from __future__ import annotations

import itertools

import numpy as np

from rotreward.ltree import LabeledTree, TreeNode
from rotreward.sqlfront import parse, print_canonical
from rotreward.sqlfront.nodes import AstNode


# -- exhaustive partial-matching oracle ----------------------------------------


def best_coverage_sets(gen: LabeledTree, ref: LabeledTree, g: TreeNode, r: TreeNode, memo):
    """All maximal matched-reference sets achievable when pairing g with r,
    enumerating every child injection instead of the greedy order."""
    key = (g.node_id, r.node_id)
    if key in memo:
        return memo[key]
    base = frozenset([r.node_id]) if g.label == r.label else frozenset()
    results = {base}
    if g.children and r.children:
        k = min(len(g.children), len(r.children))
        gc, rc = g.children, r.children
        for g_subset in itertools.permutations(range(len(gc)), k):
            for r_subset in itertools.permutations(range(len(rc)), k):
                combined = base
                for gi, ri in zip(g_subset, r_subset):
                    options = best_coverage_sets(gen, ref, gc[gi], rc[ri], memo)
                    best = max(options, key=len)
                    combined = combined | best
                results.add(combined)
    # keep only maximal sets to bound the search
    keep = {s for s in results if not any(s < other for other in results)}
    memo[key] = keep
    return keep


def exhaustive_matched_reference(gen: LabeledTree, ref: LabeledTree) -> int:
    """Maximum distinct reference nodes coverable by any label-consistent
    assignment of generated nodes to candidates (small trees only)."""
    memo: dict = {}
    per_gen_options: list[list[frozenset]] = []
    for g in gen.nodes:
        candidates = [r for r in ref.nodes if r.label == g.label]
        if not candidates:
            continue
        options = []
        for r in candidates:
            options.extend(best_coverage_sets(gen, ref, g, r, memo))
        per_gen_options.append(sorted(set(options), key=len, reverse=True)[:8])
    best = 0
    if not per_gen_options:
        return 0
    total = 1
    for options in per_gen_options:
        total *= len(options)
    if total > 200000:
        raise RuntimeError(f"oracle search space too large: {total}")
    for combo in itertools.product(*per_gen_options):
        union: set[int] = set()
        for chosen in combo:
            union |= chosen
        best = max(best, len(union))
    return best


# -- straight-line GMN forward (no autodiff, no batching) -----------------------


def naive_forward_pair(model, g1, g2) -> float:
    """Literal per-node/per-edge loops over the propagation equations."""
    p = {k: np.asarray(v, dtype=np.float64) for k, v in model.params.items()}
    hp = model.hyperparams

    def mlp(name, x):
        hidden = np.tanh(x @ p[f"{name}.W1"] + p[f"{name}.b1"])
        return hidden @ p[f"{name}.W2"] + p[f"{name}.b2"]

    def encode(graph):
        return graph.features.astype(np.float64) @ p["embed.W"] + p["embed.b"]

    h = [encode(g1), encode(g2)]
    pos = [g1.positions.astype(np.float64), g2.positions.astype(np.float64)]
    graphs = [g1, g2]
    for _ in range(hp.steps):
        messages = []
        for side in (0, 1):
            graph = graphs[side]
            m = np.zeros_like(h[side])
            for src, dst, etype in zip(graph.edge_src, graph.edge_dst, graph.edge_type):
                x = np.concatenate([h[side][dst], h[side][src], p["edge.emb"][etype]])
                m[dst] += mlp("inner", x[None, :])[0]
            messages.append(m)
        r = [mlp("cross", np.concatenate([h[s], pos[s]], axis=1)) for s in (0, 1)]
        mus = []
        for side in (0, 1):
            other = 1 - side
            mu = np.zeros_like(r[side])
            for v in range(len(r[side])):
                scores = np.array(
                    [r[side][v] @ r[other][u] / np.sqrt(hp.state_dim) for u in range(len(r[other]))]
                )
                weights = np.exp(scores - scores.max())
                weights = weights / weights.sum()
                for u in range(len(r[other])):
                    mu[v] += weights[u] * (r[side][v] - r[other][u])
            mus.append(mu)
        for side in (0, 1):
            cat = np.concatenate([h[side], messages[side], mus[side]], axis=1)
            z = 1.0 / (1.0 + np.exp(-(cat @ p["update.Wz"] + p["update.bz"])))
            candidate = np.tanh(cat @ p["update.Wc"] + p["update.bc"])
            h[side] = (1.0 - z) * h[side] + z * candidate
    embeddings = []
    for side in (0, 1):
        gates = 1.0 / (1.0 + np.exp(-mlp("readout.gate", h[side])))
        values = mlp("readout.node", h[side])
        pooled = (gates * values).sum(axis=0, keepdims=True)
        embeddings.append(mlp("readout.out", pooled)[0])
    return -float(np.linalg.norm(embeddings[0] - embeddings[1]))


def pairwise_auc(scores, labels) -> float:
    """Brute-force AUC: every positive/negative comparison counts 1, ties 0.5."""
    positives = [s for s, y in zip(scores, labels) if y == 1]
    negatives = [s for s, y in zip(scores, labels) if y == 0]
    total = 0.0
    for sp in positives:
        for sn in negatives:
            if sp > sn:
                total += 1.0
            elif sp == sn:
                total += 0.5
    return total / (len(positives) * len(negatives))


# -- mechanical CTE rewrites -----------------------------------------------------


def _top_level_conjuncts(node: AstNode) -> list[AstNode]:
    if node.kind == "expr-binary" and node.attrs.get("op") == "and":
        return _top_level_conjuncts(node.children[0]) + _top_level_conjuncts(node.children[1])
    return [node]


def _uses_qualifiers(node: AstNode) -> bool:
    return any(
        n.kind == "expr-column" and n.attrs.get("qualifier") for n in node.walk()
    )


def cte_rewrites(sql: str) -> list[str]:
    """Equivalence-preserving CTE decompositions of a plain one-table SELECT.

    Only applies to SELECT cores whose FROM is a single unaliased table and
    whose columns are unqualified; WHERE conjunctions split across stages.
    """
    try:
        ast = parse(sql)
    except Exception:
        return []
    core = ast.root
    if core.kind != "select-core":
        return []
    clauses = {c.kind: c for c in core.children}
    from_clause = clauses.get("from-clause")
    if from_clause is None or from_clause.children[0].kind != "table-ref":
        return []
    table_ref = from_clause.children[0]
    if table_ref.attrs.get("alias") or _uses_qualifiers(core):
        return []
    table = table_ref.attrs["table"]

    rewrites: list[str] = []

    def with_statement(ctes: list[tuple[str, AstNode]], main: AstNode) -> str:
        children = [AstNode("cte-def", {"name": name}, [body]) for name, body in ctes]
        children.append(main)
        return print_canonical(type(ast)(AstNode("with-clause", {}, children)))

    def select_star_from(table_name: str, predicate: AstNode | None) -> AstNode:
        children = [
            AstNode("projection", {}, [AstNode("expr-column", {"column": "*"})]),
            AstNode("from-clause", {}, [AstNode("table-ref", {"table": table_name})]),
        ]
        if predicate is not None:
            children.append(AstNode("where-clause", {}, [predicate]))
        return AstNode("select-core", {}, children)

    # stage1 = whole body behind a pass-through CTE
    main = core.clone()
    main_from = next(c for c in main.children if c.kind == "from-clause")
    main_from.children[0] = AstNode("table-ref", {"table": "stage1"})
    rewrites.append(with_statement([("stage1", select_star_from(table, None))], main))

    where = clauses.get("where-clause")
    if where is not None:
        conjuncts = _top_level_conjuncts(where.children[0])
        if len(conjuncts) >= 2:
            first, rest = conjuncts[0], conjuncts[1:]
            remaining = rest[0]
            for extra in rest[1:]:
                remaining = AstNode("expr-binary", {"op": "and"}, [remaining, extra])
            # two stages: filter split across CTE and main query
            main = core.clone()
            main_from = next(c for c in main.children if c.kind == "from-clause")
            main_from.children[0] = AstNode("table-ref", {"table": "stage1"})
            main_where = next(c for c in main.children if c.kind == "where-clause")
            main_where.children = [remaining.clone()]
            rewrites.append(
                with_statement([("stage1", select_star_from(table, first.clone()))], main)
            )
            # three stages: each filter in its own CTE
            main = core.clone()
            main.children = [c for c in main.children if c.kind != "where-clause"]
            main_from = next(c for c in main.children if c.kind == "from-clause")
            main_from.children[0] = AstNode("table-ref", {"table": "stage2"})
            rewrites.append(
                with_statement(
                    [
                        ("stage1", select_star_from(table, first.clone())),
                        ("stage2", select_star_from("stage1", remaining.clone())),
                    ],
                    main,
                )
            )
    return rewrites


def repeated_cte_statement(sql: str) -> str | None:
    """Wrap a statement so its second CTE is a pass-through copy of the first."""
    try:
        ast = parse(sql)
    except Exception:
        return None
    if ast.root.kind != "select-core":
        return None
    inner = print_canonical(ast)
    return (
        f"WITH stage1 AS ({inner}), stage2 AS (SELECT * FROM stage1) "
        f"SELECT * FROM stage2"
    )
