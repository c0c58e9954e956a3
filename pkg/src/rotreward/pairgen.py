"""Labeled SQL pair construction: file ingestion plus seven augmentation
strategies (one equivalence-preserving rewrite, six semantic perturbations).

Perturbation labels are not taken on faith: when a toy database is supplied,
a candidate is kept only if its execution differs from (or errs against) the
reference, and the IN-list rewrite only if results stay identical.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from pathlib import Path

from .executor import Database, ExecError, execute, results_equal
from .planner import Catalog
from .sqlfront import ParseError, parse, print_canonical
from .sqlfront.nodes import AstNode

STRATEGIES = (
    "in-clause-replacement",
    "column-name-perturbation",
    "and-or-swap",
    "comparison-operator-swap",
    "table-source-replacement",
    "column-name-replacement",
    "column-removal",
)
EQUIVALENT_STRATEGIES = {"in-clause-replacement"}

DEFAULT_MIX = {
    "in-clause-replacement": 0.5,
    "column-name-perturbation": 0.5 / 6,
    "and-or-swap": 0.5 / 6,
    "comparison-operator-swap": 0.5 / 6,
    "table-source-replacement": 0.5 / 6,
    "column-name-replacement": 0.5 / 6,
    "column-removal": 0.5 / 6,
}

COMPARISON_POOL = ("=", "!=", "<", "<=", ">", ">=")


class StrategyNotApplicable(Exception):
    pass


class InsufficientSeeds(Exception):
    pass


@dataclass(frozen=True)
class SqlPair:
    pair_id: str
    schema_id: str
    reference_sql: str
    candidate_sql: str
    label: int  # 1 = functionally equivalent
    provenance: str  # strategy tag or "ingested"

    def as_dict(self) -> dict:
        return {
            "id": self.pair_id,
            "schema_id": self.schema_id,
            "reference_sql": self.reference_sql,
            "candidate_sql": self.candidate_sql,
            "label": self.label,
        }


@dataclass(frozen=True)
class StrategySpec:
    strategy: str
    operator_pool: tuple[str, ...] = COMPARISON_POOL

    def __post_init__(self):
        if self.strategy not in STRATEGIES:
            raise ValueError(f"unknown strategy {self.strategy!r}")


@dataclass
class IngestResult:
    pairs: list[SqlPair]
    rejected: list[tuple[int, str]]  # (line number, reason)


def ingest(path) -> IngestResult:
    """Read a pair JSONL file; unparseable SQL rows are rejected with reasons,
    malformed lines and duplicate ids are hard errors."""
    pairs: list[SqlPair] = []
    rejected: list[tuple[int, str]] = []
    seen_ids: set[str] = set()
    with open(path, "r", encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                raw = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ValueError(f"{path}:{line_no}: malformed JSON: {exc}") from exc
            pair_id = str(raw.get("id", f"line-{line_no}"))
            if pair_id in seen_ids:
                raise ValueError(f"{path}:{line_no}: duplicate pair id {pair_id!r}")
            seen_ids.add(pair_id)
            label = raw.get("label")
            if label not in (0, 1):
                rejected.append((line_no, f"label {label!r} is not 0/1"))
                continue
            try:
                parse(raw["reference_sql"])
                parse(raw["candidate_sql"])
            except (ParseError, KeyError) as exc:
                rejected.append((line_no, f"unparseable row: {exc}"))
                continue
            pairs.append(
                SqlPair(
                    pair_id,
                    str(raw.get("schema_id", "")),
                    raw["reference_sql"],
                    raw["candidate_sql"],
                    int(label),
                    "ingested",
                )
            )
    return IngestResult(pairs, rejected)


def write_pairs(pairs: list[SqlPair], path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        for pair in pairs:
            handle.write(json.dumps(pair.as_dict()) + "\n")


# -- augmentation ------------------------------------------------------------


def _sites(root: AstNode, predicate) -> list[AstNode]:
    return [node for node in root.walk() if predicate(node)]


def _catalog_column_names(catalog: Catalog) -> set[str]:
    names: set[str] = set()
    for table in catalog.tables.values():
        names.update(table.column_names())
    return names


def _perturb_name(name: str, taken: set[str], rng: random.Random) -> str:
    candidates: list[str] = []
    for i in range(len(name)):
        dropped = name[:i] + name[i + 1 :]
        if len(dropped) >= 2:
            candidates.append(dropped)
    for i in range(len(name) - 1):
        swapped = name[:i] + name[i + 1] + name[i] + name[i + 2 :]
        candidates.append(swapped)
    candidates = sorted({c for c in candidates if c != name and c not in taken})
    if not candidates:
        raise StrategyNotApplicable(f"no usable perturbation of {name!r}")
    return rng.choice(candidates)


def _apply_strategy(ast_root: AstNode, catalog: Catalog, spec: StrategySpec, rng: random.Random) -> AstNode:
    root = ast_root.clone()
    strategy = spec.strategy

    if strategy == "in-clause-replacement":
        sites = _sites(
            root,
            lambda n: n.kind == "expr-in"
            and not n.attrs.get("negated")
            and not n.attrs.get("subquery")
            and len(n.children) >= 3,
        )
        if not sites:
            raise StrategyNotApplicable("no IN list with two or more items")
        site = rng.choice(sites)
        lhs = site.children[0]
        terms = [
            AstNode("expr-binary", {"op": "="}, [lhs.clone(), item])
            for item in site.children[1:]
        ]
        combined = terms[0]
        for term in terms[1:]:
            combined = AstNode("expr-binary", {"op": "or"}, [combined, term])
        site.kind, site.attrs, site.children = combined.kind, combined.attrs, combined.children
        return root

    if strategy == "column-name-perturbation":
        projections = _sites(root, lambda n: n.kind == "projection")
        columns = [
            item
            for proj in projections
            for item in proj.children
            if item.kind == "expr-column" and item.attrs["column"] != "*" and len(item.attrs["column"]) >= 3
        ]
        if not columns:
            raise StrategyNotApplicable("no perturbable projection column")
        site = rng.choice(columns)
        site.attrs["column"] = _perturb_name(site.attrs["column"], _catalog_column_names(catalog), rng)
        return root

    if strategy == "and-or-swap":
        sites = _sites(root, lambda n: n.kind == "expr-binary" and n.attrs.get("op") in ("and", "or"))
        if not sites:
            raise StrategyNotApplicable("no AND/OR site")
        site = rng.choice(sites)
        site.attrs["op"] = "or" if site.attrs["op"] == "and" else "and"
        return root

    if strategy == "comparison-operator-swap":
        sites = _sites(root, lambda n: n.kind == "expr-binary" and n.attrs.get("op") in spec.operator_pool)
        if not sites:
            raise StrategyNotApplicable("no comparison site")
        site = rng.choice(sites)
        alternatives = [op for op in spec.operator_pool if op != site.attrs["op"]]
        site.attrs["op"] = rng.choice(alternatives)
        return root

    if strategy == "table-source-replacement":
        sites = _sites(root, lambda n: n.kind == "table-ref")
        if not sites or len(catalog.tables) < 2:
            raise StrategyNotApplicable("no replaceable table source")
        site = rng.choice(sites)
        others = sorted(set(catalog.tables) - {site.attrs["table"]})
        if not others:
            raise StrategyNotApplicable("no alternative table")
        site.attrs["table"] = rng.choice(others)
        return root

    if strategy == "column-name-replacement":
        column_sites = _sites(root, lambda n: n.kind == "expr-column" and n.attrs["column"] != "*")
        rng.shuffle(column_sites)
        for site in column_sites:
            name = site.attrs["column"]
            hosts = [t for t in catalog.tables.values() if t.column_type(name) is not None]
            if len(hosts) != 1:
                continue
            host = hosts[0]
            same_type = [
                c for c, t in host.columns if c != name and t == host.column_type(name)
            ]
            if not same_type:
                continue
            replacement = rng.choice(sorted(same_type))
            for node in root.walk():
                if node.kind == "expr-column" and node.attrs["column"] == name:
                    node.attrs["column"] = replacement
            return root
        raise StrategyNotApplicable("no column with a same-typed sibling")

    if strategy == "column-removal":
        projections = _sites(root, lambda n: n.kind == "projection" and len(n.children) >= 2)
        if not projections:
            raise StrategyNotApplicable("no multi-column projection")
        site = rng.choice(projections)
        site.children.pop(rng.randrange(len(site.children)))
        return root

    raise ValueError(f"unknown strategy {strategy!r}")


def augment(
    seed_sql: str,
    catalog: Catalog,
    spec: StrategySpec,
    rng: random.Random,
    db: Database | None = None,
    schema_id: str = "",
    pair_id: str = "aug-0",
) -> SqlPair:
    """One augmented pair from a seed statement.

    Raises StrategyNotApplicable when the seed offers no usable site or when
    execution-based verification rejects the candidate's label.
    """
    ast = parse(seed_sql)
    mutated = _apply_strategy(ast.root, catalog, spec, rng)
    candidate_sql = print_canonical(type(ast)(mutated))
    if candidate_sql == seed_sql:
        raise StrategyNotApplicable("candidate is textually identical to the seed")
    label = 1 if spec.strategy in EQUIVALENT_STRATEGIES else 0
    if db is not None:
        label = _verify_label(seed_sql, candidate_sql, label, db, catalog)
    return SqlPair(pair_id, schema_id, seed_sql, candidate_sql, label, spec.strategy)


def _verify_label(reference_sql, candidate_sql, label, db, catalog) -> int:
    try:
        reference = execute(reference_sql, db, catalog)
    except ExecError as exc:
        raise StrategyNotApplicable(f"seed does not execute: {exc}") from exc
    try:
        candidate = execute(candidate_sql, db, catalog)
        equal = results_equal(candidate, reference)
    except ExecError:
        equal = False
    if label == 1 and not equal:
        raise StrategyNotApplicable("rewrite was expected to preserve results but did not")
    if label == 0 and equal:
        raise StrategyNotApplicable("perturbation did not change execution results")
    return label


# -- dataset construction ------------------------------------------------------


@dataclass(frozen=True)
class Seed:
    schema_id: str
    sql: str


def load_seeds(path) -> list[Seed]:
    seeds = []
    with open(path, "r", encoding="utf-8") as handle:
        for line in handle:
            line = line.strip()
            if line:
                raw = json.loads(line)
                seeds.append(Seed(raw["schema_id"], raw["sql"]))
    return seeds


def diversify_seeds(
    seeds: list[Seed],
    factor: int,
    rng_seed: int = 0,
    databases: dict[str, Database] | None = None,
    catalogs: dict[str, Catalog] | None = None,
) -> list[Seed]:
    """Multiply the seed pool by jittering integer literals (desk-scale volume).

    LIMIT/OFFSET counts are left alone; variants that stop executing are
    dropped when databases are supplied.
    """
    rng = random.Random(rng_seed)
    out: list[Seed] = list(seeds)
    seen: set[tuple[str, str]] = {(s.schema_id, s.sql) for s in seeds}
    for seed in seeds:
        try:
            base = parse(seed.sql)
        except ParseError:
            continue
        sites = [
            node
            for node in base.root.walk()
            if node.kind == "expr-literal"
            and node.attrs["type"] == "number"
            and isinstance(node.attrs["value"], int)
        ]
        limit_guard = {
            id(child)
            for node in base.root.walk()
            if node.kind == "limit-clause"
            for child in node.children
        }
        sites = [s for s in sites if id(s) not in limit_guard]
        if not sites:
            continue
        for _ in range(factor):
            variant = base.root.clone()
            variant_sites = [
                node
                for node in variant.walk()
                if node.kind == "expr-literal"
                and node.attrs["type"] == "number"
                and isinstance(node.attrs["value"], int)
            ]
            guard = {
                id(child)
                for node in variant.walk()
                if node.kind == "limit-clause"
                for child in node.children
            }
            variant_sites = [s for s in variant_sites if id(s) not in guard]
            for site in variant_sites:
                site.attrs["value"] = site.attrs["value"] + rng.choice(
                    [-9, -7, -5, -3, -2, -1, 1, 2, 3, 5, 7, 9]
                )
            sql = print_canonical(type(base)(variant))
            key = (seed.schema_id, sql)
            if key in seen:
                continue
            if databases is not None and seed.schema_id in databases:
                catalog = (catalogs or {}).get(seed.schema_id)
                try:
                    execute(sql, databases[seed.schema_id], catalog)
                except ExecError:
                    continue
            seen.add(key)
            out.append(Seed(seed.schema_id, sql))
    return out


def build_dataset(
    seeds: list[Seed],
    catalogs: dict[str, Catalog],
    mix: dict[str, float] | None = None,
    n: int = 1000,
    rng_seed: int = 0,
    databases: dict[str, Database] | None = None,
    max_attempts_per_pair: int = 600,
) -> list[SqlPair]:
    """Deterministic dataset of n augmented pairs following the strategy mix.

    The mix is enforced through per-strategy quotas, so class proportions
    land within rounding of the requested shares.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if not seeds:
        raise InsufficientSeeds("no seeds supplied")
    mix = dict(mix or DEFAULT_MIX)
    for strategy in mix:
        if strategy not in STRATEGIES:
            raise ValueError(f"unknown strategy {strategy!r} in mix")
    total = sum(mix.values())
    strategies = sorted(mix)
    quotas = {s: int(round(mix[s] / total * n)) for s in strategies}
    deficit = n - sum(quotas.values())
    for s in strategies:
        if deficit == 0:
            break
        step = 1 if deficit > 0 else -1
        if quotas[s] + step >= 0:
            quotas[s] += step
            deficit -= step

    rng = random.Random(rng_seed)
    pairs: list[SqlPair] = []
    seen: set[tuple[str, str, str]] = set()
    for strategy in strategies:
        built = 0
        failures = 0
        while built < quotas[strategy]:
            if failures >= max_attempts_per_pair:
                raise InsufficientSeeds(
                    f"strategy {strategy!r}: no applicable seeds left after "
                    f"{failures} consecutive failures ({built}/{quotas[strategy]} built)"
                )
            seed = rng.choice(seeds)
            catalog = catalogs.get(seed.schema_id)
            if catalog is None:
                failures += 1
                continue
            db = databases.get(seed.schema_id) if databases else None
            try:
                pair = augment(
                    seed.sql,
                    catalog,
                    StrategySpec(strategy),
                    rng,
                    db=db,
                    schema_id=seed.schema_id,
                    pair_id=f"aug-{len(pairs):06d}",
                )
            except (StrategyNotApplicable, ParseError):
                failures += 1
                continue
            key = (pair.schema_id, pair.reference_sql, pair.candidate_sql)
            if key in seen:
                failures += 1
                continue
            seen.add(key)
            pairs.append(pair)
            built += 1
            failures = 0
    return pairs


def schema_split(
    pairs: list[SqlPair], holdout_fraction: float = 0.25, rng_seed: int = 0
) -> tuple[list[SqlPair], list[SqlPair]]:
    """Split by schema id so held-out schemas never appear in training."""
    schemas = sorted({p.schema_id for p in pairs})
    if len(schemas) < 2:
        raise ValueError("schema split needs pairs from at least two schemas")
    rng = random.Random(rng_seed)
    rng.shuffle(schemas)
    holdout_count = max(1, round(len(schemas) * holdout_fraction))
    holdout_schemas = set(schemas[:holdout_count])
    train = [p for p in pairs if p.schema_id not in holdout_schemas]
    heldout = [p for p in pairs if p.schema_id in holdout_schemas]
    return train, heldout
