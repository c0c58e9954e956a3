"""Command-line front end.

Scoring subcommands print one JSON document on stdout (pretty with
--pretty). Exit codes: 0 on success, 1 on scoring configuration errors,
2 on usage errors. Per-pair scoring grades are data, not process failures.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from .executor import ConfigurationError, ExecError, execute, ex_reward, load_database_file
from .gmn import (
    TrainConfig,
    auc_from_scores,
    bench_kernels,
    init_model,
    load_checkpoint_file,
    save_checkpoint_file,
    train,
)
from .gmn.train import batch_similarities
from .matching import DEFAULT_ALPHA, DEFAULT_BETA, MatchError, astpm, relpm
from .pairgen import (
    DEFAULT_MIX,
    IngestResult,
    Seed,
    build_dataset,
    diversify_seeds,
    ingest,
    load_seeds,
    schema_split,
    write_pairs,
)
from .planner import load_catalog_file, lower, normalize, rot_as_graph
from .reward import DEFAULT_BETA_KL, RewardConfig, outcome, reward_trace
from .service import ScoreService, ast_dump, serve_stdio, serve_tcp
from .sqlfront import ParseError, parse, print_canonical, tokenize
from .steprtm import step_rewards


def data_path() -> Path:
    return Path(__file__).resolve().parent / "data"


def load_registry(path: str | Path, loader):
    path = Path(path)
    if path.is_dir():
        return {p.stem: loader(p) for p in sorted(path.glob("*.json"))}
    return {path.stem: loader(path)}


def load_catalogs(path) -> dict:
    return load_registry(path, load_catalog_file)


def load_databases(path) -> dict:
    return load_registry(path, load_database_file)


def emit(payload, pretty: bool):
    print(json.dumps(payload, indent=2 if pretty else None))


def read_sql(args, attr: str) -> str:
    inline = getattr(args, f"{attr}_sql", None)
    if inline:
        return inline
    path = getattr(args, attr, None)
    if path:
        return Path(path).read_text(encoding="utf-8").strip()
    raise ConfigurationError(f"missing --{attr} file or --{attr}-sql text")


def pick_catalog(catalogs: dict, schema: str | None):
    if schema is None:
        if len(catalogs) == 1:
            return next(iter(catalogs.values()))
        raise ConfigurationError("--schema is required when the catalog holds several schemas")
    if schema not in catalogs:
        raise ConfigurationError(f"unknown schema id {schema!r}")
    return catalogs[schema]


def build_reward_config(args, catalogs, databases) -> RewardConfig:
    model = None
    if args.scorer == "gmn":
        if not args.checkpoint:
            raise ConfigurationError("--checkpoint is required for the gmn scorer")
        model = load_checkpoint_file(args.checkpoint)
    catalog = None
    if args.scorer != "astpm" or getattr(args, "stepwise", False):
        catalog = pick_catalog(catalogs, args.schema)
    database = None
    if args.scorer == "ex":
        database = databases.get(args.schema) if args.schema else next(iter(databases.values()), None)
        if database is None:
            raise ConfigurationError(f"no database for schema {args.schema!r}")
    return RewardConfig(
        scorer=args.scorer,
        beta_kl=args.beta_kl,
        stepwise=getattr(args, "stepwise", False),
        alpha=args.alpha,
        beta_f=args.beta_f,
        catalog=catalog,
        model=model,
        database=database,
    )


# -- subcommands ---------------------------------------------------------------


def cmd_parse(args) -> int:
    try:
        ast = parse(read_sql(args, "gen"))
    except ParseError as exc:
        emit({"error_class": exc.error_class, "message": exc.message, "position": exc.position}, args.pretty)
        return 0
    payload = {"ast": ast_dump(ast.root), "canonical": print_canonical(ast)}
    emit(payload, args.pretty)
    return 0


def cmd_plan(args) -> int:
    catalogs = load_catalogs(args.catalog)
    catalog = pick_catalog(catalogs, args.schema)
    try:
        rot = normalize(lower(parse(read_sql(args, "gen")), catalog))
    except ParseError as exc:
        emit({"error_class": "syntax", "message": str(exc)}, args.pretty)
        return 0
    except Exception as exc:
        emit({"error_class": "rot", "message": str(exc)}, args.pretty)
        return 0
    emit({"plan": rot.dump()}, args.pretty)
    return 0


def cmd_score(args) -> int:
    catalogs = load_catalogs(args.catalog)
    databases = load_databases(args.db) if args.scorer == "ex" else {}
    config = build_reward_config(args, catalogs, databases)
    score = outcome(read_sql(args, "gen"), read_sql(args, "ref"), config)
    emit({"score": score.value, "class": score.score_class}, args.pretty)
    return 0


def cmd_steps(args) -> int:
    catalogs = load_catalogs(args.catalog)
    catalog = pick_catalog(catalogs, args.schema)
    trace = step_rewards(read_sql(args, "gen"), read_sql(args, "ref"), catalog, args.alpha)
    emit(
        {
            "reference_node_count": trace.reference_node_count,
            "steps": [
                {
                    "index": s.index,
                    "matched": s.matched_count,
                    "cumulative": s.cumulative,
                    "increment": s.increment,
                    "end_token": s.end_token,
                    "error": s.error,
                }
                for s in trace.steps
            ],
            "total": trace.total,
        },
        args.pretty,
    )
    return 0


def cmd_reward(args) -> int:
    catalogs = load_catalogs(args.catalog)
    databases = load_databases(args.db) if args.scorer == "ex" else {}
    config = build_reward_config(args, catalogs, databases)
    gen_sql = read_sql(args, "gen")
    kl = json.loads(Path(args.kl).read_text()) if args.kl else None
    tokens = tokenize(gen_sql)
    trace = reward_trace(tokens, gen_sql, read_sql(args, "ref"), config, kl)
    emit(
        {
            "rewards": [float(x) for x in trace.rewards],
            "eos_index": trace.eos_index,
            "subquery_end_indices": trace.subquery_end_indices,
            "outcome": trace.outcome.value,
            "outcome_class": trace.outcome.score_class,
            "step_increments": trace.step_increments,
            "beta_kl": trace.beta_kl,
            "total": trace.total,
        },
        args.pretty,
    )
    return 0


def cmd_exec(args) -> int:
    databases = load_databases(args.db)
    catalogs = load_catalogs(args.catalog)
    schema = args.schema or (next(iter(databases)) if len(databases) == 1 else None)
    if schema not in databases:
        raise ConfigurationError(f"no database for schema {schema!r}")
    try:
        relation = execute(read_sql(args, "gen"), databases[schema], catalogs.get(schema))
    except ExecError as exc:
        emit({"error_class": exc.error_class, "message": exc.message}, args.pretty)
        return 0
    emit(
        {"columns": relation.columns, "rows": [list(r) for r in relation.rows], "ordered": relation.ordered},
        args.pretty,
    )
    return 0


def cmd_gen_pairs(args) -> int:
    catalogs = load_catalogs(args.catalog)
    databases = load_databases(args.db)
    seeds = load_seeds(args.seeds) if args.seeds else _corpus_seeds()
    if args.diversify_factor > 0:
        seeds = diversify_seeds(
            seeds, args.diversify_factor, args.seed, databases=databases, catalogs=catalogs
        )
    mix = json.loads(args.mix) if args.mix else None
    pairs = build_dataset(seeds, catalogs, mix=mix, n=args.n, rng_seed=args.seed, databases=databases)
    write_pairs(pairs, args.out)
    labels = [p.label for p in pairs]
    emit(
        {
            "written": len(pairs),
            "equivalent": sum(labels),
            "non_equivalent": len(labels) - sum(labels),
            "out": str(args.out),
        },
        args.pretty,
    )
    return 0


def _corpus_seeds() -> list[Seed]:
    seeds = []
    with open(data_path() / "corpus" / "statements.jsonl", "r", encoding="utf-8") as handle:
        for line in handle:
            raw = json.loads(line)
            seeds.append(Seed(raw["schema_id"], raw["sql"]))
    return seeds


def _load_pair_files(paths) -> list:
    pairs = []
    for path in paths:
        result: IngestResult = ingest(path)
        pairs.extend(result.pairs)
    return pairs


def _encode_pairs(pairs, catalogs, cache):
    encoded = []
    kept = []
    for pair in pairs:
        try:
            graphs = []
            for sql in (pair.reference_sql, pair.candidate_sql):
                key = (pair.schema_id, sql)
                if key not in cache:
                    cache[key] = rot_as_graph(normalize(lower(parse(sql), catalogs[pair.schema_id])))
                graphs.append(cache[key])
            encoded.append((graphs[0], graphs[1], pair.label))
            kept.append(pair)
        except Exception:
            continue  # unlowerable pairs cannot train the model
    return encoded, kept


def cmd_train(args) -> int:
    catalogs = load_catalogs(args.catalog)
    pairs = _load_pair_files(args.pairs)
    train_pairs, heldout_pairs = schema_split(pairs, args.holdout_fraction, args.split_seed)
    cache: dict = {}
    encoded_train, _ = _encode_pairs(train_pairs, catalogs, cache)
    encoded_heldout, _ = _encode_pairs(heldout_pairs, catalogs, cache)
    model = init_model(seed=args.seed, precision=args.precision)
    config = TrainConfig(
        learning_rate=args.lr,
        batch_size=args.batch_size,
        epochs=args.epochs,
        seed=args.seed,
        precision=args.precision,
    )
    started = time.perf_counter()
    model, history = train(model, encoded_train, config, val_pairs=encoded_heldout or None)
    elapsed = time.perf_counter() - started
    save_checkpoint_file(model, args.out)
    emit(
        {
            "checkpoint": str(args.out),
            "parameters": model.parameter_count(),
            "train_pairs": len(encoded_train),
            "heldout_pairs": len(encoded_heldout),
            "seconds": elapsed,
            "diverged": history.diverged,
            "history": history.as_dicts(),
        },
        args.pretty,
    )
    return 0


def _scorer_scores(scorer, pairs, catalogs, model, alpha, beta_f):
    """Scores with the outcome-map error grades, usable for ranking."""
    if scorer == "gmn":
        cache: dict = {}
        encoded, kept = _encode_pairs(pairs, catalogs, cache)
        sims = batch_similarities(model, [(a, b) for a, b, _ in encoded])
        by_pair = {id(p): max(0.0, float(s) + 1.0) for p, s in zip(kept, sims)}
        return [by_pair.get(id(p), -0.6) for p in pairs]
    scores = []
    for pair in pairs:
        try:
            if scorer == "relpm":
                scores.append(
                    relpm(pair.candidate_sql, pair.reference_sql, catalogs[pair.schema_id], alpha, beta_f)
                )
            else:
                scores.append(astpm(pair.candidate_sql, pair.reference_sql, alpha, beta_f))
        except MatchError as exc:
            scores.append(-1.0 if exc.error_class == "syntax" else -0.6)
    return scores


def cmd_eval_auc(args) -> int:
    catalogs = load_catalogs(args.catalog)
    pairs = _load_pair_files(args.pairs)
    if args.heldout_only:
        _, pairs = schema_split(pairs, args.holdout_fraction, args.split_seed)
    model = load_checkpoint_file(args.checkpoint) if args.scorer == "gmn" else None
    scores = _scorer_scores(args.scorer, pairs, catalogs, model, args.alpha, args.beta_f)
    value = auc_from_scores(scores, [p.label for p in pairs])
    emit({"auc": value, "pairs": len(pairs), "scorer": args.scorer}, args.pretty)
    return 0


def cmd_serve(args) -> int:
    catalogs = load_catalogs(args.catalog)
    databases = load_databases(args.db) if args.db else {}
    model = load_checkpoint_file(args.checkpoint) if args.checkpoint else None
    service = ScoreService(
        catalogs,
        databases,
        model,
        alpha=args.alpha,
        beta_f=args.beta_f,
        beta_kl=args.beta_kl,
        workers=args.workers,
    )
    if args.port:
        server = serve_tcp(service, args.host, args.port)
        print(json.dumps({"listening": {"host": args.host, "port": server.server_address[1]}}), flush=True)
        try:
            server.serve_forever()
        except KeyboardInterrupt:
            pass
        finally:
            server.server_close()
        return 0
    serve_stdio(service)
    return 0


def cmd_bench(args) -> int:
    if args.kernels:
        emit({"kernels": bench_kernels()}, args.pretty)
        return 0
    catalogs = load_catalogs(args.catalog)
    databases = load_databases(args.db) if args.db else {}
    pairs = _load_pair_files(args.pairs)[: args.n]
    if not pairs:
        raise ConfigurationError("no pairs to benchmark")
    model = load_checkpoint_file(args.checkpoint) if args.scorer == "gmn" else None

    def score_one(pair):
        config = RewardConfig(
            scorer=args.scorer,
            alpha=args.alpha,
            beta_f=args.beta_f,
            catalog=catalogs.get(pair.schema_id),
            model=model,
            database=databases.get(pair.schema_id),
        )
        return outcome(pair.candidate_sql, pair.reference_sql, config)

    score_one(pairs[0])  # warm caches and JIT before timing
    started = time.perf_counter()
    for pair in pairs:
        score_one(pair)
    elapsed = time.perf_counter() - started
    emit(
        {
            "scorer": args.scorer,
            "pairs": len(pairs),
            "seconds_total": elapsed,
            "seconds_per_sample": elapsed / len(pairs),
        },
        args.pretty,
    )
    return 0


# -- argument wiring -------------------------------------------------------------


def add_common(sub, *, catalog=True, db=False, scorer=False):
    sub.add_argument("--pretty", action="store_true", help="indent JSON output")
    if catalog:
        sub.add_argument("--catalog", default=str(data_path() / "schemas"), help="catalog file or directory")
        sub.add_argument("--schema", default=None, help="schema id")
    if db:
        sub.add_argument("--db", default=str(data_path() / "databases"), help="database file or directory")
    if scorer:
        sub.add_argument("--scorer", choices=("gmn", "relpm", "astpm", "ex"), default="relpm")
        sub.add_argument("--alpha", type=float, default=DEFAULT_ALPHA)
        sub.add_argument("--beta-f", dest="beta_f", type=float, default=DEFAULT_BETA)
        sub.add_argument("--beta-kl", dest="beta_kl", type=float, default=DEFAULT_BETA_KL)
        sub.add_argument("--checkpoint", default=None, help="model checkpoint (gmn scorer)")


def add_sql_inputs(sub, ref=True):
    sub.add_argument("--gen", default=None, help="file holding the generated SQL")
    sub.add_argument("--gen-sql", dest="gen_sql", default=None, help="generated SQL text")
    if ref:
        sub.add_argument("--ref", default=None, help="file holding the reference SQL")
        sub.add_argument("--ref-sql", dest="ref_sql", default=None, help="reference SQL text")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rotreward", description=__doc__)
    commands = parser.add_subparsers(dest="command", required=True)

    p = commands.add_parser("parse", help="parse SQL and dump the syntax tree")
    add_common(p, catalog=False)
    add_sql_inputs(p, ref=False)
    p.set_defaults(func=cmd_parse)

    p = commands.add_parser("plan", help="lower + normalize SQL and dump the plan graph")
    add_common(p)
    add_sql_inputs(p, ref=False)
    p.set_defaults(func=cmd_plan)

    p = commands.add_parser("score", help="outcome score for one generated/reference pair")
    add_common(p, db=True, scorer=True)
    add_sql_inputs(p)
    p.set_defaults(func=cmd_score)

    p = commands.add_parser("steps", help="stepwise coverage trace over CTE subqueries")
    add_common(p)
    add_sql_inputs(p)
    p.add_argument("--alpha", type=float, default=DEFAULT_ALPHA)
    p.set_defaults(func=cmd_steps)

    p = commands.add_parser("reward", help="full per-token reward trace")
    add_common(p, db=True, scorer=True)
    add_sql_inputs(p)
    p.add_argument("--kl", default=None, help="JSON file with a per-token KL vector")
    p.add_argument("--stepwise", action="store_true")
    p.set_defaults(func=cmd_reward)

    p = commands.add_parser("exec", help="run SQL on a toy database")
    add_common(p, db=True)
    add_sql_inputs(p, ref=False)
    p.set_defaults(func=cmd_exec)

    p = commands.add_parser("gen-pairs", help="build a labeled pair dataset")
    add_common(p, db=True)
    p.add_argument("--seeds", default=None, help="seed JSONL (defaults to the bundled corpus)")
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mix", default=None, help="JSON object of strategy proportions")
    p.add_argument("--diversify-factor", type=int, default=40)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen_pairs)

    p = commands.add_parser("train", help="train the graph matching model")
    add_common(p)
    p.add_argument("--pairs", nargs="+", required=True, help="pair JSONL file(s)")
    p.add_argument("--out", required=True, help="checkpoint output path")
    p.add_argument("--epochs", type=int, default=12)
    p.add_argument("--batch-size", dest="batch_size", type=int, default=16)
    p.add_argument("--lr", type=float, default=1e-3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--precision", choices=("float32", "float64"), default="float64")
    p.add_argument("--holdout-fraction", dest="holdout_fraction", type=float, default=0.25)
    p.add_argument("--split-seed", dest="split_seed", type=int, default=0)
    p.set_defaults(func=cmd_train)

    p = commands.add_parser("eval-auc", help="ranking quality of a scorer over a pair set")
    add_common(p)
    p.add_argument("--pairs", nargs="+", required=True)
    p.add_argument("--scorer", choices=("gmn", "relpm", "astpm"), default="gmn")
    p.add_argument("--checkpoint", default=None)
    p.add_argument("--alpha", type=float, default=DEFAULT_ALPHA)
    p.add_argument("--beta-f", dest="beta_f", type=float, default=DEFAULT_BETA)
    p.add_argument("--heldout-only", dest="heldout_only", action="store_true")
    p.add_argument("--holdout-fraction", dest="holdout_fraction", type=float, default=0.25)
    p.add_argument("--split-seed", dest="split_seed", type=int, default=0)
    p.set_defaults(func=cmd_eval_auc)

    p = commands.add_parser("serve", help="NDJSON scoring service over stdio or TCP")
    add_common(p, db=True, scorer=True)
    p.add_argument("--port", type=int, default=0, help="TCP port (omit for stdio)")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--workers", type=int, default=4)
    p.set_defaults(func=cmd_serve)

    p = commands.add_parser("bench", help="scoring latency / kernel comparison")
    add_common(p, db=True, scorer=True)
    p.add_argument("--pairs", nargs="*", default=[])
    p.add_argument("--n", type=int, default=200)
    p.add_argument("--kernels", action="store_true", help="compare numba vs numpy kernels")
    p.set_defaults(func=cmd_bench)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigurationError as exc:
        print(json.dumps({"error": {"class": "configuration", "message": str(exc)}}), file=sys.stderr)
        return 1
    except MatchError as exc:
        print(
            json.dumps({"error": {"class": f"{exc.side}-{exc.error_class}", "message": exc.message}}),
            file=sys.stderr,
        )
        return 1


if __name__ == "__main__":
    sys.exit(main())
