"""Batch scoring service: one JSON request per line, one JSON response per
line, over stdio or TCP. Catalogs, databases, and the model are loaded once
at startup; requests name a schema id.

Per-pair scoring outcomes (including -1/-0.6 grades) are data and travel in
ok-responses; configuration problems (unknown schema, missing model, failing
reference SQL) come back as error responses. A malformed line never kills
the process.
"""
from __future__ import annotations

import json
import socketserver
import sys
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .executor import ConfigurationError, Database, ExecError, ex_reward, execute
from .gmn.model import GmnModel
from .matching import DEFAULT_ALPHA, DEFAULT_BETA
from .planner import Catalog, lower, normalize
from .reward import DEFAULT_BETA_KL, RewardConfig, outcome, reward_trace
from .sqlfront import ParseError, parse, tokenize
from .sqlfront.nodes import AstNode


def ast_dump(node: AstNode) -> dict:
    return {
        "kind": node.kind,
        "attrs": node.semantic_attrs(),
        "children": [ast_dump(c) for c in node.children],
    }


@dataclass
class ScoreService:
    catalogs: dict[str, Catalog]
    databases: dict[str, Database] = field(default_factory=dict)
    model: GmnModel | None = None
    alpha: float = DEFAULT_ALPHA
    beta_f: float = DEFAULT_BETA
    beta_kl: float = DEFAULT_BETA_KL
    workers: int = 4

    def catalog_for(self, request: dict) -> Catalog:
        schema_id = request.get("schema_id")
        if schema_id is None and len(self.catalogs) == 1:
            schema_id = next(iter(self.catalogs))
        if schema_id not in self.catalogs:
            raise ConfigurationError(f"unknown schema id {schema_id!r}")
        return self.catalogs[schema_id]

    def config_for(self, request: dict) -> RewardConfig:
        scorer = request.get("scorer", "relpm")
        schema_id = request.get("schema_id")
        catalog = self.catalog_for(request) if scorer != "astpm" else self.catalogs.get(schema_id)
        return RewardConfig(
            scorer=scorer,
            beta_kl=float(request.get("beta_kl", self.beta_kl)),
            stepwise=bool(request.get("stepwise", False)),
            alpha=float(request.get("alpha", self.alpha)),
            beta_f=float(request.get("beta_f", self.beta_f)),
            catalog=catalog,
            model=self.model,
            database=self.databases.get(schema_id),
        )

    # -- request handling --------------------------------------------------

    def handle(self, request: dict) -> dict:
        request_id = request.get("id")
        try:
            payload = self.dispatch(request)
            return {"id": request_id, "ok": True, "payload": payload}
        except (ConfigurationError, ValueError, KeyError) as exc:
            return {
                "id": request_id,
                "ok": False,
                "error": {"class": "configuration", "message": str(exc)},
            }

    def dispatch(self, request: dict) -> dict:
        op = request.get("op", "score")
        if op == "parse":
            try:
                ast = parse(request["gen_sql"])
            except ParseError as exc:
                return {"error_class": exc.error_class, "message": exc.message, "position": exc.position}
            return {"ast": ast_dump(ast.root)}
        if op == "plan":
            catalog = self.catalog_for(request)
            try:
                rot = normalize(lower(parse(request["gen_sql"]), catalog))
            except ParseError as exc:
                return {"error_class": "syntax", "message": str(exc)}
            except Exception as exc:  # RotError
                return {"error_class": "rot", "message": str(exc)}
            return {"plan": rot.dump()}
        if op == "score":
            config = self.config_for(request)
            score = outcome(request["gen_sql"], request["ref_sql"], config)
            return {"score": score.value, "class": score.score_class}
        if op == "reward_trace":
            config = self.config_for(request)
            tokens = tokenize(request["gen_sql"])
            kl = request.get("kl")
            trace = reward_trace(tokens, request["gen_sql"], request["ref_sql"], config, kl)
            return {
                "rewards": [float(x) for x in trace.rewards],
                "eos_index": trace.eos_index,
                "subquery_end_indices": trace.subquery_end_indices,
                "outcome": trace.outcome.value,
                "outcome_class": trace.outcome.score_class,
                "step_increments": trace.step_increments,
                "beta_kl": trace.beta_kl,
            }
        if op == "ex":
            schema_id = request.get("schema_id")
            database = self.databases.get(schema_id)
            if database is None:
                raise ConfigurationError(f"no database for schema id {schema_id!r}")
            graded = ex_reward(
                request["gen_sql"], request["ref_sql"], database, self.catalogs.get(schema_id)
            )
            return {"score": graded.grade, "class": "exec-graded", "detail": graded.detail}
        if op == "exec":
            schema_id = request.get("schema_id")
            database = self.databases.get(schema_id)
            if database is None:
                raise ConfigurationError(f"no database for schema id {schema_id!r}")
            try:
                relation = execute(request["gen_sql"], database, self.catalogs.get(schema_id))
            except ExecError as exc:
                return {"error_class": exc.error_class, "message": exc.message}
            return {"columns": relation.columns, "rows": [list(r) for r in relation.rows], "ordered": relation.ordered}
        raise ConfigurationError(f"unknown op {op!r}")

    def handle_line(self, line: str, synthetic_id: str) -> dict:
        try:
            request = json.loads(line)
            if not isinstance(request, dict):
                raise ValueError("request must be a JSON object")
        except ValueError as exc:
            return {
                "id": synthetic_id,
                "ok": False,
                "error": {"class": "malformed", "message": str(exc)},
            }
        return self.handle(request)


def serve_stream(service: ScoreService, reader, writer) -> int:
    """NDJSON loop over file-like handles; returns the response count.

    Responses may interleave across requests but each line is one complete
    document; the stream ends when the input does.
    """
    lock = threading.Lock()
    count = 0

    def emit(response: dict):
        nonlocal count
        data = json.dumps(response)
        with lock:
            writer.write(data + "\n")
            writer.flush()
            count += 1

    with ThreadPoolExecutor(max_workers=service.workers) as pool:
        pending = []
        for line_no, line in enumerate(reader, start=1):
            line = line.strip()
            if not line:
                continue
            pending.append(
                pool.submit(
                    lambda text=line, n=line_no: emit(service.handle_line(text, f"unparsed-{n}"))
                )
            )
        for future in pending:
            future.result()
    return count


def serve_stdio(service: ScoreService) -> int:
    return serve_stream(service, sys.stdin, sys.stdout)


def serve_tcp(service: ScoreService, host: str, port: int):
    """Blocking TCP server; one NDJSON conversation per connection."""

    class Handler(socketserver.StreamRequestHandler):
        def handle(self):
            reader = (raw.decode("utf-8") for raw in self.rfile)

            class _Writer:
                def __init__(self, wfile):
                    self.wfile = wfile

                def write(self, text):
                    self.wfile.write(text.encode("utf-8"))

                def flush(self):
                    self.wfile.flush()

            try:
                serve_stream(service, reader, _Writer(self.wfile))
            except (BrokenPipeError, ConnectionResetError):
                pass

    class Server(socketserver.ThreadingTCPServer):
        allow_reuse_address = True
        daemon_threads = True

    return Server((host, port), Handler)
