"""Outcome and per-token rewards.

The outcome map grades generated SQL as -1 (does not parse), -0.6 (parses
but does not lower to a plan), else a scorer value; the per-token trace
places the outcome at the end-of-sequence token, stepwise increments at
subquery-close tokens, and a KL penalty everywhere. When the final
subquery closes on the eos token both rewards land there with a single KL
term.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .executor import ConfigurationError, Database, ex_reward
from .gmn.model import GmnModel, forward_pair
from .matching import DEFAULT_ALPHA, DEFAULT_BETA, MatchError, astpm, relpm
from .planner import Catalog, lower, normalize, rot_as_graph
from .planner.rot import RotError
from .sqlfront import ParseError, Token, parse, tokenize
from .steprtm import StepTrace, step_rewards

DEFAULT_BETA_KL = 0.05
SCORERS = ("gmn", "relpm", "astpm", "ex")


@dataclass(frozen=True)
class OutcomeScore:
    value: float
    score_class: str  # "ok" | "syntax-error" | "rot-error" | "exec-graded"


@dataclass
class RewardConfig:
    scorer: str = "relpm"
    beta_kl: float = DEFAULT_BETA_KL
    stepwise: bool = False
    alpha: float = DEFAULT_ALPHA
    beta_f: float = DEFAULT_BETA
    catalog: Catalog | None = None
    model: GmnModel | None = None
    database: Database | None = None

    def __post_init__(self):
        if self.scorer not in SCORERS:
            raise ConfigurationError(f"unknown scorer {self.scorer!r}")
        if self.beta_kl < 0:
            raise ConfigurationError("beta_kl must be non-negative")
        if self.scorer == "gmn" and self.model is None:
            raise ConfigurationError("the gmn scorer needs a model checkpoint")
        if self.scorer == "ex" and self.database is None:
            raise ConfigurationError("the ex scorer needs a database")
        if self.scorer in ("gmn", "relpm", "ex") and self.catalog is None:
            raise ConfigurationError(f"the {self.scorer} scorer needs a catalog")
        if self.stepwise and self.catalog is None:
            raise ConfigurationError("stepwise rewards need a catalog")


def _plan_graph(sql: str, catalog: Catalog):
    return rot_as_graph(normalize(lower(parse(sql), catalog)))


def gmnscore(gen_sql: str, ref_sql: str, catalog: Catalog, model: GmnModel) -> OutcomeScore:
    """Graded similarity: -1 on syntax error, -0.6 on plan error, else the
    shifted-and-rectified model similarity in [0, 1]."""
    try:
        ref_graph = _plan_graph(ref_sql, catalog)
    except (ParseError, RotError) as exc:
        raise ConfigurationError(f"reference SQL does not lower: {exc}") from exc
    try:
        ast = parse(gen_sql)
    except ParseError:
        return OutcomeScore(-1.0, "syntax-error")
    try:
        gen_graph = rot_as_graph(normalize(lower(ast, catalog)))
    except RotError:
        return OutcomeScore(-0.6, "rot-error")
    similarity, _, _ = forward_pair(model, gen_graph, ref_graph)
    return OutcomeScore(max(0.0, similarity + 1.0), "ok")


def outcome(gen_sql: str, ref_sql: str, config: RewardConfig) -> OutcomeScore:
    """Dispatch to the configured outcome scorer.

    Matching scorers carry the same -1/-0.6 error grades around their [0,1]
    score; astpm has no plan stage, so no -0.6 branch exists for it.
    """
    if config.scorer == "gmn":
        return gmnscore(gen_sql, ref_sql, config.catalog, config.model)
    if config.scorer == "ex":
        graded = ex_reward(gen_sql, ref_sql, config.database, config.catalog)
        return OutcomeScore(graded.grade, "exec-graded")
    try:
        if config.scorer == "relpm":
            value = relpm(gen_sql, ref_sql, config.catalog, config.alpha, config.beta_f)
        else:
            value = astpm(gen_sql, ref_sql, config.alpha, config.beta_f)
    except MatchError as exc:
        if exc.side == "reference":
            raise ConfigurationError(f"reference SQL failed: {exc}") from exc
        if exc.error_class == "syntax":
            return OutcomeScore(-1.0, "syntax-error")
        return OutcomeScore(-0.6, "rot-error")
    return OutcomeScore(value, "ok")


@dataclass
class RewardTrace:
    rewards: np.ndarray  # length T
    eos_index: int
    subquery_end_indices: list[int]
    outcome: OutcomeScore
    step_increments: list[float]
    step_trace: StepTrace | None
    beta_kl: float
    kl: np.ndarray

    @property
    def total(self) -> float:
        return float(self.rewards.sum())


def reward_trace(
    gen_tokens: list[Token],
    gen_sql: str,
    ref_sql: str,
    config: RewardConfig,
    kl=None,
) -> RewardTrace:
    """Per-token rewards for one generated statement."""
    try:
        expected = tokenize(gen_sql)
    except ParseError as exc:
        raise ConfigurationError(f"generated text does not tokenize: {exc}") from exc
    if [t.lexeme for t in gen_tokens] != [t.lexeme for t in expected]:
        raise ConfigurationError("token sequence does not match tokenize(gen_sql)")
    horizon = len(gen_tokens)
    if horizon == 0:
        raise ConfigurationError("empty token sequence")
    if kl is None:
        kl_vector = np.zeros(horizon)
    else:
        kl_vector = np.asarray(kl, dtype=np.float64)
        if kl_vector.shape != (horizon,):
            raise ConfigurationError(
                f"kl vector length {kl_vector.shape} does not match {horizon} tokens"
            )

    outcome_score = outcome(gen_sql, ref_sql, config)
    rewards = -config.beta_kl * kl_vector
    eos_index = horizon - 1
    rewards[eos_index] += outcome_score.value

    subquery_ends: list[int] = []
    increments: list[float] = []
    trace: StepTrace | None = None
    if config.stepwise:
        try:
            trace = step_rewards(gen_sql, ref_sql, config.catalog, config.alpha)
        except MatchError as exc:
            if exc.side == "reference":
                raise ConfigurationError(f"reference SQL failed: {exc}") from exc
            trace = None  # generated text does not parse: no step events
        if trace is not None:
            for step in trace.steps:
                subquery_ends.append(step.end_token)
                increments.append(step.increment)
                rewards[step.end_token] += step.increment
    return RewardTrace(
        rewards,
        eos_index,
        subquery_ends,
        outcome_score,
        increments,
        trace,
        config.beta_kl,
        kl_vector,
    )
