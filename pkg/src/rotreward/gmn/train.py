"""Gradients, supervised training, and ranking evaluation for the GMN."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..planner.encode import EncodedGraph
from .model import BatchForward, GmnModel, PairForward


class NonFiniteError(Exception):
    def __init__(self, tensor_name: str):
        super().__init__(f"non-finite values in tensor {tensor_name!r}")
        self.tensor_name = tensor_name


@dataclass
class TrainConfig:
    learning_rate: float = 1e-3
    batch_size: int = 16
    epochs: int = 20
    seed: int = 0
    precision: str = "float64"
    loss: str = "bce"


def grad(
    model: GmnModel,
    g1: EncodedGraph,
    g2: EncodedGraph,
    label: float = 1.0,
    loss: str = "bce",
) -> tuple[float, dict[str, np.ndarray]]:
    """Reverse-mode gradients of the loss for every named parameter tensor."""
    run = PairForward(model, g1, g2)
    objective = run.loss(label, loss)
    if not np.isfinite(objective.value):
        raise NonFiniteError("loss")
    objective.backward()
    grads = run.parameter_grads()
    for name, value in grads.items():
        if not np.all(np.isfinite(value)):
            raise NonFiniteError(name)
    return float(objective.value), grads


class _Adam:
    """Adaptive moment estimation with bias correction."""

    def __init__(self, params: dict[str, np.ndarray], learning_rate: float):
        self.learning_rate = learning_rate
        self.beta1 = 0.9
        self.beta2 = 0.999
        self.eps = 1e-8
        self.step_count = 0
        self.m = {k: np.zeros_like(v) for k, v in params.items()}
        self.v = {k: np.zeros_like(v) for k, v in params.items()}

    def step(self, params: dict[str, np.ndarray], grads: dict[str, np.ndarray]):
        self.step_count += 1
        correction1 = 1.0 - self.beta1**self.step_count
        correction2 = 1.0 - self.beta2**self.step_count
        for name, p in params.items():
            g = grads[name]
            self.m[name] = self.beta1 * self.m[name] + (1.0 - self.beta1) * g
            self.v[name] = self.beta2 * self.v[name] + (1.0 - self.beta2) * g * g
            m_hat = self.m[name] / correction1
            v_hat = self.v[name] / correction2
            p -= (self.learning_rate * m_hat / (np.sqrt(v_hat) + self.eps)).astype(p.dtype)


@dataclass
class EpochRecord:
    epoch: int
    loss: float
    val_auc: float | None


@dataclass
class TrainHistory:
    records: list[EpochRecord] = field(default_factory=list)
    diverged: bool = False

    def as_dicts(self) -> list[dict]:
        return [
            {"epoch": r.epoch, "loss": r.loss, "val_auc": r.val_auc} for r in self.records
        ]


Pair = tuple[EncodedGraph, EncodedGraph, int]


def train(
    model: GmnModel,
    pairs: list[Pair],
    config: TrainConfig,
    val_pairs: list[Pair] | None = None,
) -> tuple[GmnModel, TrainHistory]:
    """Minimize calibrated-similarity BCE; deterministic under the config seed.

    On divergence (non-finite loss) the last epoch's parameters are restored.
    """
    labels = {label for _, _, label in pairs}
    if config.epochs > 0 and not labels.issuperset({0, 1}):
        raise ValueError("training needs at least one pair of each label")
    history = TrainHistory()
    if config.epochs == 0:
        return model, history
    rng = np.random.default_rng(config.seed)
    optimizer = _Adam(model.params, config.learning_rate)
    for epoch in range(config.epochs):
        snapshot = {k: v.copy() for k, v in model.params.items()}
        order = rng.permutation(len(pairs))
        losses: list[float] = []
        weights: list[int] = []
        diverged = False
        for start in range(0, len(order), config.batch_size):
            batch = order[start : start + config.batch_size]
            graphs = [(pairs[i][0], pairs[i][1]) for i in batch]
            labels = np.array([pairs[i][2] for i in batch], dtype=np.float64)
            run = BatchForward(model, graphs)
            objective = run.loss(labels, config.loss)
            if not np.isfinite(objective.value):
                diverged = True
                break
            objective.backward()
            optimizer.step(model.params, run.parameter_grads())
            losses.append(float(objective.value))
            weights.append(len(batch))
        mean_loss = float(np.average(losses, weights=weights)) if losses else float("nan")
        if diverged or not losses or not np.isfinite(mean_loss):
            model.params = snapshot
            history.diverged = True
            break
        val_auc = auc(model, val_pairs) if val_pairs else None
        history.records.append(EpochRecord(epoch, mean_loss, val_auc))
    return model, history


def auc_from_scores(scores, labels) -> float:
    """Rank-based AUC; ties contribute one half."""
    scores = np.asarray(scores, dtype=np.float64)
    labels = np.asarray(labels)
    positives = int((labels == 1).sum())
    negatives = int((labels == 0).sum())
    if positives == 0 or negatives == 0:
        raise ValueError("AUC needs both classes present")
    order = np.argsort(scores, kind="mergesort")
    ranks = np.empty(len(scores), dtype=np.float64)
    sorted_scores = scores[order]
    i = 0
    while i < len(scores):
        j = i
        while j + 1 < len(scores) and sorted_scores[j + 1] == sorted_scores[i]:
            j += 1
        average_rank = (i + j) / 2.0 + 1.0
        ranks[order[i : j + 1]] = average_rank
        i = j + 1
    positive_rank_sum = ranks[labels == 1].sum()
    return float((positive_rank_sum - positives * (positives + 1) / 2.0) / (positives * negatives))


def batch_similarities(model: GmnModel, graph_pairs, batch_size: int = 32) -> np.ndarray:
    """Similarities for many (g1, g2) pairs via the batched forward."""
    from . import autodiff as ad

    values: list[float] = []
    with ad.no_grad():
        for start in range(0, len(graph_pairs), batch_size):
            run = BatchForward(model, graph_pairs[start : start + batch_size])
            values.extend(float(v) for v in run.similarities.value)
    return np.asarray(values)


def auc(model: GmnModel, pairs: list[Pair]) -> float:
    scores = batch_similarities(model, [(g1, g2) for g1, g2, _ in pairs])
    labels = [label for _, _, label in pairs]
    return auc_from_scores(scores, labels)
