"""Versioned JSON checkpoints with exact float round-trips."""
from __future__ import annotations

import json

import numpy as np

from .model import GmnHyperparams, GmnModel

FORMAT_VERSION = 1


class CheckpointError(Exception):
    pass


def save_checkpoint(model: GmnModel) -> str:
    tensors = {}
    for name, value in sorted(model.params.items()):
        tensors[name] = {
            "shape": list(value.shape),
            "data": [float(x) for x in value.reshape(-1)],
        }
    document = {
        "format_version": FORMAT_VERSION,
        "precision": model.precision,
        "hyperparams": model.hyperparams.as_dict(),
        "tensors": tensors,
    }
    return json.dumps(document)


def save_checkpoint_file(model: GmnModel, path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(save_checkpoint(model))


def load_checkpoint(document: str, expected_precision: str | None = None) -> GmnModel:
    try:
        raw = json.loads(document)
    except json.JSONDecodeError as exc:
        raise CheckpointError(f"malformed checkpoint document: {exc}") from exc
    version = raw.get("format_version")
    if version != FORMAT_VERSION:
        raise CheckpointError(f"unsupported checkpoint format version {version!r}")
    precision = raw.get("precision")
    if precision not in ("float32", "float64"):
        raise CheckpointError(f"unknown precision {precision!r}")
    if expected_precision is not None and precision != expected_precision:
        raise CheckpointError(
            f"checkpoint precision {precision} does not match requested {expected_precision}; "
            "no implicit cast"
        )
    try:
        hyperparams = GmnHyperparams(**raw["hyperparams"])
    except (KeyError, TypeError) as exc:
        raise CheckpointError(f"bad hyperparameters block: {exc}") from exc
    dtype = np.float64 if precision == "float64" else np.float32
    params: dict[str, np.ndarray] = {}
    for name, spec in raw.get("tensors", {}).items():
        shape = tuple(spec.get("shape", ()))
        data = spec.get("data", [])
        expected = int(np.prod(shape)) if shape else 1
        if len(data) != expected:
            raise CheckpointError(
                f"tensor {name!r} has {len(data)} values, expected {expected}"
            )
        params[name] = np.asarray(data, dtype=dtype).reshape(shape)
    model = GmnModel(hyperparams, params, precision)
    return model


def load_checkpoint_file(path, expected_precision: str | None = None) -> GmnModel:
    with open(path, "r", encoding="utf-8") as handle:
        return load_checkpoint(handle.read(), expected_precision)
