"""Graph matching network over encoded plan pairs."""
from .checkpoint import CheckpointError, load_checkpoint, load_checkpoint_file, save_checkpoint, save_checkpoint_file
from .kernels import USING_NUMBA, bench_kernels
from .model import GmnHyperparams, GmnModel, forward_pair, init_model
from .train import NonFiniteError, TrainConfig, TrainHistory, auc, auc_from_scores, grad, train

__all__ = [
    "CheckpointError",
    "GmnHyperparams",
    "GmnModel",
    "NonFiniteError",
    "TrainConfig",
    "TrainHistory",
    "USING_NUMBA",
    "auc",
    "auc_from_scores",
    "bench_kernels",
    "forward_pair",
    "grad",
    "init_model",
    "load_checkpoint",
    "load_checkpoint_file",
    "save_checkpoint",
    "save_checkpoint_file",
    "train",
]
