"""Graph matching network: joint encoding of a SQL plan pair.

Per propagation round, every node aggregates messages from its typed
neighborhood, attends over all nodes of the other graph (attention on
position-aware projections, scaled dot product), and updates through a
gated combine. A gated sum pools node states into graph embeddings whose
negative Euclidean distance is the similarity.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..planner.encode import EDGE_TYPE_COUNT, FEATURE_DIM, EncodedGraph
from . import autodiff as ad
from .autodiff import Tensor


@dataclass(frozen=True)
class GmnHyperparams:
    state_dim: int = 64  # node state width
    steps: int = 5  # propagation rounds
    pos_dim: int = 16
    edge_dim: int = 16
    hidden_dim: int = 64  # two-layer perceptron width
    feature_dim: int = FEATURE_DIM
    edge_types: int = EDGE_TYPE_COUNT

    def as_dict(self) -> dict:
        return {
            "state_dim": self.state_dim,
            "steps": self.steps,
            "pos_dim": self.pos_dim,
            "edge_dim": self.edge_dim,
            "hidden_dim": self.hidden_dim,
            "feature_dim": self.feature_dim,
            "edge_types": self.edge_types,
        }


@dataclass
class GmnModel:
    hyperparams: GmnHyperparams
    params: dict[str, np.ndarray]
    precision: str = "float64"  # "float64" | "float32"

    @property
    def dtype(self):
        return np.float64 if self.precision == "float64" else np.float32

    def parameter_count(self) -> int:
        return sum(int(np.prod(p.shape)) for p in self.params.values())

    def copy(self) -> "GmnModel":
        return GmnModel(self.hyperparams, {k: v.copy() for k, v in self.params.items()}, self.precision)


def _mlp_params(rng, name: str, d_in: int, d_hidden: int, d_out: int, out: dict):
    out[f"{name}.W1"] = rng.normal(0.0, np.sqrt(2.0 / (d_in + d_hidden)), (d_in, d_hidden))
    out[f"{name}.b1"] = np.zeros(d_hidden)
    out[f"{name}.W2"] = rng.normal(0.0, np.sqrt(2.0 / (d_hidden + d_out)), (d_hidden, d_out))
    out[f"{name}.b2"] = np.zeros(d_out)


def init_model(seed: int = 0, hyperparams: GmnHyperparams | None = None, precision: str = "float64") -> GmnModel:
    hp = hyperparams or GmnHyperparams()
    rng = np.random.default_rng(seed)
    params: dict[str, np.ndarray] = {}
    params["embed.W"] = rng.normal(0.0, np.sqrt(2.0 / (hp.feature_dim + hp.state_dim)), (hp.feature_dim, hp.state_dim))
    params["embed.b"] = np.zeros(hp.state_dim)
    params["edge.emb"] = rng.normal(0.0, 0.5, (hp.edge_types, hp.edge_dim))
    _mlp_params(rng, "inner", 2 * hp.state_dim + hp.edge_dim, hp.hidden_dim, hp.state_dim, params)
    _mlp_params(rng, "cross", hp.state_dim + hp.pos_dim, hp.hidden_dim, hp.state_dim, params)
    params["update.Wz"] = rng.normal(0.0, np.sqrt(1.0 / (3 * hp.state_dim)), (3 * hp.state_dim, hp.state_dim))
    params["update.bz"] = np.zeros(hp.state_dim)
    params["update.Wc"] = rng.normal(0.0, np.sqrt(1.0 / (3 * hp.state_dim)), (3 * hp.state_dim, hp.state_dim))
    params["update.bc"] = np.zeros(hp.state_dim)
    _mlp_params(rng, "readout.gate", hp.state_dim, hp.hidden_dim, hp.state_dim, params)
    _mlp_params(rng, "readout.node", hp.state_dim, hp.hidden_dim, hp.state_dim, params)
    _mlp_params(rng, "readout.out", hp.state_dim, hp.hidden_dim, hp.state_dim, params)
    params["calib.threshold"] = np.array(0.5)
    params["calib.log_scale"] = np.array(0.0)
    dtype = np.float64 if precision == "float64" else np.float32
    params = {k: v.astype(dtype) for k, v in params.items()}
    return GmnModel(hp, params, precision)


class PairForward:
    """One forward computation over a graph pair, holding the tape.

    Both graphs ride through the shared weights as one stacked node matrix
    (their edges do not touch); only the cross-attention block splits them.
    """

    def __init__(self, model: GmnModel, g1: EncodedGraph, g2: EncodedGraph):
        if g1.num_nodes == 0 or g2.num_nodes == 0:
            raise ValueError("graphs must be nonempty")
        hp = model.hyperparams
        if g1.features.shape[1] != hp.feature_dim or g1.positions.shape[1] != hp.pos_dim:
            raise ValueError("encoding width does not match the model hyperparameters")
        self.model = model
        self.hp = hp
        self.tensors = {name: Tensor(value, name=name) for name, value in model.params.items()}
        dtype = model.dtype
        self.n1 = g1.num_nodes
        self.n2 = g2.num_nodes
        self.n = self.n1 + self.n2
        self.x = Tensor(np.concatenate([g1.features, g2.features]).astype(dtype))
        self.p = Tensor(np.concatenate([g1.positions, g2.positions]).astype(dtype))
        self.edge_src = np.concatenate([g1.edge_src, g2.edge_src + self.n1])
        self.edge_dst = np.concatenate([g1.edge_dst, g2.edge_dst + self.n1])
        self.edge_type = np.concatenate([g1.edge_type, g2.edge_type])
        self.graph_of_node = np.concatenate(
            [np.zeros(self.n1, dtype=np.int64), np.ones(self.n2, dtype=np.int64)]
        )
        self.similarity, self.hg1, self.hg2 = self._run()

    def _mlp(self, name: str, x: Tensor) -> Tensor:
        t = self.tensors
        hidden = ad.tanh(ad.affine(x, t[f"{name}.W1"], t[f"{name}.b1"]))
        return ad.affine(hidden, t[f"{name}.W2"], t[f"{name}.b2"])

    def _messages(self, h: Tensor) -> Tensor:
        t = self.tensors
        if len(self.edge_src) == 0:
            return Tensor(np.zeros((self.n, self.hp.state_dim), dtype=h.value.dtype))
        h_dst = ad.gather_rows(h, self.edge_dst)
        h_src = ad.gather_rows(h, self.edge_src)
        e = ad.gather_rows(t["edge.emb"], self.edge_type)
        per_edge = self._mlp("inner", ad.concat_cols([h_dst, h_src, e]))
        return ad.segment_sum(per_edge, self.edge_dst, self.n)

    def _run(self):
        t = self.tensors
        h = ad.affine(self.x, t["embed.W"], t["embed.b"])
        inv_sqrt_d = 1.0 / np.sqrt(self.hp.state_dim)
        for _ in range(self.hp.steps):
            m = self._messages(h)
            r = self._mlp("cross", ad.concat_cols([h, self.p]))
            r1 = ad.slice_rows(r, 0, self.n1)
            r2 = ad.slice_rows(r, self.n1, self.n)
            scores = ad.scale(ad.matmul(r1, ad.transpose(r2)), inv_sqrt_d)
            attention_1to2 = ad.row_softmax(scores)
            attention_2to1 = ad.row_softmax(ad.transpose(scores))
            mu1 = ad.sub(r1, ad.matmul(attention_1to2, r2))
            mu2 = ad.sub(r2, ad.matmul(attention_2to1, r1))
            mu = ad.concat_rows([mu1, mu2])
            cat = ad.concat_cols([h, m, mu])
            z = ad.sigmoid(ad.affine(cat, t["update.Wz"], t["update.bz"]))
            candidate = ad.tanh(ad.affine(cat, t["update.Wc"], t["update.bc"]))
            h = ad.add(h, ad.mul(z, ad.sub(candidate, h)))
        gates = ad.sigmoid(self._mlp("readout.gate", h))
        values = self._mlp("readout.node", h)
        pooled = ad.segment_sum(ad.mul(gates, values), self.graph_of_node, 2)
        graph_embeddings = self._mlp("readout.out", pooled)
        hg1 = ad.slice_rows(graph_embeddings, 0, 1)
        hg2 = ad.slice_rows(graph_embeddings, 1, 2)
        distance = ad.euclidean_distance(hg1, hg2)
        return ad.scale(distance, -1.0), hg1, hg2

    def loss(self, label: float, variant: str = "bce") -> Tensor:
        if variant == "similarity":
            return self.similarity
        if variant != "bce":
            raise ValueError(f"unknown loss variant {variant!r}")
        t = self.tensors
        scale_inv = ad.exp(ad.scale(t["calib.log_scale"], -1.0))
        logits = ad.mul(ad.add(t["calib.threshold"], self.similarity), scale_inv)
        return ad.bce_with_logits(logits, float(label))

    def parameter_grads(self) -> dict[str, np.ndarray]:
        grads = {}
        for name, tensor in self.tensors.items():
            grads[name] = (
                tensor.grad
                if tensor.grad is not None
                else np.zeros_like(tensor.value)
            )
        return grads


def forward_pair(model: GmnModel, g1: EncodedGraph, g2: EncodedGraph):
    """Similarity (negative distance, <= 0) plus both graph embeddings."""
    with ad.no_grad():
        run = PairForward(model, g1, g2)
    return float(run.similarity.value), run.hg1.value[0].copy(), run.hg2.value[0].copy()


class BatchForward:
    """Joint forward over many pairs: one stacked node matrix; cross-attention
    runs over the flat list of within-pair node combinations with a
    segment-wise softmax. Equations match PairForward exactly; this only
    amortizes per-op overhead across the batch."""

    def __init__(self, model: GmnModel, pair_graphs: list[tuple[EncodedGraph, EncodedGraph]]):
        if not pair_graphs:
            raise ValueError("empty batch")
        hp = model.hyperparams
        self.model = model
        self.hp = hp
        self.tensors = {name: Tensor(value, name=name) for name, value in model.params.items()}
        dtype = model.dtype

        features, positions, srcs, dsts, types = [], [], [], [], []
        graph_of_node, side1_index, side2_index = [], [], []
        flat_a_parts, flat_b_parts = [], []
        offset = 0
        for b, (g1, g2) in enumerate(pair_graphs):
            if g1.num_nodes == 0 or g2.num_nodes == 0:
                raise ValueError("graphs must be nonempty")
            starts = []
            for side, graph in enumerate((g1, g2)):
                features.append(graph.features)
                positions.append(graph.positions)
                srcs.append(graph.edge_src + offset)
                dsts.append(graph.edge_dst + offset)
                types.append(graph.edge_type)
                graph_of_node.append(np.full(graph.num_nodes, 2 * b + side, dtype=np.int64))
                index = np.arange(offset, offset + graph.num_nodes, dtype=np.int64)
                (side1_index if side == 0 else side2_index).append(index)
                starts.append(offset)
                offset += graph.num_nodes
            n1, n2 = g1.num_nodes, g2.num_nodes
            a_block = np.repeat(np.arange(starts[0], starts[0] + n1, dtype=np.int64), n2)
            b_block = np.tile(np.arange(starts[1], starts[1] + n2, dtype=np.int64), n1)
            flat_a_parts.append(a_block)
            flat_b_parts.append(b_block)

        self.n = offset
        self.batch = len(pair_graphs)
        self.x = Tensor(np.concatenate(features).astype(dtype))
        self.p = Tensor(np.concatenate(positions).astype(dtype))
        self.edge_src = np.concatenate(srcs)
        self.edge_dst = np.concatenate(dsts)
        self.edge_type = np.concatenate(types)
        self.graph_of_node = np.concatenate(graph_of_node)
        self.idx1 = np.concatenate(side1_index)
        self.idx2 = np.concatenate(side2_index)
        perm = np.concatenate([self.idx1, self.idx2])
        self.unperm = np.empty_like(perm)
        self.unperm[perm] = np.arange(len(perm), dtype=np.int64)

        # flat candidate list: direction 1 is contiguous by side-1 node
        flat_a = np.concatenate(flat_a_parts)
        flat_b = np.concatenate(flat_b_parts)
        rank1 = {int(g): i for i, g in enumerate(self.idx1)}
        rank2 = {int(g): i for i, g in enumerate(self.idx2)}
        self.seg1 = np.array([rank1[int(g)] for g in flat_a], dtype=np.int64)
        seg2_unsorted = np.array([rank2[int(g)] for g in flat_b], dtype=np.int64)
        self.offsets1 = np.flatnonzero(np.diff(self.seg1, prepend=-1))
        self.order2 = np.argsort(seg2_unsorted, kind="stable")
        self.seg2 = seg2_unsorted[self.order2]
        self.offsets2 = np.flatnonzero(np.diff(self.seg2, prepend=-1))
        self.flat_a = flat_a
        self.flat_b = flat_b
        self.flat_a_sorted = flat_a[self.order2]

        self.similarities, self.embeddings = self._run()

    def _mlp(self, name: str, x: Tensor) -> Tensor:
        t = self.tensors
        hidden = ad.tanh(ad.affine(x, t[f"{name}.W1"], t[f"{name}.b1"]))
        return ad.affine(hidden, t[f"{name}.W2"], t[f"{name}.b2"])

    def _run(self):
        t = self.tensors
        h = ad.affine(self.x, t["embed.W"], t["embed.b"])
        inv_sqrt_d = 1.0 / np.sqrt(self.hp.state_dim)
        for _ in range(self.hp.steps):
            if len(self.edge_src):
                h_dst = ad.gather_rows(h, self.edge_dst)
                h_src = ad.gather_rows(h, self.edge_src)
                e = ad.gather_rows(t["edge.emb"], self.edge_type)
                per_edge = self._mlp("inner", ad.concat_cols([h_dst, h_src, e]))
                m = ad.segment_sum(per_edge, self.edge_dst, self.n)
            else:
                m = Tensor(np.zeros((self.n, self.hp.state_dim), dtype=h.value.dtype))
            r = self._mlp("cross", ad.concat_cols([h, self.p]))
            ra = ad.gather_rows(r, self.flat_a)
            rb = ad.gather_rows(r, self.flat_b)
            scores = ad.scale(ad.row_dot(ra, rb), inv_sqrt_d)
            attention1 = ad.segment_softmax_contiguous(scores, self.offsets1, self.seg1)
            context1 = ad.segment_sum(ad.mul(ad.as_column(attention1), rb), self.seg1, len(self.idx1))
            mu1 = ad.sub(ad.gather_rows(r, self.idx1), context1)
            scores2 = ad.gather_rows(scores, self.order2)
            attention2 = ad.segment_softmax_contiguous(scores2, self.offsets2, self.seg2)
            ra_sorted = ad.gather_rows(r, self.flat_a_sorted)
            context2 = ad.segment_sum(ad.mul(ad.as_column(attention2), ra_sorted), self.seg2, len(self.idx2))
            mu2 = ad.sub(ad.gather_rows(r, self.idx2), context2)
            mu = ad.gather_rows(ad.concat_rows([mu1, mu2]), self.unperm)
            cat = ad.concat_cols([h, m, mu])
            z = ad.sigmoid(ad.affine(cat, t["update.Wz"], t["update.bz"]))
            candidate = ad.tanh(ad.affine(cat, t["update.Wc"], t["update.bc"]))
            h = ad.add(h, ad.mul(z, ad.sub(candidate, h)))
        gates = ad.sigmoid(self._mlp("readout.gate", h))
        values = self._mlp("readout.node", h)
        pooled = ad.segment_sum(ad.mul(gates, values), self.graph_of_node, 2 * self.batch)
        embeddings = self._mlp("readout.out", pooled)
        similarities = ad.scale(ad.paired_row_distances(embeddings), -1.0)
        return similarities, embeddings

    def loss(self, labels: np.ndarray, variant: str = "bce") -> Tensor:
        if variant != "bce":
            raise ValueError(f"unknown loss variant {variant!r} for batches")
        t = self.tensors
        scale_inv = ad.exp(ad.scale(t["calib.log_scale"], -1.0))
        logits = ad.mul(ad.add(t["calib.threshold"], self.similarities), scale_inv)
        per_pair = ad.bce_with_logits(logits, labels.astype(self.model.dtype))
        return ad.scale(ad.sum_all(per_pair), 1.0 / self.batch)

    def parameter_grads(self) -> dict[str, np.ndarray]:
        return {
            name: (tensor.grad if tensor.grad is not None else np.zeros_like(tensor.value))
            for name, tensor in self.tensors.items()
        }
