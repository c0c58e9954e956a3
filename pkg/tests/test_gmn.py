import numpy as np
import pytest

from oracles import naive_forward_pair, pairwise_auc
from rotreward.gmn import (
    CheckpointError,
    GmnHyperparams,
    NonFiniteError,
    TrainConfig,
    auc,
    auc_from_scores,
    forward_pair,
    grad,
    init_model,
    load_checkpoint,
    save_checkpoint,
    train,
)
from rotreward.gmn.model import BatchForward, PairForward
from rotreward.planner import lower, normalize, rot_as_graph
from rotreward.planner.encode import FEATURE_DIM, EncodedGraph
from rotreward.sqlfront import parse


def random_graph(rng, n_nodes, d_pos=16):
    features = np.zeros((n_nodes, FEATURE_DIM))
    features[np.arange(n_nodes), rng.integers(0, 20, n_nodes)] = 1.0
    features += 0.1 * rng.standard_normal((n_nodes, FEATURE_DIM))
    positions = rng.standard_normal((n_nodes, d_pos)) * 0.2
    edges = []
    for child in range(1, n_nodes):
        parent = int(rng.integers(0, child))
        edges.append((parent, child, 0))
        edges.append((child, parent, 1))
    src = np.array([e[0] for e in edges], dtype=np.int64)
    dst = np.array([e[1] for e in edges], dtype=np.int64)
    typ = np.array([e[2] for e in edges], dtype=np.int64)
    return EncodedGraph(features, positions, src, dst, typ)


def sql_graph(catalogs, schema, sql):
    return rot_as_graph(normalize(lower(parse(sql), catalogs[schema])))


@pytest.fixture(scope="module")
def graph_pair(catalogs):
    g1 = sql_graph(catalogs, "workshop", "SELECT name FROM technician WHERE age > 34")
    g2 = sql_graph(catalogs, "workshop", "SELECT name FROM technician WHERE age >= 34")
    return g1, g2


def test_identical_graphs_zero_similarity(graph_pair):
    model = init_model(0)
    g1, _ = graph_pair
    similarity, hg1, hg2 = forward_pair(model, g1, g1)
    assert abs(similarity) <= 1e-10
    assert np.allclose(hg1, hg2)


def test_similarity_symmetry(graph_pair):
    model = init_model(0)
    g1, g2 = graph_pair
    s12, _, _ = forward_pair(model, g1, g2)
    s21, _, _ = forward_pair(model, g2, g1)
    assert abs(s12 - s21) <= 1e-5
    assert s12 <= 0.0


def test_forward_matches_straight_line_reimplementation():
    rng = np.random.default_rng(0)
    model = init_model(0)
    g1 = random_graph(rng, 5)
    g2 = random_graph(rng, 5)
    fast, _, _ = forward_pair(model, g1, g2)
    naive = naive_forward_pair(model, g1, g2)
    assert fast == pytest.approx(naive, abs=1e-9)
    # and on SQL-derived graphs too
    assert fast < 0.0


def test_forward_matches_naive_on_sql_graphs(graph_pair):
    model = init_model(1)
    g1, g2 = graph_pair
    fast, _, _ = forward_pair(model, g1, g2)
    assert fast == pytest.approx(naive_forward_pair(model, g1, g2), abs=1e-9)


def test_permutation_invariance(graph_pair):
    model = init_model(0)
    g1, g2 = graph_pair
    base, _, _ = forward_pair(model, g1, g2)
    rng = np.random.default_rng(7)
    for _ in range(3):
        perm = rng.permutation(g1.num_nodes)
        shuffled = g1.permuted(perm)
        value, _, _ = forward_pair(model, shuffled, g2)
        assert abs(value - base) <= 1e-5


def test_batch_forward_matches_single(graph_pair, catalogs):
    model = init_model(0)
    g1, g2 = graph_pair
    g3 = sql_graph(catalogs, "music", "SELECT name FROM singer WHERE birth_year IN (1981, 1990)")
    batch = BatchForward(model, [(g1, g2), (g1, g1), (g3, g2)])
    singles = [forward_pair(model, a, b)[0] for a, b in [(g1, g2), (g1, g1), (g3, g2)]]
    assert np.allclose(batch.similarities.value, singles, atol=1e-9)


def test_gradient_matches_finite_differences_float64(graph_pair):
    model = init_model(0, precision="float64")
    g1, g2 = graph_pair
    _, grads = grad(model, g1, g2, label=1.0)
    rng = np.random.default_rng(0)
    names = sorted(model.params)
    step = 1e-5
    worst = 0.0
    for _ in range(80):
        name = names[rng.integers(len(names))]
        flat = model.params[name].reshape(-1)
        index = int(rng.integers(flat.size))
        original = flat[index]
        flat[index] = original + step
        up, _ = grad(model, g1, g2, label=1.0)
        flat[index] = original - step
        down, _ = grad(model, g1, g2, label=1.0)
        flat[index] = original
        numeric = (up - down) / (2 * step)
        analytic = grads[name].reshape(-1)[index]
        relative = abs(numeric - analytic) / max(1e-8, abs(numeric) + abs(analytic))
        worst = max(worst, relative)
    assert worst <= 1e-5


def test_gradient_matches_finite_differences_float32(graph_pair):
    # float32 analytic gradients, probed against central differences taken
    # on a float64 twin of the same parameters (a 1e-5 step is below the
    # float32 loss granularity, so the probe itself must be 64-bit)
    model32 = init_model(0, precision="float32")
    twin = init_model(0, precision="float64")
    for name in twin.params:
        twin.params[name] = model32.params[name].astype(np.float64)
    g1, g2 = graph_pair
    _, grads = grad(model32, g1, g2, label=1.0)
    rng = np.random.default_rng(1)
    names = sorted(model32.params)
    step = 1e-5
    worst = 0.0
    for _ in range(60):
        name = names[rng.integers(len(names))]
        flat = twin.params[name].reshape(-1)
        index = int(rng.integers(flat.size))
        original = flat[index]
        flat[index] = original + step
        up, _ = grad(twin, g1, g2, label=1.0)
        flat[index] = original - step
        down, _ = grad(twin, g1, g2, label=1.0)
        flat[index] = original
        numeric = (up - down) / (2 * step)
        analytic = float(grads[name].reshape(-1)[index])
        relative = abs(numeric - analytic) / max(1e-6, abs(numeric) + abs(analytic))
        worst = max(worst, relative)
    assert worst <= 1e-3


def test_degenerate_graph_finite_gradients():
    model = init_model(0)
    lonely = EncodedGraph(
        np.zeros((1, FEATURE_DIM)),
        np.zeros((1, 16)),
        np.zeros(0, dtype=np.int64),
        np.zeros(0, dtype=np.int64),
        np.zeros(0, dtype=np.int64),
    )
    _, grads = grad(model, lonely, lonely, label=1.0)
    for value in grads.values():
        assert np.isfinite(value).all()


def test_grad_detects_non_finite(graph_pair):
    model = init_model(0)
    model.params["embed.W"][0, 0] = np.nan
    g1, g2 = graph_pair
    with pytest.raises(NonFiniteError):
        grad(model, g1, g2, label=1.0)


def test_width_mismatch_rejected(graph_pair):
    model = init_model(0, hyperparams=GmnHyperparams(pos_dim=8))
    with pytest.raises(ValueError):
        forward_pair(model, *graph_pair)


# -- training -----------------------------------------------------------------


def make_toy_pairs(catalogs):
    ga = sql_graph(catalogs, "workshop", "SELECT name FROM technician WHERE age > 34")
    gb = sql_graph(catalogs, "workshop", "SELECT name FROM technician WHERE age >= 34")
    gc = sql_graph(catalogs, "music", "SELECT title FROM song")
    return [(ga, ga, 1), (ga, gb, 0), (gc, gc, 1), (gb, gc, 0)]


def test_training_loss_decreases(catalogs):
    pairs = make_toy_pairs(catalogs)
    model, history = train(init_model(0), pairs, TrainConfig(epochs=5, batch_size=4, seed=3))
    losses = [r.loss for r in history.records]
    assert len(losses) == 5
    assert all(b <= a + 1e-12 for a, b in zip(losses, losses[1:]))


def test_zero_epochs_bit_exact(catalogs):
    pairs = make_toy_pairs(catalogs)
    model = init_model(0)
    before = {k: v.copy() for k, v in model.params.items()}
    trained, history = train(model, pairs, TrainConfig(epochs=0))
    assert history.records == []
    for name in before:
        assert np.array_equal(before[name], trained.params[name])


def test_training_deterministic(catalogs):
    pairs = make_toy_pairs(catalogs)
    _, h1 = train(init_model(0), pairs, TrainConfig(epochs=3, seed=9))
    _, h2 = train(init_model(0), pairs, TrainConfig(epochs=3, seed=9))
    assert [r.loss for r in h1.records] == [r.loss for r in h2.records]


def test_training_divergence_restores_last_good(catalogs):
    pairs = make_toy_pairs(catalogs)
    model = init_model(0)
    model, _ = train(model, pairs, TrainConfig(epochs=2, seed=0))
    model.params["embed.W"][0, 0] = np.nan  # poison: the next loss is non-finite
    snapshot = {k: v.copy() for k, v in model.params.items()}
    model, history = train(model, pairs, TrainConfig(epochs=3, seed=0))
    assert history.diverged
    for name in snapshot:  # no partial Adam steps survive the abort
        assert np.array_equal(snapshot[name], model.params[name], equal_nan=True)


def test_training_requires_both_classes(catalogs):
    pairs = [p for p in make_toy_pairs(catalogs) if p[2] == 1]
    with pytest.raises(ValueError):
        train(init_model(0), pairs, TrainConfig(epochs=1))


# -- AUC ------------------------------------------------------------------------


def test_auc_perfect_separation():
    assert auc_from_scores([0.9, 0.8, 0.2, 0.1], [1, 1, 0, 0]) == 1.0


def test_auc_random_scores_near_half():
    rng = np.random.default_rng(0)
    scores = rng.standard_normal(4000)
    labels = rng.integers(0, 2, 4000)
    assert abs(auc_from_scores(scores, labels) - 0.5) < 0.03


def test_auc_hand_built_four_pairs():
    # 2 positives x 2 negatives: three clear wins plus one tie -> 3.5/4 = 0.875
    scores = [0.9, 0.4, 0.4, 0.1]
    labels = [1, 1, 0, 0]
    expected = pairwise_auc(scores, labels)
    assert expected == 0.875
    assert auc_from_scores(scores, labels) == pytest.approx(expected)


def test_auc_matches_brute_force_with_ties():
    rng = np.random.default_rng(5)
    scores = rng.integers(0, 4, 60).astype(float)
    labels = rng.integers(0, 2, 60)
    if labels.sum() in (0, len(labels)):
        labels[0] = 1 - labels[0]
    assert auc_from_scores(scores, labels) == pytest.approx(pairwise_auc(scores, labels))


def test_auc_single_class_rejected():
    with pytest.raises(ValueError):
        auc_from_scores([0.1, 0.2], [1, 1])


def test_auc_model_wrapper(catalogs):
    pairs = make_toy_pairs(catalogs)
    value = auc(init_model(0), pairs)
    assert 0.0 <= value <= 1.0


# -- checkpoints -----------------------------------------------------------------


def test_checkpoint_round_trip_bit_exact(graph_pair):
    model = init_model(0)
    g1, g2 = graph_pair
    before, _, _ = forward_pair(model, g1, g2)
    restored = load_checkpoint(save_checkpoint(model))
    after, _, _ = forward_pair(restored, g1, g2)
    assert before == after
    for name in model.params:
        assert np.array_equal(model.params[name], restored.params[name])


def test_checkpoint_truncated_tensor():
    model = init_model(0)
    import json

    raw = json.loads(save_checkpoint(model))
    raw["tensors"]["embed.W"]["data"] = raw["tensors"]["embed.W"]["data"][:-3]
    with pytest.raises(CheckpointError, match="embed.W"):
        load_checkpoint(json.dumps(raw))


def test_checkpoint_version_mismatch():
    model = init_model(0)
    import json

    raw = json.loads(save_checkpoint(model))
    raw["format_version"] = 99
    with pytest.raises(CheckpointError, match="version"):
        load_checkpoint(json.dumps(raw))


def test_checkpoint_cross_precision_is_an_error():
    model = init_model(0, precision="float64")
    document = save_checkpoint(model)
    with pytest.raises(CheckpointError, match="cast"):
        load_checkpoint(document, expected_precision="float32")


def test_checkpoint_float32_round_trip(graph_pair):
    model = init_model(0, precision="float32")
    g1, g2 = graph_pair
    before, _, _ = forward_pair(model, g1, g2)
    restored = load_checkpoint(save_checkpoint(model), expected_precision="float32")
    assert restored.precision == "float32"
    after, _, _ = forward_pair(restored, g1, g2)
    assert before == after
