"""FedAvg and FedAMP server logic, similarity coefficients and the baselines."""

import logging

import numpy as np
import pytest

from fedloc.config.config_models import FederationConfig, FederationStrategy, TrainingConfig
from fedloc.exceptions import (
    ContractViolationError,
    DivergenceError,
    InvalidStateError,
    ParameterError,
    RoundDivergenceError,
)
from fedloc.federation import server
from fedloc.federation.aggregation import ClientState, fedavg_aggregate, fedavg_weights
from fedloc.federation.history import FederationHistory
from fedloc.federation.server import (
    local_rng,
    run_fedamp,
    run_fedavg,
    run_federation,
    train_gm,
    train_lm,
)
from fedloc.federation.similarity import (
    SimilarityMatrix,
    amp_prox_centers,
    amp_similarity,
    get_kernel,
    pairwise_squared_distances,
)
from fedloc.models.mlp import LabeledBatch, flatten, init_params, squared_distance, train_local
from tests.helpers import scalar_params


def _batch(n: int, seed: int, flip: bool = False) -> LabeledBatch:
    rng = np.random.default_rng(seed)
    features = rng.uniform(0.0, 1.0, size=(n, 3))
    labels = (features[:, 0] > 0.5).astype(np.int64)
    return LabeledBatch(features, 1 - labels if flip else labels)


def _clients(sizes=(12, 20, 16), seed: int = 0, hidden=(4,)) -> list:
    start = init_params([3, *hidden, 2], seed=seed)
    return [ClientState(i, start, _batch(n, seed=100 + i)) for i, n in enumerate(sizes)]


def _config(**kwargs) -> FederationConfig:
    training = kwargs.pop(
        "training", TrainingConfig(learning_rate=0.1, epochs=2, batch_size=4, rng_seed=5)
    )
    return FederationConfig(training=training, **kwargs)


def _same(a, b) -> bool:
    return len(a) == len(b) and all(x.array_equal(y) for x, y in zip(a, b))


class TestFedAvgAggregate:
    def test_weighted_mean(self):
        dummy = _batch(1, 0)
        clients = [
            ClientState(i, scalar_params(v), LabeledBatch(np.repeat(dummy.features, n, axis=0), np.zeros(n, dtype=int)))
            for i, (v, n) in enumerate([(2.0, 1), (5.0, 2), (6.0, 3)])
        ]
        np.testing.assert_allclose(fedavg_weights(clients), [1 / 6, 2 / 6, 3 / 6])
        assert flatten(fedavg_aggregate(clients))[0] == pytest.approx(5.0, abs=1e-12)

    def test_matches_numpy_average(self):
        clients = [
            ClientState(i, init_params([3, 4, 2], seed=i), _batch(n, i))
            for i, n in enumerate([3, 9, 5, 1])
        ]
        expected = np.average(
            np.vstack([flatten(c.params) for c in clients]),
            axis=0,
            weights=[c.sample_count for c in clients],
        )
        np.testing.assert_allclose(flatten(fedavg_aggregate(clients)), expected, rtol=0, atol=1e-12)

    def test_input_order_does_not_matter(self):
        clients = [ClientState(i, init_params([3, 4, 2], seed=i), _batch(n, i)) for i, n in enumerate([3, 9, 5])]
        reference = flatten(fedavg_aggregate(clients)).tobytes()
        rng = np.random.default_rng(11)
        for _ in range(100):
            shuffled = [clients[i] for i in rng.permutation(len(clients))]
            assert flatten(fedavg_aggregate(shuffled)).tobytes() == reference

    def test_duplicate_ids(self):
        client = ClientState(0, scalar_params(1.0), _batch(2, 0))
        with pytest.raises(ContractViolationError):
            fedavg_aggregate([client, client])

    def test_mixed_architectures(self):
        with pytest.raises(ContractViolationError):
            fedavg_aggregate(
                [
                    ClientState(0, init_params([3, 2], seed=0), _batch(2, 0)),
                    ClientState(1, init_params([3, 4, 2], seed=0), _batch(2, 1)),
                ]
            )


class TestSimilarity:
    def test_two_clients(self):
        similarity = amp_similarity([scalar_params(0.0), scalar_params(1.0)], sigma=1.0, alpha=1.0)
        off = np.exp(-1.0)
        np.testing.assert_allclose(similarity.xi, [[1 - off, off], [off, 1 - off]], atol=1e-15)
        assert not similarity.clamped

    def test_rows_are_convex_and_symmetric(self):
        models = [init_params([3, 4, 2], seed=s) for s in range(5)]
        similarity = amp_similarity(models, sigma=5.0, alpha=0.5)
        np.testing.assert_allclose(similarity.xi.sum(axis=1), 1.0, atol=1e-12)
        assert np.all(similarity.xi >= 0)
        np.testing.assert_array_equal(similarity.xi, similarity.xi.T)

    def test_closer_models_get_more_weight(self):
        models = [scalar_params(0.0), scalar_params(0.5), scalar_params(3.0)]
        xi = amp_similarity(models, sigma=2.0, alpha=0.5).xi
        assert xi[0, 1] > xi[0, 2]

    def test_identical_models_unclamped(self):
        similarity = amp_similarity([scalar_params(1.0)] * 3, sigma=10.0, alpha=1.0)
        assert not similarity.clamped
        np.testing.assert_allclose(
            similarity.xi, [[0.8, 0.1, 0.1], [0.1, 0.8, 0.1], [0.1, 0.1, 0.8]], atol=1e-12
        )

    def test_alpha_is_clamped(self, caplog):
        models = [scalar_params(1.0)] * 3
        with caplog.at_level(logging.WARNING):
            similarity = amp_similarity(models, sigma=0.1, alpha=1.0)
        assert similarity.clamped
        assert similarity.alpha == pytest.approx(0.05)
        np.testing.assert_allclose(similarity.xi, [[0, 0.5, 0.5], [0.5, 0, 0.5], [0.5, 0.5, 0]], atol=1e-12)
        assert "clamped" in caplog.text

    def test_single_client(self):
        similarity = amp_similarity([scalar_params(3.0)], sigma=1.0, alpha=1.0)
        np.testing.assert_array_equal(similarity.xi, [[1.0]])

    def test_kernel(self):
        kernel = get_kernel("gaussian-saturating")
        v = np.array([0.0, 2.0, 50.0])
        np.testing.assert_allclose(kernel.value(v, 2.0), 1 - np.exp(-v / 2.0))
        np.testing.assert_allclose(kernel.derivative(v, 2.0), np.exp(-v / 2.0) / 2.0)
        with pytest.raises(ParameterError):
            get_kernel("cosine")

    def test_bad_parameters(self):
        with pytest.raises(ParameterError):
            amp_similarity([scalar_params(0.0)], sigma=0.0, alpha=1.0)

    def test_matrix_validation(self):
        with pytest.raises(InvalidStateError):
            SimilarityMatrix(np.array([[0.5, 0.6], [0.5, 0.5]]), alpha=1.0)

    def test_pairwise_distances(self):
        distances = pairwise_squared_distances([scalar_params(0.0), scalar_params(3.0), scalar_params(-1.0)])
        np.testing.assert_allclose(distances, [[0, 9, 1], [9, 0, 16], [1, 16, 0]])


class TestProxCenters:
    def test_convex_combination(self):
        similarity = SimilarityMatrix(np.array([[0.75, 0.25], [0.25, 0.75]]), alpha=1.0)
        centers = amp_prox_centers([scalar_params(0.0), scalar_params(4.0)], similarity)
        assert flatten(centers[0])[0] == pytest.approx(1.0)
        assert flatten(centers[1])[0] == pytest.approx(3.0)

    def test_identical_models_are_fixed_points(self):
        model = init_params([3, 5, 2], seed=8)
        models = [model] * 4
        centers = amp_prox_centers(models, amp_similarity(models, sigma=1.5, alpha=0.3))
        for center in centers:
            assert flatten(center).tobytes() == flatten(model).tobytes()

    def test_size_mismatch(self):
        with pytest.raises(ContractViolationError):
            amp_prox_centers([scalar_params(0.0)], SimilarityMatrix(np.eye(2), alpha=1.0))


class TestFedAmp:
    def test_no_prox_single_round_equals_local_models(self):
        clients = _clients()
        config = _config(rounds=1, lambda_tilde=0.0)
        assert _same(run_fedamp(clients, config), train_lm(clients, config))

    def test_no_prox_equals_chained_local_training(self):
        clients = _clients()
        config = _config(rounds=3, lambda_tilde=0.0, sigma=0.7)
        expected = []
        for client in clients:
            params = client.params
            for k in range(3):
                params = train_local(
                    params, client.data, config.training, rng=local_rng(5, client.client_id, k)
                )
            expected.append(params)
        assert _same(run_fedamp(clients, config), expected)

    def test_single_client_ignores_sigma(self):
        clients = _clients(sizes=(15,))
        narrow = run_fedamp(clients, _config(rounds=3, sigma=1.0, lambda_tilde=2.0))
        wide = run_fedamp(clients, _config(rounds=3, sigma=100.0, lambda_tilde=2.0))
        assert _same(narrow, wide)

    def test_strong_prox_pulls_clients_together(self):
        start = init_params([3, 2], seed=1)
        clients = [
            ClientState(0, start, _batch(30, 1)),
            ClientState(1, start, _batch(30, 2, flip=True)),
        ]
        training = TrainingConfig(learning_rate=0.05, epochs=2, mode="deterministic")
        free = run_fedamp(clients, _config(rounds=5, sigma=2.0, lambda_tilde=0.0, training=training))
        tied = run_fedamp(clients, _config(rounds=5, sigma=2.0, lambda_tilde=5.0, training=training))
        assert squared_distance(*tied) < squared_distance(*free)

    def test_history(self):
        clients = _clients()
        history = FederationHistory(strategy="FEDAMP")
        run_fedamp(clients, _config(rounds=2, sigma=3.0), history)
        assert len(history.records) == 6
        assert history.rounds == 2
        frame = history.to_frame()
        assert list(frame.columns) == [
            "strategy", "round", "client_id", "local_loss", "prox_distance", "xi_0", "xi_1", "xi_2"
        ]
        np.testing.assert_allclose(frame[["xi_0", "xi_1", "xi_2"]].sum(axis=1), 1.0, atol=1e-12)
        assert frame["round"].tolist() == [1, 1, 1, 2, 2, 2]

    def test_threads_match_serial(self):
        clients = _clients()
        serial = run_fedamp(clients, _config(rounds=2, workers=1))
        threaded = run_fedamp(clients, _config(rounds=2, workers=3))
        assert _same(serial, threaded)

    def test_divergence_names_client_and_round(self, monkeypatch):
        real = server.train_local

        def failing(params, data, config, **kwargs):
            if data.size == 20:
                raise DivergenceError("Non-finite loss during epoch 2", epoch=2)
            return real(params, data, config, **kwargs)

        monkeypatch.setattr(server, "train_local", failing)
        with pytest.raises(RoundDivergenceError) as info:
            run_fedamp(_clients(), _config(rounds=2))
        assert (info.value.client_id, info.value.round_index, info.value.epoch) == (1, 1, 2)


class TestFedAvg:
    def test_single_client_is_chained_local_training(self):
        (client,) = _clients(sizes=(14,))
        config = _config(rounds=3)
        expected = client.params
        for k in range(3):
            expected = train_local(expected, client.data, config.training, rng=local_rng(5, 0, k))
        assert run_fedavg([client], config).array_equal(expected)

    def test_identical_clients_match_a_single_client(self):
        start = init_params([3, 4, 2], seed=2)
        data = _batch(10, 3)
        config = _config(rounds=3, training=TrainingConfig(learning_rate=0.2, epochs=2, mode="deterministic"))
        alone = run_fedavg([ClientState(0, start, data)], config)
        together = run_fedavg([ClientState(0, start, data), ClientState(1, start, data)], config)
        assert together.array_equal(alone)

    def test_one_round_averages_local_updates(self):
        clients = _clients(sizes=(6, 18))
        config = _config(rounds=1)
        local = train_lm(clients, config)
        expected = 0.25 * flatten(local[0]) + 0.75 * flatten(local[1])
        np.testing.assert_allclose(flatten(run_fedavg(clients, config)), expected, atol=1e-12)

    def test_threads_match_serial(self):
        clients = _clients()
        serial = run_fedavg(clients, _config(rounds=2, workers=1))
        threaded = run_fedavg(clients, _config(rounds=2, workers=4))
        assert serial.array_equal(threaded)


class TestRunFederation:
    def test_model_counts(self):
        clients = _clients()
        fedavg = run_federation(clients, _config(rounds=1, strategy=FederationStrategy.FEDAVG))
        fedamp = run_federation(clients, _config(rounds=1, strategy=FederationStrategy.FEDAMP))
        assert len(fedavg.models) == 1 and len(fedamp.models) == 3
        assert fedavg.history.strategy == "FEDAVG"
        assert len(fedamp.history.records) == 3


class TestBaselines:
    def test_global_model_is_local_model_of_one_client(self):
        (client,) = _clients(sizes=(20,))
        config = _config(rounds=2)
        assert train_gm(client.params, client.data, config).array_equal(train_lm([client], config)[0])

    def test_local_models_train_rounds_times_epochs(self):
        (client,) = _clients(sizes=(9,))
        config = _config(rounds=3)
        training = config.training.model_copy(update={"epochs": 6})
        expected = train_local(client.params, client.data, training, rng=local_rng(5, 0, 0))
        assert train_lm([client], config)[0].array_equal(expected)
