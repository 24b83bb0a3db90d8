"""Dirichlet label skew and the sample partitioner."""

import logging

import numpy as np
import pandas as pd
import pytest

from fedloc.config.config_models import GroupConfig, PartitionConfig
from fedloc.exceptions import CapacityError, ParameterError, SchemaError
from fedloc.partition import (
    ClientGroup,
    ClientLabelDistribution,
    GroupSpec,
    client_histogram_frame,
    concentration_vector,
    draw_client_distributions,
    export_manifest,
    largest_remainder,
    load_manifest,
    partition,
    sample_distribution,
)
from tests.helpers import labeled_pool


def _spec(n_clients, n_labels, per_client=None, **kwargs) -> GroupSpec:
    return GroupSpec.auto(n_clients, n_labels, samples_per_client=per_client, **kwargs)


def _fixed(*rows) -> list:
    return [ClientLabelDistribution(np.asarray(row, dtype=float)) for row in rows]


class TestGroupSpec:
    def test_auto_sizes(self):
        spec = _spec(10, 10)
        assert [g.client_count for g in spec.groups] == [3, 3, 4]
        assert spec.client_groups() == [0, 0, 0, 1, 1, 1, 2, 2, 2, 2]

    def test_auto_dominant_labels_wrap(self):
        spec = _spec(6, 5, n_groups=3, labels_per_group=2)
        assert [sorted(g.dominant_labels) for g in spec.groups] == [[0, 1], [2, 3], [0, 4]]

    def test_fewer_clients_than_groups(self):
        assert len(_spec(2, 10).groups) == 2

    def test_validation(self):
        with pytest.raises(ParameterError):
            GroupSpec((ClientGroup(1, frozenset({3})),), n_labels=3)
        with pytest.raises(ParameterError):
            GroupSpec((ClientGroup(1, frozenset()),), n_labels=3, beta_high=5, beta_low=5)
        with pytest.raises(ParameterError):
            GroupSpec((), n_labels=3)

    def test_explicit_groups_from_config(self):
        config = PartitionConfig(
            groups=[GroupConfig(clients=1, dominant_labels=[2]), GroupConfig(clients=2, dominant_labels=[0, 1])]
        )
        spec = GroupSpec.from_config(config, n_clients=3, n_labels=3)
        assert spec.client_groups() == [0, 1, 1]
        assert spec.groups[1].dominant_labels == frozenset({0, 1})

    def test_groups_that_do_not_fit_fall_back(self, caplog):
        config = PartitionConfig(groups=[GroupConfig(clients=4, dominant_labels=[0])])
        with caplog.at_level(logging.WARNING):
            spec = GroupSpec.from_config(config, n_clients=6, n_labels=10)
        assert spec.n_clients == 6
        assert "automatic layout" in caplog.text

    def test_proportional_means_no_fixed_count(self):
        spec = GroupSpec.from_config(PartitionConfig(samples_per_client=25), 3, 4)
        assert spec.samples_per_client == 25
        assert GroupSpec.from_config(PartitionConfig(), 3, 4).samples_per_client is None


class TestConcentration:
    def test_high_on_dominant_labels(self):
        spec = _spec(6, 10)
        np.testing.assert_array_equal(
            concentration_vector(spec, 1), [20, 20, 20, 80, 80, 80, 20, 20, 20, 20]
        )

    def test_single_label(self):
        spec = _spec(2, 1)
        np.testing.assert_array_equal(concentration_vector(spec, 0), [80.0])
        distribution = sample_distribution(concentration_vector(spec, 0), np.random.default_rng(0))
        np.testing.assert_array_equal(distribution.probs, [1.0])

    def test_unknown_group(self):
        with pytest.raises(ParameterError):
            concentration_vector(_spec(2, 3), 5)


class TestSampleDistribution:
    def test_moments(self):
        beta = np.array([80.0, 20.0, 20.0])
        rng = np.random.default_rng(1)
        draws = np.vstack([sample_distribution(beta, rng).probs for _ in range(20000)])
        total = beta.sum()
        mean = beta / total
        variance = beta * (total - beta) / (total**2 * (total + 1))
        np.testing.assert_allclose(draws.mean(axis=0), mean, atol=2e-3)
        np.testing.assert_allclose(draws.var(axis=0), variance, rtol=0.05)

    def test_dominant_label_means(self):
        beta = np.array([80.0, 80.0, 80.0] + [20.0] * 7)
        rng = np.random.default_rng(5)
        draws = np.vstack([sample_distribution(beta, rng).probs for _ in range(100_000)])
        means = draws.mean(axis=0)
        np.testing.assert_allclose(means[:3], 80 / 380, atol=0.01)
        np.testing.assert_allclose(means[3:], 20 / 380, atol=0.01)

    def test_huge_concentration_is_near_uniform(self):
        draw = sample_distribution(np.full(4, 1e6), np.random.default_rng(2))
        np.testing.assert_allclose(draw.probs, 0.25, atol=0.01)

    def test_small_concentration_still_sums_to_one(self):
        draw = sample_distribution(np.full(5, 0.01), np.random.default_rng(3))
        assert abs(draw.probs.sum() - 1.0) <= 1e-12
        assert np.all(draw.probs >= 0)

    @pytest.mark.parametrize("beta", [[1.0, 0.0], [2.0, -1.0], [], [np.inf, 1.0]])
    def test_rejects_bad_concentration(self, beta):
        with pytest.raises(ParameterError):
            sample_distribution(np.asarray(beta), np.random.default_rng(0))

    def test_one_draw_per_client_in_group_order(self):
        spec = _spec(5, 10)
        first = draw_client_distributions(spec, np.random.default_rng(4))
        second = draw_client_distributions(spec, np.random.default_rng(4))
        assert len(first) == 5
        for a, b in zip(first, second):
            np.testing.assert_array_equal(a.probs, b.probs)


class TestLargestRemainder:
    def test_sums_to_total(self):
        rng = np.random.default_rng(5)
        for _ in range(200):
            probs = rng.dirichlet(np.ones(7))
            total = int(rng.integers(0, 500))
            counts = largest_remainder(probs, total)
            assert counts.sum() == total
            assert np.all(np.abs(counts - probs * total) < 1.0)

    def test_largest_fraction_wins(self):
        np.testing.assert_array_equal(largest_remainder([0.5, 0.3, 0.2], 7), [4, 2, 1])

    def test_ties_go_to_lowest_index(self):
        np.testing.assert_array_equal(largest_remainder(np.full(3, 1.0 / 3.0), 4), [2, 1, 1])


class TestPartition:
    def test_single_client_gets_everything(self):
        data = labeled_pool([7, 3, 5])
        (client,) = partition(data, _fixed([0.2, 0.5, 0.3]), _spec(1, 3), np.random.default_rng(0))
        np.testing.assert_array_equal(client.index, data.index)

    def test_point_masses(self):
        data = labeled_pool([10, 10, 10])
        spec = _spec(3, 3, per_client=10, labels_per_group=1)
        clients = partition(
            data, _fixed([1, 0, 0], [0, 1, 0], [0, 0, 1]), spec, np.random.default_rng(1)
        )
        for j, client in enumerate(clients):
            assert set(client.labels.tolist()) == {j}
            assert client.size == 10

    def test_exact_targets_when_supply_suffices(self):
        data = labeled_pool([100] * 10)
        rows = [np.roll([0.3, 0.2, 0.1, 0.1, 0.1, 0.1, 0.05, 0.05, 0.0, 0.0], i) for i in range(6)]
        spec = _spec(6, 10, per_client=100)
        clients = partition(data, _fixed(*rows), spec, np.random.default_rng(2))
        for row, client in zip(rows, clients):
            assert client.size == 100
            np.testing.assert_array_equal(client.label_counts(), largest_remainder(row, 100))

    def test_clients_are_disjoint(self, area_dataset):
        spec = _spec(5, area_dataset.n_labels)
        rng = np.random.default_rng(3)
        distributions = draw_client_distributions(spec, rng)
        clients = partition(area_dataset, distributions, spec, rng)
        assigned = np.concatenate([c.index for c in clients])
        assert np.unique(assigned).size == assigned.size
        assert all(c.size == area_dataset.size // 5 for c in clients)

    def test_capacity(self):
        data = labeled_pool([10, 10, 10])
        with pytest.raises(CapacityError):
            partition(data, _fixed([1, 0, 0], [0, 1, 0], [0, 0, 1]), _spec(3, 3, per_client=11), np.random.default_rng(0))
        with pytest.raises(CapacityError):
            partition(labeled_pool([1, 1]), _fixed([0.5, 0.5]) * 3, _spec(3, 2), np.random.default_rng(0))

    def test_exhausted_label_is_redistributed(self, caplog):
        data = labeled_pool([5, 100])
        with caplog.at_level(logging.WARNING):
            first, second = partition(
                data, _fixed([1, 0], [1, 0]), _spec(2, 2, per_client=10), np.random.default_rng(4)
            )
        np.testing.assert_array_equal(first.label_counts(), [5, 5])
        np.testing.assert_array_equal(second.label_counts(), [0, 10])
        assert "redistributing" in caplog.text

    def test_same_stream_same_partition(self, area_dataset):
        spec = _spec(4, area_dataset.n_labels)

        def run(seed):
            rng = np.random.default_rng(seed)
            return partition(area_dataset, draw_client_distributions(spec, rng), spec, rng)

        for a, b in zip(run(9), run(9)):
            np.testing.assert_array_equal(a.index, b.index)
        assert any(not np.array_equal(a.index, b.index) for a, b in zip(run(9), run(10)))


class TestManifest:
    def test_round_trip(self, tmp_path):
        data = labeled_pool([20, 20, 20])
        spec = _spec(3, 3)
        rng = np.random.default_rng(5)
        clients = partition(data, draw_client_distributions(spec, rng), spec, rng)
        restored = load_manifest(export_manifest(clients, tmp_path / "manifest.csv"), data)
        assert len(restored) == 3
        for original, loaded in zip(clients, restored):
            np.testing.assert_array_equal(original.index, loaded.index)
            np.testing.assert_array_equal(original.labels, loaded.labels)

    def test_missing_columns(self, tmp_path):
        path = tmp_path / "manifest.csv"
        pd.DataFrame({"client_id": [0]}).to_csv(path, index=False)
        with pytest.raises(SchemaError):
            load_manifest(path, labeled_pool([1]))

    def test_histogram_frame(self):
        data = labeled_pool([4, 6])
        clients = [data.subset(np.array([0, 4, 5])), data.subset(np.array([1, 2]))]
        frame = client_histogram_frame(clients)
        assert list(frame.columns) == ["client_id", "label_0", "label_1", "total"]
        assert frame["total"].tolist() == [3, 2]
        assert frame["label_1"].tolist() == [2, 0]
