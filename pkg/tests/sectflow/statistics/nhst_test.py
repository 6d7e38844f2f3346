import os
import sys

import numpy as np
import pytest
from scipy.spatial.distance import pdist, squareform

sys.path.append(os.getcwd())
from sectflow.constants.types import ACCEPT, REJECT
from sectflow.exceptions import (ConfigurationError, DegenerateGroupError,
                                 InvalidArgumentError)
from sectflow.shapes.shape import (shape_from_mask, uniform_directions,
                                   uniform_levels)
from sectflow.statistics.metrics import DistanceMatrix, GroupLabels
from sectflow.statistics.nhst import (TestConfig, exact_p_value, nhst_ect,
                                      nhst_sect, permutation_test,
                                      rejection_rate, split_half_test,
                                      threshold_index)


def get_distances(points):
    return DistanceMatrix(entries=squareform(pdist(points)))


def get_clusters(n=5, seed=0):
    rng = np.random.default_rng(seed)
    points = np.concatenate([rng.normal(0.0, 0.01, size=(n, 2)), rng.normal(10.0, 0.01, size=(n, 2))])

    return get_distances(points)


@pytest.mark.parametrize('alpha, permutations, expected_result', [
    (0.05, 1000, 49),
    (0.05, 999, 49),
    (0.05, 20, 0),
    (0.1, 25, 2),
    (0.2, 10, 1),
    (0.01, 1000, 9),
])
def test_threshold_index(alpha, permutations, expected_result):
    assert threshold_index(alpha, permutations) == expected_result


@pytest.mark.parametrize('permutations', [40, 100, 999])
def test_all_zero_distances_accept(permutations):
    dist = DistanceMatrix(entries=np.zeros((8, 8)))

    result = permutation_test(dist, GroupLabels.from_sizes(4, 4), TestConfig(alpha=0.05, num_permutations=permutations, seed=1))

    assert result.decision == ACCEPT
    assert result.p_value == 1.0
    assert result.observed_loss == 0.0


def test_no_threshold_is_a_configuration_error():
    with pytest.raises(ConfigurationError):
        permutation_test(get_clusters(), GroupLabels.from_sizes(5, 5), TestConfig(alpha=0.05, num_permutations=10))


@pytest.mark.parametrize('kwargs', [
    {'alpha': 0.0},
    {'alpha': 1.0},
    {'num_permutations': 0},
    {'num_permutations': 2.5},
    {'seed': -1},
    {'seed': 2 ** 64},
])
def test_invalid_test_config(kwargs):
    with pytest.raises(ConfigurationError):
        TestConfig(**kwargs)


def test_worker_count_must_be_positive():
    with pytest.raises(InvalidArgumentError):
        TestConfig(n_jobs=0)


def test_tight_clusters_reject():
    dist = get_clusters()
    labels = GroupLabels.from_sizes(5, 5)

    result = permutation_test(dist, labels, TestConfig(alpha=0.05, num_permutations=999, seed=0))

    assert result.decision == REJECT
    assert result.rejected
    assert result.p_value <= 0.02
    assert result.threshold_index == 49
    assert (result.n1, result.n2) == (5, 5)
    assert result.permuted_losses.shape == (999,)


def test_tight_clusters_exact_p_value():
    dist = get_clusters()

    # Only the observed split and its label swap reach the minimal loss among the 252 splits
    result = exact_p_value(dist, GroupLabels.from_sizes(5, 5))

    assert result == 2 / 252
    assert result <= 0.01


def test_determinism():
    dist = get_clusters(seed=3)
    labels = GroupLabels.from_sizes(5, 5)
    config = TestConfig(alpha=0.05, num_permutations=200, seed=17)

    first = permutation_test(dist, labels, config)
    second = permutation_test(dist, labels, config)
    threaded = permutation_test(dist, labels, TestConfig(alpha=0.05, num_permutations=200, seed=17, n_jobs=2))

    assert first == second
    assert first == threaded


def test_seed_changes_the_permutations():
    dist = get_distances(np.random.default_rng(5).normal(size=(10, 2)))
    labels = GroupLabels.from_sizes(5, 5)

    first = permutation_test(dist, labels, TestConfig(alpha=0.05, num_permutations=100, seed=1))
    second = permutation_test(dist, labels, TestConfig(alpha=0.05, num_permutations=100, seed=2))

    assert not np.array_equal(first.permuted_losses, second.permuted_losses)


def test_matches_exact_oracle():
    dist = get_distances(np.random.default_rng(6).normal(size=(8, 3)))
    labels = GroupLabels.from_sizes(4, 4)

    result = permutation_test(dist, labels, TestConfig(alpha=0.05, num_permutations=20000, seed=6))
    expected_result = exact_p_value(dist, labels)

    assert abs(result.p_value - expected_result) <= 0.02


@pytest.mark.parametrize('factor', [4.0, 0.25])
def test_rank_invariance(factor):
    dist = get_distances(np.random.default_rng(7).normal(size=(12, 2)))
    labels = GroupLabels.from_sizes(6, 6)
    config = TestConfig(alpha=0.1, num_permutations=300, seed=7)

    first = permutation_test(dist, labels, config)
    second = permutation_test(dist.scaled(factor), labels, config)

    assert first.decision == second.decision
    assert first.p_value == second.p_value


def test_type_one_error_is_calibrated():
    rng = np.random.default_rng(8)
    labels = GroupLabels.from_sizes(10, 10)

    results = [
        permutation_test(get_distances(rng.normal(size=(20, 5))), labels, TestConfig(alpha=0.05, num_permutations=199, seed=replicate))
        for replicate in range(200)
    ]

    assert 0.005 <= rejection_rate(results) <= 0.10


def test_exact_p_value_refuses_large_enumerations():
    dist = DistanceMatrix(entries=np.zeros((30, 30)))

    with pytest.raises(InvalidArgumentError):
        exact_p_value(dist, GroupLabels.from_sizes(15, 15))


def test_split_half_test_on_homogeneous_collection():
    dist = get_distances(np.random.default_rng(9).normal(size=(20, 4)))

    result = split_half_test(dist, TestConfig(alpha=0.05, num_permutations=99, seed=9), repeats=100)

    assert result.p_values.shape == (100,)
    assert ((result.p_values > 0.0) & (result.p_values <= 1.0)).all()
    assert 0.3 <= result.mean <= 0.7
    assert result.sd > 0.0


def test_split_half_test_is_reproducible():
    dist = get_distances(np.random.default_rng(10).normal(size=(8, 2)))
    config = TestConfig(alpha=0.2, num_permutations=20, seed=3)

    first = split_half_test(dist, config, repeats=5)
    second = split_half_test(dist, config, repeats=5)

    assert np.array_equal(first.p_values, second.p_values)


def test_split_half_test_needs_four_shapes():
    with pytest.raises(DegenerateGroupError):
        split_half_test(DistanceMatrix(entries=np.zeros((3, 3))), TestConfig(), repeats=1)


def get_shapes(seed, count):
    rng = np.random.default_rng(seed)
    shapes = []
    for _ in range(count):
        mask = rng.random((8, 8)) < 0.5
        mask[3, 3] = True
        shapes.append(shape_from_mask(mask, radius_R=1.5))

    return shapes


def test_nhst_identical_groups_accept():
    shapes = get_shapes(11, 3)
    dirs, levels = uniform_directions(4), uniform_levels(20, 3.0)
    config = TestConfig(alpha=0.05, num_permutations=100, seed=0)

    assert nhst_sect(shapes, shapes, dirs, levels, config).decision == ACCEPT
    assert nhst_ect(shapes, shapes, dirs, levels, config).decision == ACCEPT


def test_nhst_degenerate_group():
    shapes = get_shapes(12, 3)

    with pytest.raises(DegenerateGroupError):
        nhst_sect(shapes[:1], shapes, uniform_directions(4), uniform_levels(20, 3.0), TestConfig())


def test_rejection_rate():
    dist = get_clusters()
    labels = GroupLabels.from_sizes(5, 5)
    rejected = permutation_test(dist, labels, TestConfig(alpha=0.05, num_permutations=999, seed=0))
    accepted = permutation_test(DistanceMatrix(entries=np.zeros((10, 10))), labels, TestConfig(alpha=0.05, num_permutations=100, seed=0))

    assert rejection_rate([rejected, accepted, accepted, accepted]) == 0.25

# pytest==7.4.2, pytest-mock==3.11.1
# pytest tests/sectflow/statistics/nhst_test.py --verbose
