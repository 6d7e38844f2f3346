import itertools
import logging
import math
from dataclasses import dataclass, field
from typing import List, Sequence

import numpy as np
from joblib import Parallel, delayed

from sectflow.constants.types import (ACCEPT, DEFAULT_ALPHA,
                                      DEFAULT_PERMUTATIONS, DEFAULT_SEED, ECT,
                                      MAX_EXACT_SPLITS, REJECT, SECT)
from sectflow.exceptions import (ConfigurationError, DegenerateGroupError,
                                 InvalidArgumentError)
from sectflow.shapes.shape import DirectionGrid, GridShape, LevelGrid
from sectflow.statistics.metrics import (DistanceMatrix, GroupLabels,
                                         group_loss, loss_from_labels,
                                         pairwise_distances)
from sectflow.transforms.transform import transform_shapes
from sectflow.utilities.general import get_n_jobs


@dataclass(frozen=True)
class TestConfig:
    """
    Constructor arguments:
        alpha (float):
            Significance level in (0, 1).
        num_permutations (int):
            Number of random relabelings, Pi.
        seed (int):
            Unsigned 64-bit seed; permutation k draws from default_rng([seed, k]).
        n_jobs (int):
            joblib workers for the permutation loop. Never changes the result.
    """

    __test__ = False

    alpha            : float = DEFAULT_ALPHA
    num_permutations : int   = DEFAULT_PERMUTATIONS
    seed             : int   = DEFAULT_SEED
    n_jobs           : int   = field(default=1, compare=False)

    def __post_init__(self) -> None:
        if not 0 < self.alpha < 1:
            raise ConfigurationError(f'alpha must lie in (0, 1), got {self.alpha!r}.')
        if int(self.num_permutations) != self.num_permutations or self.num_permutations < 1:
            raise ConfigurationError(f'The number of permutations must be a positive integer, got {self.num_permutations!r}.')
        if int(self.seed) != self.seed or not 0 <= self.seed < 2 ** 64:
            raise ConfigurationError(f'seed must be an unsigned 64-bit integer, got {self.seed!r}.')
        get_n_jobs(self.n_jobs)
        if math.floor(self.alpha * self.num_permutations) < 1:
            logging.warning(
                f'floor(alpha * permutations) = {math.floor(self.alpha * self.num_permutations)} < 1; '
                f'the rejection threshold degenerates, use more permutations.')


@dataclass(frozen=True, eq=False)
class TestResult:
    __test__ = False

    observed_loss   : float
    permuted_losses : np.ndarray
    threshold_index : int
    decision        : str
    p_value         : float
    n1              : int
    n2              : int

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TestResult):
            return NotImplemented
        return (self.observed_loss == other.observed_loss
                and np.array_equal(self.permuted_losses, other.permuted_losses)
                and self.threshold_index == other.threshold_index
                and self.decision == other.decision
                and self.p_value == other.p_value)

    @property
    def rejected(self) -> bool:
        return self.decision == REJECT


@dataclass(frozen=True, eq=False)
class SplitResult:
    p_values : np.ndarray

    @property
    def mean(self) -> float:
        return float(np.mean(self.p_values))

    @property
    def sd(self) -> float:
        return float(np.std(self.p_values, ddof=1)) if self.p_values.size > 1 else 0.0


def threshold_index(alpha: float, num_permutations: int) -> int:
    """
    Function to get k*, the largest integer strictly smaller than alpha * Pi.
    """

    product = alpha * num_permutations
    nearest = round(product)

    if math.isclose(product, nearest, rel_tol=0.0, abs_tol=1e-9):
        return int(nearest) - 1

    return int(math.floor(product))


def _permuted_losses(dist: np.ndarray, labels: np.ndarray, seed: int, ks: Sequence[int]) -> np.ndarray:
    losses = np.empty(len(ks))

    for position, k in enumerate(ks):
        shuffled = np.random.default_rng([seed, k]).permutation(labels)
        losses[position] = (group_loss(dist, np.flatnonzero(shuffled == 1))
                            + group_loss(dist, np.flatnonzero(shuffled == 2)))

    return losses


def permutation_test(dist: DistanceMatrix, labels: GroupLabels, config: TestConfig) -> TestResult:
    """
    Function to run the randomization-style test on a pooled distance matrix.

    The observed within-group loss is compared with the losses of Pi random count-preserving
    relabelings; H0 is rejected when it falls strictly below the k*-th smallest of them.
    """

    k_star = threshold_index(config.alpha, config.num_permutations)
    if k_star < 1:
        raise ConfigurationError(
            f'alpha * permutations = {config.alpha * config.num_permutations} leaves no rejection threshold '
            f'(k* = {k_star}); increase the number of permutations!')

    observed = loss_from_labels(dist, labels)

    chunks = np.array_split(np.arange(1, config.num_permutations + 1), max(1, config.n_jobs))
    with Parallel(n_jobs=config.n_jobs) as parallel:
        losses = parallel(delayed(_permuted_losses)(dist.entries, labels.labels, config.seed, chunk)
                          for chunk in chunks if chunk.size)
    permuted = np.concatenate(losses)

    ordered = np.sort(permuted)
    decision = REJECT if observed < ordered[k_star - 1] else ACCEPT
    p_value = (1.0 + np.count_nonzero(permuted <= observed)) / (config.num_permutations + 1.0)

    logging.info(f'Observed loss {observed:.6g}, k* = {k_star}, threshold {ordered[k_star - 1]:.6g}, '
                 f'p-value {p_value:.4g}: {decision}.')

    permuted.flags.writeable = False

    return TestResult(
        observed_loss=observed,
        permuted_losses=permuted,
        threshold_index=k_star,
        decision=decision,
        p_value=float(p_value),
        n1=labels.n1,
        n2=labels.n2
    )


def exact_p_value(dist: DistanceMatrix, labels: GroupLabels) -> float:
    """
    Function to get the exact permutation p-value by enumerating every count-preserving
    relabeling: #{splits with loss <= observed} / #splits.
    """

    size, n1 = len(labels), labels.n1
    total = math.comb(size, n1)
    if total > MAX_EXACT_SPLITS:
        raise InvalidArgumentError(f'{total} splits are too many to enumerate (limit {MAX_EXACT_SPLITS}).')

    observed = loss_from_labels(dist, labels)
    indices = np.arange(size)

    at_most = 0
    for group_one in itertools.combinations(range(size), n1):
        members = np.array(group_one)
        loss = group_loss(dist.entries, members) + group_loss(dist.entries, np.setdiff1d(indices, members))
        at_most += loss <= observed

    return at_most / total


def split_half_test(dist: DistanceMatrix, config: TestConfig, repeats: int) -> SplitResult:
    """
    Function to partition one collection at random into two halves `repeats` times and test the
    halves against each other. A homogeneous collection gives p-values spread around 0.5.
    """

    if dist.size < 4:
        raise DegenerateGroupError(f'A collection of {dist.size} shapes cannot be split into two groups of 2.')
    if repeats < 1:
        raise InvalidArgumentError(f'repeats must be positive, got {repeats!r}.')

    half = dist.size // 2
    p_values = np.empty(repeats)
    for repeat in range(repeats):
        order = np.random.default_rng([config.seed, repeat, dist.size]).permutation(dist.size)
        labels = np.empty(dist.size, dtype=np.int64)
        labels[order[:half]] = 1
        labels[order[half:]] = 2
        p_values[repeat] = permutation_test(dist, GroupLabels(labels=labels), config).p_value

    logging.info(f'Split-half p-values over {repeats} splits: mean {np.mean(p_values):.3f}.')

    return SplitResult(p_values=p_values)


def _nhst(shapes_one: Sequence[GridShape], shapes_two: Sequence[GridShape], dirs: DirectionGrid,
          levels: LevelGrid, config: TestConfig, mode: str) -> TestResult:
    if len(shapes_one) < 2 or len(shapes_two) < 2:
        raise DegenerateGroupError(f'Both groups need at least 2 shapes, got {len(shapes_one)} and {len(shapes_two)}.')

    transforms = transform_shapes(list(shapes_one) + list(shapes_two), dirs, levels, mode=mode, n_jobs=config.n_jobs)
    dist = pairwise_distances(transforms)

    return permutation_test(dist, GroupLabels.from_sizes(len(shapes_one), len(shapes_two)), config)


def nhst_sect(shapes_one: Sequence[GridShape], shapes_two: Sequence[GridShape], dirs: DirectionGrid,
              levels: LevelGrid, config: TestConfig) -> TestResult:
    return _nhst(shapes_one, shapes_two, dirs, levels, config, SECT)


def nhst_ect(shapes_one: Sequence[GridShape], shapes_two: Sequence[GridShape], dirs: DirectionGrid,
             levels: LevelGrid, config: TestConfig) -> TestResult:
    return _nhst(shapes_one, shapes_two, dirs, levels, config, ECT)


def rejection_rate(results: List[TestResult]) -> float:
    return sum(result.rejected for result in results) / len(results)
