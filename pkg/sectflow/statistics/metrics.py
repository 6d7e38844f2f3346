import logging
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.spatial.distance import pdist, squareform

from sectflow.exceptions import (DegenerateGroupError, IncompatibleGridsError,
                                 InvalidArgumentError)
from sectflow.transforms.transform import ECTMatrix, SECTMatrix, TransformMatrix


@dataclass(frozen=True, eq=False)
class DistanceMatrix:
    """
    Pooled pairwise distances between all N = n1 + n2 transforms.
    """

    entries : np.ndarray

    def __post_init__(self) -> None:
        entries = np.array(self.entries, dtype=np.float64)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1] or entries.shape[0] < 2:
            raise InvalidArgumentError(f'A distance matrix must be square with N >= 2, got shape {entries.shape}.')
        if not np.array_equal(entries, entries.T):
            raise InvalidArgumentError('A distance matrix must be symmetric.')
        if (np.diag(entries) != 0).any():
            raise InvalidArgumentError('A distance matrix must have a zero diagonal.')
        if (entries < 0).any() or not np.isfinite(entries).all():
            raise InvalidArgumentError('A distance matrix must be finite and nonnegative.')

        entries.flags.writeable = False
        object.__setattr__(self, 'entries', entries)

    @property
    def size(self) -> int:
        return int(self.entries.shape[0])

    def scaled(self, factor: float) -> 'DistanceMatrix':
        if not factor > 0:
            raise InvalidArgumentError(f'Scaling factor must be positive, got {factor!r}.')
        return DistanceMatrix(entries=self.entries * factor)

    def submatrix(self, indices: Sequence[int]) -> 'DistanceMatrix':
        indices = np.asarray(indices)
        return DistanceMatrix(entries=self.entries[np.ix_(indices, indices)])


@dataclass(frozen=True, eq=False)
class GroupLabels:
    """
    Group membership (1 or 2) of every pooled shape. Both groups need at least two members.
    """

    labels : np.ndarray

    def __post_init__(self) -> None:
        labels = np.array(self.labels, dtype=np.int64).ravel()
        if not np.isin(labels, [1, 2]).all():
            raise InvalidArgumentError('Group labels must be 1 or 2.')

        for group in (1, 2):
            if np.count_nonzero(labels == group) < 2:
                raise DegenerateGroupError(
                    f'Group {group} has {np.count_nonzero(labels == group)} member(s), at least 2 are required!')

        labels.flags.writeable = False
        object.__setattr__(self, 'labels', labels)

    @classmethod
    def from_sizes(cls, n1: int, n2: int) -> 'GroupLabels':
        return cls(labels=np.concatenate([np.full(n1, 1), np.full(n2, 2)]))

    @property
    def n1(self) -> int:
        return int(np.count_nonzero(self.labels == 1))

    @property
    def n2(self) -> int:
        return int(np.count_nonzero(self.labels == 2))

    def __len__(self) -> int:
        return int(self.labels.size)


def _check_compatible(a: TransformMatrix, b: TransformMatrix) -> None:
    if type(a) is not type(b):
        raise IncompatibleGridsError(f'Cannot compare a {type(a).__name__} with a {type(b).__name__}.')
    if a.direction_grid != b.direction_grid or a.level_grid != b.level_grid:
        raise IncompatibleGridsError('Transforms were computed on different direction or level grids!')


def _sup_l2(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.sqrt(np.sum((a - b) ** 2, axis=1)).max())


def rho_hat(a: SECTMatrix, b: SECTMatrix) -> float:
    """
    Function to get the largest, over directions, Euclidean distance between two SECT rows.
    """

    if not isinstance(a, SECTMatrix) or not isinstance(b, SECTMatrix):
        raise IncompatibleGridsError('rho_hat compares SECT matrices only.')
    _check_compatible(a, b)

    return _sup_l2(a.values, b.values)


def theta_hat(a: ECTMatrix, b: ECTMatrix) -> float:
    """
    Function to get the ECT analogue of rho_hat.
    """

    if not isinstance(a, ECTMatrix) or not isinstance(b, ECTMatrix):
        raise IncompatibleGridsError('theta_hat compares ECT matrices only.')
    _check_compatible(a, b)

    return _sup_l2(a.values.astype(np.float64), b.values.astype(np.float64))


def transform_distance(a: TransformMatrix, b: TransformMatrix) -> float:
    return rho_hat(a, b) if isinstance(a, SECTMatrix) else theta_hat(a, b)


def pairwise_distances(transforms: Sequence[TransformMatrix]) -> DistanceMatrix:
    """
    Function to compute every pairwise rho_hat (SECT) or theta_hat (ECT) once, to be reused by
    all permutations.
    """

    if len(transforms) < 2:
        raise InvalidArgumentError(f'At least 2 transforms are required, got {len(transforms)}.')

    first = transforms[0]
    for other in transforms[1:]:
        _check_compatible(first, other)

    stacked = np.stack([transform.values for transform in transforms]).astype(np.float64)

    entries = np.zeros((len(transforms), len(transforms)))
    for p in range(stacked.shape[1]):
        entries = np.maximum(entries, squareform(pdist(stacked[:, p, :], metric='euclidean')))

    logging.info(f'Computed {len(transforms) * (len(transforms) - 1) // 2} pairwise distances between {type(first).__name__}s.')

    return DistanceMatrix(entries=entries)


def group_loss(dist: np.ndarray, members: np.ndarray) -> float:
    n = members.size
    return float(dist[np.ix_(members, members)].sum() / (2.0 * n * (n - 1)))


def loss_from_labels(dist: DistanceMatrix, labels: GroupLabels) -> float:
    """
    Function to get the within-group loss: for each group, the ordered double sum of its
    pairwise distances divided by 2 n_j (n_j - 1).
    """

    if len(labels) != dist.size:
        raise InvalidArgumentError(f'{len(labels)} labels for a distance matrix of size {dist.size}.')

    return sum(group_loss(dist.entries, np.flatnonzero(labels.labels == group)) for group in (1, 2))
