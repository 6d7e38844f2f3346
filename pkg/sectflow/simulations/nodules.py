import logging
from typing import List, Tuple

import numpy as np
from shapely import affinity
from shapely.geometry import Point, Polygon

try:
    from shapely import contains_xy
except ImportError:
    from shapely.vectorized import contains as contains_xy

from sectflow.constants.types import (BENIGN, MALIGNANT, NODULE_EXTENT,
                                      NODULE_KINDS, SECT, SIMULATION_RADIUS)
from sectflow.exceptions import InvalidArgumentError
from sectflow.shapes.shape import DirectionGrid, GridShape, LevelGrid
from sectflow.simulations.arcs import simulation_frame
from sectflow.statistics.metrics import GroupLabels, pairwise_distances
from sectflow.statistics.nhst import (SplitResult, TestConfig, TestResult,
                                      permutation_test, split_half_test)
from sectflow.transforms.transform import transform_shapes


def _benign_outline(rng: np.random.Generator) -> Polygon:
    axis_x = NODULE_EXTENT * rng.uniform(0.7, 1.0)
    axis_y = NODULE_EXTENT * rng.uniform(0.7, 1.0)

    ellipse = affinity.scale(Point(0.0, 0.0).buffer(1.0, resolution=64), axis_x, axis_y)

    return affinity.rotate(ellipse, rng.uniform(0.0, 180.0), origin=(0.0, 0.0))


def _malignant_outline(rng: np.random.Generator) -> Polygon:
    spikes = int(rng.integers(7, 13))
    body = NODULE_EXTENT * rng.uniform(0.55, 0.7)

    # Alternate valley and spike vertices around a jittered circle
    base = np.linspace(0.0, 2.0 * np.pi, 2 * spikes, endpoint=False) + rng.uniform(0.0, np.pi / spikes)
    angles = base + rng.uniform(-0.15, 0.15, size=base.size) * np.pi / spikes
    radii = np.full(base.size, body)
    radii[1::2] = body + NODULE_EXTENT * rng.uniform(0.25, 0.45, size=spikes)

    return Polygon(np.column_stack([radii * np.cos(angles), radii * np.sin(angles)]))


def sample_nodule(kind: str, resolution: int, rng: np.random.Generator, radius_R: float = SIMULATION_RADIUS) -> GridShape:
    """
    Function to draw one synthetic nodule mask.

    A benign nodule is a smooth ellipse, a malignant one a spiculated star polygon. The outline
    is rasterized on the simulation frame: a pixel is foreground when its center lies inside.
    """

    if kind not in NODULE_KINDS.__members__:
        raise InvalidArgumentError(f'Nodule kind {kind!r} is not supported!')

    outline = _benign_outline(rng) if kind == BENIGN else _malignant_outline(rng)

    frame = simulation_frame(resolution, radius_R)
    centers = frame.origin[0] + np.arange(resolution) * frame.pixel_pitch
    xs, ys = np.meshgrid(centers, centers, indexing='ij')

    mask = contains_xy(outline, xs, ys)
    logging.debug(f'Sampled a {kind} nodule covering {int(mask.sum())} pixels.')

    return GridShape(mask=mask, frame=frame)


def sample_cohort(kind: str, size: int, resolution: int, seed: int, radius_R: float = SIMULATION_RADIUS) -> List[GridShape]:
    """
    Function to draw `size` nodules of one kind; nodule i uses default_rng([seed, kind index, i]).
    """

    if kind not in NODULE_KINDS.__members__:
        raise InvalidArgumentError(f'Nodule kind {kind!r} is not supported!')

    index = NODULE_KINDS[kind].value

    return [sample_nodule(kind, resolution, np.random.default_rng([seed, index, i]), radius_R) for i in range(size)]


def run_nodule_study(n_per_group: int, resolution: int, dirs: DirectionGrid, levels: LevelGrid, config: TestConfig,
                     repeats: int, radius_R: float = SIMULATION_RADIUS) -> Tuple[TestResult, SplitResult]:
    """
    Function to test benign against malignant synthetic nodules with the SECT, and to split the
    benign cohort into random halves `repeats` times as a homogeneous control.
    """

    benign = sample_cohort(BENIGN, n_per_group, resolution, config.seed, radius_R)
    malignant = sample_cohort(MALIGNANT, n_per_group, resolution, config.seed, radius_R)

    transforms = transform_shapes(benign + malignant, dirs, levels, mode=SECT, n_jobs=config.n_jobs)
    dist = pairwise_distances(transforms)

    result = permutation_test(dist, GroupLabels.from_sizes(n_per_group, n_per_group), config)
    split = split_half_test(dist.submatrix(np.arange(n_per_group)), config, repeats)

    logging.info(f'Benign vs malignant p-value {result.p_value:.4g}; benign split-half p-values '
                 f'mean {split.mean:.3f}, sd {split.sd:.3f}.')

    return result, split
