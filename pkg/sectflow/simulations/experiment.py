import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple

import numpy as np
import polars as pl
from joblib import Parallel, delayed

from sectflow.constants.types import (DEFAULT_ALPHA, DEFAULT_EPSILONS,
                                      DEFAULT_PERMUTATIONS, DEFAULT_RESOLUTION,
                                      DEFAULT_SEED, ECT, MIN_RESOLUTION,
                                      NOISE_MEAN, NOISE_SD, SECT,
                                      SIMULATION_RADIUS, TRANSFORM_MODES)
from sectflow.exceptions import ConfigurationError
from sectflow.shapes.shape import (DirectionGrid, GridShape, LevelGrid,
                                   directions_from_angles,
                                   half_circle_directions, uniform_levels)
from sectflow.simulations.arcs import EpsilonConfig, sample_shape
from sectflow.statistics.metrics import GroupLabels, pairwise_distances
from sectflow.statistics.nhst import TestConfig, permutation_test
from sectflow.transforms.transform import (ect_from_curves, euler_curves,
                                           sect_curve, sect_from_curves)
from sectflow.utilities.general import get_derived_seed, get_n_jobs

# Group key used for the per-epsilon example shapes, next to 0 (reference) and 1 (perturbed)
EXAMPLE_GROUP = 2


@dataclass(frozen=True)
class ExperimentConfig:
    """
    Constructor arguments:
        epsilons (Tuple[float, ...]):
            Perturbation levels; group 1 is always drawn at epsilon 0, group 2 at each level.
        n_per_group (int):
            Shapes per group and replicate.
        replicates (int):
            Tests per epsilon.
        num_directions (int):
            Size of the half-circle direction grid.
        num_levels (int):
            Size of the uniform level grid on (0, 2R].
        radius_R (float):
            Ball radius; the raster frame covers [-R, R]^2 and T = 2R.
        resolution (int):
            Pixels per side of the raster.
        alpha, num_permutations, seed:
            Test settings; seed is the master seed of the whole experiment.
        noise_sd, noise_mean:
            Law of the four arc axes.
        n_jobs (int):
            joblib workers over (epsilon, replicate) cells. Never changes the result.
    """

    epsilons         : Tuple[float, ...] = tuple(DEFAULT_EPSILONS)
    n_per_group      : int               = 100
    replicates       : int               = 100
    num_directions   : int               = 4
    num_levels       : int               = 50
    radius_R         : float             = SIMULATION_RADIUS
    resolution       : int               = DEFAULT_RESOLUTION
    alpha            : float             = DEFAULT_ALPHA
    num_permutations : int               = DEFAULT_PERMUTATIONS
    seed             : int               = DEFAULT_SEED
    noise_sd         : float             = NOISE_SD
    noise_mean       : float             = NOISE_MEAN
    n_jobs           : int               = field(default=1, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, 'epsilons', tuple(float(epsilon) for epsilon in self.epsilons))

        if len(self.epsilons) < 1:
            raise ConfigurationError('At least one epsilon is required.')
        get_n_jobs(self.n_jobs)
        for name in ('n_per_group', 'replicates', 'num_directions', 'num_levels', 'num_permutations'):
            if int(getattr(self, name)) != getattr(self, name) or getattr(self, name) < 1:
                raise ConfigurationError(f'{name} must be a positive integer, got {getattr(self, name)!r}.')
        if self.n_per_group < 2:
            raise ConfigurationError(f'n_per_group must be at least 2, got {self.n_per_group}.')
        if self.resolution < MIN_RESOLUTION:
            raise ConfigurationError(f'resolution must be at least {MIN_RESOLUTION}, got {self.resolution}.')
        if not self.radius_R > 0:
            raise ConfigurationError(f'radius_R must be positive, got {self.radius_R!r}.')

        # Validates epsilon range and noise law
        for epsilon in self.epsilons:
            self.epsilon_config(epsilon)
        self.test_config(self.seed)

    @property
    def horizon_T(self) -> float:
        return 2.0 * self.radius_R

    @property
    def directions(self) -> DirectionGrid:
        return half_circle_directions(self.num_directions)

    @property
    def levels(self) -> LevelGrid:
        return uniform_levels(self.num_levels, self.horizon_T)

    def epsilon_config(self, epsilon: float) -> EpsilonConfig:
        return EpsilonConfig(epsilon=epsilon, noise_sd=self.noise_sd, noise_mean=self.noise_mean)

    def test_config(self, seed: int) -> TestConfig:
        return TestConfig(alpha=self.alpha, num_permutations=self.num_permutations, seed=seed)


@dataclass(frozen=True, eq=False)
class RejectionTable:
    """
    Per-epsilon rejection rates of one method.

    p_values and rejections are (epsilons, replicates) arrays; the rate of an epsilon is its
    number of rejections over the replicate count.
    """

    method     : str
    epsilons   : Tuple[float, ...]
    p_values   : np.ndarray
    rejections : np.ndarray

    @property
    def replicates(self) -> int:
        return int(self.rejections.shape[1])

    @property
    def rates(self) -> np.ndarray:
        return self.rejections.sum(axis=1) / self.replicates

    def rate(self, epsilon: float) -> float:
        return float(self.rates[self.epsilons.index(float(epsilon))])

    def to_dataframe(self) -> pl.DataFrame:
        return pl.DataFrame({
            'epsilon': list(self.epsilons),
            'rate': self.rates.tolist(),
            'replicates': [self.replicates] * len(self.epsilons),
        })

    def p_values_dataframe(self) -> pl.DataFrame:
        epsilon_index, replicate = np.indices(self.p_values.shape)
        return pl.DataFrame({
            'epsilon': np.asarray(self.epsilons)[epsilon_index.ravel()].tolist(),
            'replicate': replicate.ravel().tolist(),
            'p_value': self.p_values.ravel().tolist(),
            'rejected': self.rejections.ravel().tolist(),
        })


def cohort(cfg: ExperimentConfig, epsilon_index: int, replicate: int, group: int, epsilon: float) -> List[GridShape]:
    """
    Function to draw one group of a cell; shape i uses default_rng([seed, epsilon index, replicate, group, i]).
    """

    eps_cfg = cfg.epsilon_config(epsilon)

    return [
        sample_shape(eps_cfg, cfg.resolution, cfg.radius_R,
                     np.random.default_rng([cfg.seed, epsilon_index, replicate, group, i]))
        for i in range(cfg.n_per_group)
    ]


def _run_cell(cfg: ExperimentConfig, epsilon_index: int, replicate: int, methods: Sequence[str]) -> Dict[str, Tuple[float, bool]]:
    epsilon = cfg.epsilons[epsilon_index]
    shapes = (cohort(cfg, epsilon_index, replicate, 0, 0.0)
              + cohort(cfg, epsilon_index, replicate, 1, epsilon))

    dirs, levels = cfg.directions, cfg.levels
    curves = [euler_curves(shape, dirs) for shape in shapes]

    labels = GroupLabels.from_sizes(cfg.n_per_group, cfg.n_per_group)
    test_config = cfg.test_config(get_derived_seed(cfg.seed, epsilon_index, replicate))

    outcome = {}
    for method in methods:
        to_matrix = sect_from_curves if method == SECT else ect_from_curves
        dist = pairwise_distances([to_matrix(shape_curves, dirs, levels) for shape_curves in curves])
        result = permutation_test(dist, labels, test_config)
        outcome[method] = (result.p_value, result.rejected)

    logging.info(f'epsilon={epsilon} replicate={replicate}: '
                 + ', '.join(f'{method.upper()} p={p_value:.4g}' for method, (p_value, _) in outcome.items()))

    return outcome


def run_experiments(cfg: ExperimentConfig, methods: Sequence[str] = (SECT, ECT)) -> Dict[str, RejectionTable]:
    """
    Function to run the rejection-rate experiment for several methods on the same shapes.

    Every (epsilon, replicate) cell draws its own two groups, turns them into Euler curves once
    and runs one permutation test per method with a seed shared by the methods.
    """

    for method in methods:
        if method not in TRANSFORM_MODES.__members__:
            raise ConfigurationError(f'Method {method!r} is not supported!')

    cells = [(e, r) for e in range(len(cfg.epsilons)) for r in range(cfg.replicates)]
    logging.info(f'Running {len(cells)} cells of {2 * cfg.n_per_group} shapes for {", ".join(methods)}.')

    with Parallel(n_jobs=cfg.n_jobs) as parallel:
        outcomes = parallel(delayed(_run_cell)(cfg, e, r, tuple(methods)) for e, r in cells)

    tables = {}
    for method in methods:
        p_values = np.array([outcome[method][0] for outcome in outcomes]).reshape(len(cfg.epsilons), cfg.replicates)
        rejections = np.array([outcome[method][1] for outcome in outcomes]).reshape(len(cfg.epsilons), cfg.replicates)
        tables[method] = RejectionTable(method=method, epsilons=cfg.epsilons, p_values=p_values, rejections=rejections)
        logging.info(f'{method.upper()} rejection rates: '
                     + ', '.join(f'{epsilon}: {rate:.2f}' for epsilon, rate in zip(cfg.epsilons, tables[method].rates)))

    return tables


def run_experiment(cfg: ExperimentConfig, method: str) -> RejectionTable:
    return run_experiments(cfg, (method,))[method]


def example_sect_curves(cfg: ExperimentConfig, epsilons: Sequence[float] = None) -> pl.DataFrame:
    """
    Function to get plot data: the SECT curves in directions (1, 0) and (0, 1) of one seeded
    shape per epsilon, on the experiment's level grid.
    """

    epsilons = cfg.epsilons if epsilons is None else tuple(epsilons)
    dirs = directions_from_angles([0.0, math.pi / 2.0])
    levels = cfg.levels

    frames = []
    for epsilon_index, epsilon in enumerate(epsilons):
        shape = sample_shape(cfg.epsilon_config(epsilon), cfg.resolution, cfg.radius_R,
                             np.random.default_rng([cfg.seed, epsilon_index, EXAMPLE_GROUP]))
        for angle, curve in zip(dirs.angles, euler_curves(shape, dirs)):
            frames.append(pl.DataFrame({
                'epsilon': [float(epsilon)] * len(levels),
                'angle': [float(angle)] * len(levels),
                'level': levels.levels.tolist(),
                'sect': sect_curve(curve, levels).tolist(),
            }))

    return pl.concat(frames)
