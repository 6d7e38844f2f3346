import logging
from dataclasses import dataclass
from typing import List, Sequence, Tuple, Union

import numpy as np
from joblib import Parallel, delayed

from sectflow.constants.types import HEIGHT_DECIMALS, SECT, TRANSFORM_MODES
from sectflow.exceptions import InvalidArgumentError, ShapeExceedsBallError
from sectflow.shapes.shape import Direction, DirectionGrid, GridShape, LevelGrid
from sectflow.transforms.complex import (CubicalComplex, build_complex,
                                         euler_characteristic)


@dataclass(frozen=True, eq=False)
class StepFunction:
    """
    Exact, right-continuous Euler characteristic curve t -> chi(K_t) on [0, T].

    values[0] is the leading value on [0, breakpoints[0]), values[k + 1] the value on
    [breakpoints[k], breakpoints[k + 1]) and values[-1] the trailing value on [breakpoints[-1], T].
    """

    breakpoints : np.ndarray
    values      : np.ndarray
    horizon_T   : float

    def __post_init__(self) -> None:
        if len(self.values) != len(self.breakpoints) + 1:
            raise InvalidArgumentError('A step function needs exactly one more value than breakpoints.')
        if len(self.breakpoints) and (self.breakpoints[0] < 0 or self.breakpoints[-1] > self.horizon_T):
            raise InvalidArgumentError(f'Breakpoints must lie in [0, {self.horizon_T}].')
        if (np.diff(self.breakpoints) <= 0).any():
            raise InvalidArgumentError('Breakpoints must be strictly increasing.')

    @property
    def leading_value(self) -> int:
        return int(self.values[0])

    @property
    def trailing_value(self) -> int:
        return int(self.values[-1])

    def __check_levels(self, levels: np.ndarray) -> np.ndarray:
        levels = np.asarray(levels, dtype=float)
        if (levels < 0).any() or (levels > self.horizon_T).any():
            raise InvalidArgumentError(f'Levels must lie in [0, {self.horizon_T}].')
        return levels

    def value_at(self, levels: np.ndarray) -> np.ndarray:
        levels = self.__check_levels(levels)
        return self.values[np.searchsorted(self.breakpoints, levels, side='right')]

    def integral(self, levels: np.ndarray) -> np.ndarray:
        """
        Function to get the exact integral of the curve over [0, t] for every t in `levels`.
        """

        levels = self.__check_levels(levels)

        knots = np.concatenate([[0.0], self.breakpoints])
        lengths = np.diff(knots)
        knot_integrals = np.concatenate([[0.0], np.cumsum(self.values[:-1] * lengths)])

        index = np.searchsorted(self.breakpoints, levels, side='right')

        return knot_integrals[index] + self.values[index] * (levels - knots[index])


@dataclass(frozen=True, eq=False)
class ECTMatrix:
    values         : np.ndarray
    direction_grid : DirectionGrid
    level_grid     : LevelGrid

    def __post_init__(self) -> None:
        values = np.array(self.values, dtype=np.int64)
        if values.shape != (len(self.direction_grid), len(self.level_grid)):
            raise InvalidArgumentError(
                f'ECT values of shape {values.shape} do not match the {len(self.direction_grid)}x{len(self.level_grid)} grids.')
        values.flags.writeable = False
        object.__setattr__(self, 'values', values)


@dataclass(frozen=True, eq=False)
class SECTMatrix:
    values         : np.ndarray
    direction_grid : DirectionGrid
    level_grid     : LevelGrid

    def __post_init__(self) -> None:
        values = np.array(self.values, dtype=np.float64)
        if values.shape != (len(self.direction_grid), len(self.level_grid)):
            raise InvalidArgumentError(
                f'SECT values of shape {values.shape} do not match the {len(self.direction_grid)}x{len(self.level_grid)} grids.')
        values.flags.writeable = False
        object.__setattr__(self, 'values', values)


TransformMatrix = Union[ECTMatrix, SECTMatrix]


def ec_curve(cubical: CubicalComplex, direction: Direction, radius_R: float) -> StepFunction:
    """
    Function to sweep the sublevel filtration {x : x . nu <= t - R} of a complex in one direction.

    Every cell enters at the largest height of its vertices (lower-star rule); cells that tie
    are added together before the value is recorded.
    """

    horizon_T = 2.0 * radius_R
    heights = np.round(cubical.vertices @ direction.as_array() + radius_R, HEIGHT_DECIMALS)

    outside = np.flatnonzero((heights < 0) | (heights > horizon_T))
    if outside.size:
        vertex = int(outside[0])
        raise ShapeExceedsBallError(
            location=tuple(float(coordinate) for coordinate in cubical.vertices[vertex]),
            norm=float(np.hypot(*cubical.vertices[vertex])),
            radius=radius_R,
            kind='vertex')

    filtrations = np.concatenate([
        heights,
        heights[cubical.edges].max(axis=1),
        heights[cubical.faces].max(axis=1),
    ])
    signs = np.concatenate([
        np.ones(len(cubical.vertices), dtype=np.int64),
        -np.ones(len(cubical.edges), dtype=np.int64),
        np.ones(len(cubical.faces), dtype=np.int64),
    ])

    breakpoints, inverse = np.unique(filtrations, return_inverse=True)
    jumps = np.bincount(inverse, weights=signs, minlength=len(breakpoints)).astype(np.int64)
    values = np.concatenate([[0], np.cumsum(jumps)]).astype(np.int64)

    return StepFunction(breakpoints=breakpoints, values=values, horizon_T=horizon_T)


def sample_ec(curve: StepFunction, levels: LevelGrid) -> np.ndarray:
    return curve.value_at(levels.levels).astype(np.int64)


def sect_curve(curve: StepFunction, levels: LevelGrid) -> np.ndarray:
    """
    Function to get SECT(t_q) = I(t_q) - (t_q / T) * I(T), I being the exact running integral.
    """

    t = levels.levels
    total = curve.integral(np.array([curve.horizon_T]))[0]

    return curve.integral(t) - (t / curve.horizon_T) * total


def euler_curves(shape: GridShape, dirs: DirectionGrid) -> List[StepFunction]:
    """
    Function to get one exact Euler characteristic curve per direction.
    """

    cubical = build_complex(shape)
    curves = [ec_curve(cubical, direction, shape.frame.radius_R) for direction in dirs.directions]

    logging.debug(f'Swept {len(curves)} directions over {cubical.num_cells} cells, chi = {euler_characteristic(cubical)}.')

    return curves


def _check_horizon(shape: GridShape, levels: LevelGrid) -> None:
    if levels.horizon_T != shape.frame.horizon_T:
        raise InvalidArgumentError(
            f'Level grid horizon {levels.horizon_T} does not match 2R = {shape.frame.horizon_T}.')


def ect_from_curves(curves: Sequence[StepFunction], dirs: DirectionGrid, levels: LevelGrid) -> ECTMatrix:
    return ECTMatrix(
        values=np.vstack([sample_ec(curve, levels) for curve in curves]),
        direction_grid=dirs,
        level_grid=levels
    )


def sect_from_curves(curves: Sequence[StepFunction], dirs: DirectionGrid, levels: LevelGrid) -> SECTMatrix:
    return SECTMatrix(
        values=np.vstack([sect_curve(curve, levels) for curve in curves]),
        direction_grid=dirs,
        level_grid=levels
    )


def ect(shape: GridShape, dirs: DirectionGrid, levels: LevelGrid) -> ECTMatrix:
    _check_horizon(shape, levels)
    return ect_from_curves(euler_curves(shape, dirs), dirs, levels)


def sect(shape: GridShape, dirs: DirectionGrid, levels: LevelGrid) -> SECTMatrix:
    _check_horizon(shape, levels)
    return sect_from_curves(euler_curves(shape, dirs), dirs, levels)


def both_transforms(shape: GridShape, dirs: DirectionGrid, levels: LevelGrid) -> Tuple[ECTMatrix, SECTMatrix]:
    """
    Function to get the ECT and SECT of a shape from a single sweep.
    """

    _check_horizon(shape, levels)
    curves = euler_curves(shape, dirs)

    return ect_from_curves(curves, dirs, levels), sect_from_curves(curves, dirs, levels)


def transform_shapes(shapes: Sequence[GridShape], dirs: DirectionGrid, levels: LevelGrid,
                     mode: str = SECT, n_jobs: int = 1) -> List[TransformMatrix]:
    """
    Function to transform many shapes in parallel, keeping the input order.
    """

    if mode not in TRANSFORM_MODES.__members__:
        raise InvalidArgumentError(f'Transform mode {mode!r} is not supported!')

    function = sect if mode == SECT else ect

    logging.info(f'Computing {mode.upper()} of {len(shapes)} shapes over {len(dirs)} directions and {len(levels)} levels.')
    with Parallel(n_jobs=n_jobs) as parallel:
        return list(parallel(delayed(function)(shape, dirs, levels) for shape in shapes))
