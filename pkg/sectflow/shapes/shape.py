import logging
import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Tuple

import numpy as np

from sectflow.constants.types import SNAP_TO_ZERO, UNIT_NORM_TOLERANCE
from sectflow.exceptions import (EmptyShapeError, InvalidArgumentError,
                                 ShapeExceedsBallError)


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.array(array, copy=True)
    array.flags.writeable = False
    return array


@dataclass(frozen=True)
class Frame:
    """
    Physical embedding of a pixel grid.

    Attributes:
        radius_R (float):
            Radius of the ball B(0, R) that must strictly contain the shape.
        pixel_pitch (float):
            Physical width of one (square) pixel.
        origin (Tuple[float, float]):
            Physical coordinates of the center of pixel (0, 0).
    """

    radius_R    : float
    pixel_pitch : float
    origin      : Tuple[float, float] = (0.0, 0.0)

    def __post_init__(self) -> None:
        if not (self.radius_R > 0 and math.isfinite(self.radius_R)):
            raise InvalidArgumentError(f'radius_R must be a positive real, got {self.radius_R!r}.')
        if not (self.pixel_pitch > 0 and math.isfinite(self.pixel_pitch)):
            raise InvalidArgumentError(f'pixel_pitch must be a positive real, got {self.pixel_pitch!r}.')
        object.__setattr__(self, 'origin', (float(self.origin[0]), float(self.origin[1])))

    @property
    def horizon_T(self) -> float:
        return 2.0 * self.radius_R


@dataclass(frozen=True, eq=False)
class GridShape:
    """
    Binary pixel shape embedded in the plane.

    mask[i, j] is pixel (i, j), i along x and j along y. Pixel (i, j) is the closed
    square with corners origin + (i ± 1/2, j ± 1/2) * pitch.
    """

    mask  : np.ndarray
    frame : Frame

    def __post_init__(self) -> None:
        mask = np.asarray(self.mask)
        if mask.ndim != 2 or mask.shape[0] < 1 or mask.shape[1] < 1:
            raise InvalidArgumentError(f'mask must be a non-empty 2-D array, got shape {mask.shape}.')

        mask = mask.astype(bool)
        if not mask.any():
            raise EmptyShapeError('Shape has no foreground pixel!')

        object.__setattr__(self, 'mask', _frozen(mask))
        validate_in_ball(self)

    @property
    def width(self) -> int:
        return int(self.mask.shape[0])

    @property
    def height(self) -> int:
        return int(self.mask.shape[1])

    def pixel_center(self, i: int, j: int) -> np.ndarray:
        pitch = self.frame.pixel_pitch
        return np.array([self.frame.origin[0] + i * pitch, self.frame.origin[1] + j * pitch])

    def corners(self, i: int, j: int) -> np.ndarray:
        """
        Function to get the four corner vertices of pixel (i, j), counter-clockwise from lower-left.
        """

        pitch = self.frame.pixel_pitch
        ox, oy = self.frame.origin
        offsets = np.array([(-0.5, -0.5), (0.5, -0.5), (0.5, 0.5), (-0.5, 0.5)])

        return np.column_stack([ox + (i + offsets[:, 0]) * pitch, oy + (j + offsets[:, 1]) * pitch])

    def foreground_corners(self) -> Tuple[np.ndarray, np.ndarray]:
        """
        Function to get the pixel indices and the physical corners of every foreground pixel.

        Returns the (M, 2) pixel indices and an (M, 4, 2) array of corners.
        """

        pixels = np.argwhere(self.mask)
        pitch = self.frame.pixel_pitch
        ox, oy = self.frame.origin
        offsets = np.array([(-0.5, -0.5), (0.5, -0.5), (0.5, 0.5), (-0.5, 0.5)])

        xs = ox + (pixels[:, 0, None] + offsets[None, :, 0]) * pitch
        ys = oy + (pixels[:, 1, None] + offsets[None, :, 1]) * pitch

        return pixels, np.stack([xs, ys], axis=-1)

    def rotated90(self) -> 'GridShape':
        """
        Function to rotate the shape by +90 degrees about the physical origin.

        Exact only when the frame is symmetric about the origin, i.e. origin = -(n - 1) / 2 * pitch
        on both axes of a square grid.
        """

        if self.width != self.height or not np.isclose(self.frame.origin[0], self.frame.origin[1]):
            raise InvalidArgumentError('Only square grids with a diagonal origin can be rotated.')

        return GridShape(mask=np.rot90(self.mask), frame=self.frame)

    def shifted(self, di: int, dj: int) -> 'GridShape':
        """
        Function to translate the shape by (di, dj) whole pixels inside the same grid.
        """

        pixels = np.argwhere(self.mask) + np.array([di, dj])
        if (pixels < 0).any() or (pixels[:, 0] >= self.width).any() or (pixels[:, 1] >= self.height).any():
            raise InvalidArgumentError(f'Shift ({di}, {dj}) moves foreground outside the grid.')

        mask = np.zeros_like(self.mask)
        mask[pixels[:, 0], pixels[:, 1]] = True

        return GridShape(mask=mask, frame=self.frame)


@dataclass(frozen=True)
class Direction:
    components: Tuple[float, float]

    def __post_init__(self) -> None:
        x, y = (float(self.components[0]), float(self.components[1]))
        if abs(math.hypot(x, y) - 1.0) >= UNIT_NORM_TOLERANCE:
            raise InvalidArgumentError(f'Direction {self.components!r} is not unit-norm.')
        object.__setattr__(self, 'components', (x, y))

    @property
    def angle(self) -> float:
        return math.atan2(self.components[1], self.components[0]) % (2.0 * math.pi)

    def as_array(self) -> np.ndarray:
        return np.array(self.components)


@dataclass(frozen=True)
class DirectionGrid:
    directions : Tuple[Direction, ...]
    angles     : Optional[Tuple[float, ...]] = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if len(self.directions) < 1:
            raise InvalidArgumentError('A direction grid needs at least one direction.')
        object.__setattr__(self, 'directions', tuple(self.directions))
        if self.angles is None:
            object.__setattr__(self, 'angles', tuple(direction.angle for direction in self.directions))
        elif len(self.angles) != len(self.directions):
            raise InvalidArgumentError('Angles and directions must have the same length.')

    def __len__(self) -> int:
        return len(self.directions)

    def as_array(self) -> np.ndarray:
        """
        Function to get the (Gamma, 2) array of direction components.
        """

        return np.array([direction.components for direction in self.directions])


@dataclass(frozen=True, eq=False)
class LevelGrid:
    levels    : np.ndarray
    horizon_T : float

    def __post_init__(self) -> None:
        levels = np.asarray(self.levels, dtype=float).ravel()
        if not (self.horizon_T > 0 and math.isfinite(self.horizon_T)):
            raise InvalidArgumentError(f'horizon_T must be a positive real, got {self.horizon_T!r}.')
        if levels.size < 1:
            raise InvalidArgumentError('A level grid needs at least one level.')
        if levels[0] <= 0 or levels[-1] > self.horizon_T:
            raise InvalidArgumentError(f'Levels must lie in (0, {self.horizon_T}].')
        if (np.diff(levels) <= 0).any():
            raise InvalidArgumentError('Levels must be strictly increasing.')

        object.__setattr__(self, 'horizon_T', float(self.horizon_T))
        object.__setattr__(self, 'levels', _frozen(levels))

    def __len__(self) -> int:
        return int(self.levels.size)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LevelGrid):
            return NotImplemented
        return self.horizon_T == other.horizon_T and np.array_equal(self.levels, other.levels)

    def __hash__(self) -> int:
        return hash((self.horizon_T, self.levels.tobytes()))


def directions_from_angles(angles: Iterable[float]) -> DirectionGrid:
    """
    Function to build a direction grid from angles in radians.
    """

    angles = np.asarray(list(angles), dtype=float)
    if angles.size < 1:
        raise InvalidArgumentError('At least one angle is required.')

    components = np.column_stack([np.cos(angles), np.sin(angles)])
    # Exact zeros keep lattice heights tied for axis-aligned directions
    components[np.abs(components) < SNAP_TO_ZERO] = 0.0

    directions = tuple(Direction(components=(x, y)) for x, y in components)

    return DirectionGrid(directions=directions, angles=tuple(float(angle) for angle in angles))


def uniform_directions(count: int) -> DirectionGrid:
    """
    Function to get `count` directions evenly spaced over the full circle, starting at (1, 0).
    """

    if int(count) != count or count < 1:
        raise InvalidArgumentError(f'count must be a positive integer, got {count!r}.')

    return directions_from_angles(2.0 * np.pi * np.arange(int(count)) / int(count))


def half_circle_directions(count: int) -> DirectionGrid:
    """
    Function to get `count` directions evenly spaced over the upper half circle.

    With count = 4 this is the (cos((p - 1) pi / 4), sin((p - 1) pi / 4)) layout used by the simulations.
    """

    if int(count) != count or count < 1:
        raise InvalidArgumentError(f'count must be a positive integer, got {count!r}.')

    return directions_from_angles(np.pi * np.arange(int(count)) / int(count))


def uniform_levels(count: int, horizon_T: float) -> LevelGrid:
    """
    Function to get the levels t_q = q * T / count for q = 1..count.
    """

    if int(count) != count or count < 1:
        raise InvalidArgumentError(f'count must be a positive integer, got {count!r}.')
    if not horizon_T > 0:
        raise InvalidArgumentError(f'horizon_T must be positive, got {horizon_T!r}.')

    levels = np.arange(1, int(count) + 1) * float(horizon_T) / int(count)
    levels[-1] = float(horizon_T)

    return LevelGrid(levels=levels, horizon_T=float(horizon_T))


def validate_in_ball(shape: GridShape) -> None:
    """
    Function to check that every foreground corner vertex lies strictly inside B(0, R).
    """

    pixels, corners = shape.foreground_corners()
    norms = np.hypot(corners[..., 0], corners[..., 1])
    offenders = np.flatnonzero((norms >= shape.frame.radius_R).any(axis=1))

    if offenders.size:
        worst = offenders[np.argmax(norms[offenders].max(axis=1))]
        logging.debug(f'{offenders.size} foreground pixels exceed the ball of radius {shape.frame.radius_R}.')
        raise ShapeExceedsBallError(
            location=tuple(int(index) for index in pixels[worst]),
            norm=float(norms[worst].max()),
            radius=shape.frame.radius_R)


def centered_frame(width: int, height: int, radius_R: float, pixel_pitch: Optional[float] = None) -> Frame:
    """
    Function to get a frame that centers a width x height grid on the origin.

    Without an explicit pitch, the largest pitch whose full pixel box sits strictly inside the
    ball is used.
    """

    if width < 1 or height < 1:
        raise InvalidArgumentError(f'Grid size must be positive, got {width}x{height}.')

    if pixel_pitch is None:
        pixel_pitch = 0.999 * 2.0 * radius_R / math.hypot(width, height)

    origin = (-(width - 1) / 2.0 * pixel_pitch, -(height - 1) / 2.0 * pixel_pitch)

    return Frame(radius_R=radius_R, pixel_pitch=pixel_pitch, origin=origin)


def shape_from_mask(mask: np.ndarray, radius_R: float, pixel_pitch: Optional[float] = None) -> GridShape:
    """
    Function to embed a [x, y] indexed mask centered on the origin.
    """

    mask = np.asarray(mask)
    frame = centered_frame(mask.shape[0], mask.shape[1], radius_R=radius_R, pixel_pitch=pixel_pitch)

    return GridShape(mask=mask, frame=frame)
