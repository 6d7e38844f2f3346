import logging
import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np
from scipy.spatial import cKDTree

from sectflow.constants.types import (ARC_REFINEMENT_TOLERANCE, ARC_SAMPLES,
                                      ARM_CENTER_X, MAX_EPSILON,
                                      MIN_RESOLUTION, NOISE_MEAN, NOISE_SD,
                                      SIMULATION_RADIUS, TUBE_RADIUS)
from sectflow.exceptions import ConfigurationError, InvalidArgumentError
from sectflow.shapes.shape import Frame, GridShape

GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class EpsilonConfig:
    epsilon    : float = 0.0
    noise_sd   : float = NOISE_SD
    noise_mean : float = NOISE_MEAN

    def __post_init__(self) -> None:
        if not 0 <= self.epsilon <= MAX_EPSILON:
            raise ConfigurationError(f'epsilon must lie in [0, {MAX_EPSILON}], got {self.epsilon!r}.')
        if self.noise_sd < 0:
            raise ConfigurationError(f'noise_sd must be nonnegative, got {self.noise_sd!r}.')
        if not self.noise_mean > 0:
            raise ConfigurationError(f'noise_mean must be positive, got {self.noise_mean!r}.')


@dataclass(frozen=True)
class Arm:
    """
    Elliptic arc {(center_x + a cos t, b sin t) : angle_lo <= t <= angle_hi}.
    """

    center_x : float
    axis_a   : float
    axis_b   : float
    angle_lo : float
    angle_hi : float

    def __post_init__(self) -> None:
        if not self.angle_lo < self.angle_hi:
            raise InvalidArgumentError(f'Arc angles must satisfy lo < hi, got [{self.angle_lo}, {self.angle_hi}].')
        if not (self.axis_a > 0 and self.axis_b > 0):
            raise InvalidArgumentError(f'Arc axes must be positive, got a={self.axis_a}, b={self.axis_b}.')

    def points(self, t: np.ndarray) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        return np.stack([self.center_x + self.axis_a * np.cos(t), self.axis_b * np.sin(t)], axis=-1)


@dataclass(frozen=True)
class ArcSpec:
    arms        : Tuple[Arm, Arm]
    tube_radius : float = TUBE_RADIUS

    def __post_init__(self) -> None:
        if not self.tube_radius > 0:
            raise InvalidArgumentError(f'tube_radius must be positive, got {self.tube_radius!r}.')


def _draw_axis(rng: np.random.Generator, cfg: EpsilonConfig, name: str) -> float:
    while True:
        value = float(rng.normal(cfg.noise_mean, cfg.noise_sd))
        if value > 0:
            return value
        logging.warning(f'Resampling nonpositive axis {name} = {value!r}.')


def sample_arcspec(cfg: EpsilonConfig, rng: np.random.Generator) -> ArcSpec:
    """
    Function to draw one shape skeleton: arm 1 around (2/5, 0) over [(1 - eps) pi / 5, (9 + eps) pi / 5],
    arm 2 around (-2/5, 0) over [6 pi / 5, 14 pi / 5], all four axes i.i.d. N(noise_mean, noise_sd^2).
    """

    axis_a_1 = _draw_axis(rng, cfg, 'a_1')
    axis_a_2 = _draw_axis(rng, cfg, 'a_2')
    axis_b_1 = _draw_axis(rng, cfg, 'b_1')
    axis_b_2 = _draw_axis(rng, cfg, 'b_2')

    arm_one = Arm(
        center_x=ARM_CENTER_X,
        axis_a=axis_a_1,
        axis_b=axis_b_1,
        angle_lo=(1.0 - cfg.epsilon) * math.pi / 5.0,
        angle_hi=(9.0 + cfg.epsilon) * math.pi / 5.0
    )
    arm_two = Arm(
        center_x=-ARM_CENTER_X,
        axis_a=axis_a_2,
        axis_b=axis_b_2,
        angle_lo=6.0 * math.pi / 5.0,
        angle_hi=14.0 * math.pi / 5.0
    )

    return ArcSpec(arms=(arm_one, arm_two))


def _arm_distance(arm: Arm, points: np.ndarray, samples: int, window: Tuple[float, float]) -> np.ndarray:
    """
    Function to get the distance from every point to one arc.

    Distances come from a KD-tree over `samples` parameter samples. A coarse distance
    overestimates the true one by at most the sample spacing, so only points whose coarse
    distance falls in (window[0], window[1] + spacing] are refined by golden-section search on
    the parameter bracket around their nearest sample.
    """

    t = np.linspace(arm.angle_lo, arm.angle_hi, samples)
    curve = arm.points(t)
    coarse, nearest = cKDTree(curve).query(points)

    spacing = float(np.max(np.hypot(*np.diff(curve, axis=0).T)))
    refine = np.flatnonzero((coarse > window[0]) & (coarse <= window[1] + spacing))
    if refine.size == 0:
        return coarse

    step = t[1] - t[0]
    lo = np.maximum(t[nearest[refine]] - step, arm.angle_lo)
    hi = np.minimum(t[nearest[refine]] + step, arm.angle_hi)
    targets = points[refine]

    def squared(u: np.ndarray) -> np.ndarray:
        return np.sum((arm.points(u) - targets) ** 2, axis=-1)

    left = hi - GOLDEN * (hi - lo)
    right = lo + GOLDEN * (hi - lo)
    f_left, f_right = squared(left), squared(right)
    while np.max(hi - lo) > ARC_REFINEMENT_TOLERANCE:
        move_right = f_left > f_right
        lo = np.where(move_right, left, lo)
        hi = np.where(move_right, hi, right)
        new_left = np.where(move_right, right, hi - GOLDEN * (hi - lo))
        new_right = np.where(move_right, lo + GOLDEN * (hi - lo), left)
        f_new_left = np.where(move_right, f_right, squared(new_left))
        f_new_right = np.where(move_right, squared(new_right), f_left)
        left, right, f_left, f_right = new_left, new_right, f_new_left, f_new_right

    refined = np.sqrt(np.minimum(np.minimum(f_left, f_right), np.minimum(squared(lo), squared(hi))))

    distances = coarse.copy()
    distances[refine] = np.minimum(coarse[refine], refined)

    return distances


def arc_distance(spec: ArcSpec, points: np.ndarray, samples: int = ARC_SAMPLES, refine_all: bool = False) -> np.ndarray:
    """
    Function to get the distance from points to the arc set S.

    By default only distances that decide tube membership are refined; everything else keeps
    the sampled (upper bound) distance.
    """

    points = np.asarray(points, dtype=float).reshape(-1, 2)
    window = (-np.inf, np.inf) if refine_all else (spec.tube_radius, spec.tube_radius)

    return np.min([_arm_distance(arm, points, samples, window) for arm in spec.arms], axis=0)


def simulation_frame(resolution: int, radius_R: float = SIMULATION_RADIUS) -> Frame:
    """
    Function to get the frame whose resolution x resolution pixels tile [-R, R]^2.
    """

    if resolution < MIN_RESOLUTION:
        raise ConfigurationError(f'resolution must be at least {MIN_RESOLUTION}, got {resolution}.')

    pitch = 2.0 * radius_R / resolution

    return Frame(radius_R=radius_R, pixel_pitch=pitch, origin=(-radius_R + pitch / 2.0, -radius_R + pitch / 2.0))


def rasterize(spec: ArcSpec, resolution: int, radius_R: float = SIMULATION_RADIUS) -> GridShape:
    """
    Function to rasterize the tube {x : dist(x, S) <= tube_radius}: a pixel is foreground when
    its center is within the tube.
    """

    frame = simulation_frame(resolution, radius_R)
    centers = frame.origin[0] + np.arange(resolution) * frame.pixel_pitch
    xs, ys = np.meshgrid(centers, frame.origin[1] + np.arange(resolution) * frame.pixel_pitch, indexing='ij')

    distances = arc_distance(spec, np.column_stack([xs.ravel(), ys.ravel()]))
    mask = (distances <= spec.tube_radius).reshape(resolution, resolution)

    return GridShape(mask=mask, frame=frame)


def sample_shape(cfg: EpsilonConfig, resolution: int, radius_R: float, rng: np.random.Generator) -> GridShape:
    return rasterize(sample_arcspec(cfg, rng), resolution, radius_R)
