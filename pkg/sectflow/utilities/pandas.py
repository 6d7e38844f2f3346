import logging
import os
from typing import List, Optional

import numpy as np
import pandas as pd

from sectflow.constants.types import (ANGLE_HEADER, ECT, FLOAT_FORMAT,
                                      MATRIX_SUFFIX, SECT, TRANSFORM_MODES)
from sectflow.exceptions import InvalidArgumentError, ParseError
from sectflow.shapes.shape import LevelGrid, directions_from_angles
from sectflow.transforms.transform import (ECTMatrix, SECTMatrix,
                                           TransformMatrix)
from sectflow.utilities.file import write_atomic
from sectflow.utilities.general import get_config_files


def get_matrix_dataframe(matrix: TransformMatrix) -> pd.DataFrame:
    """
    Function to lay a transform matrix out as a dataframe: an `angle` column followed by one
    column per level, one row per direction.
    """

    dataframe = pd.DataFrame(matrix.values, columns=[FLOAT_FORMAT % level for level in matrix.level_grid.levels])
    dataframe.insert(0, ANGLE_HEADER, np.asarray(matrix.direction_grid.angles, dtype=np.float64))

    return dataframe


def write_matrix(matrix: TransformMatrix, path: str) -> str:
    dataframe = get_matrix_dataframe(matrix)

    return write_atomic(
        path,
        lambda target: dataframe.to_csv(target, index=False, float_format=FLOAT_FORMAT, lineterminator='\n')
    )


def read_matrix(path: str, mode: str = SECT, horizon_T: Optional[float] = None) -> TransformMatrix:
    """
    Function to read a matrix CSV back into an ECT or SECT matrix.

    The level grid's horizon defaults to the last level when `horizon_T` is not given.
    """

    if mode not in TRANSFORM_MODES.__members__:
        raise InvalidArgumentError(f'Transform mode {mode!r} is not supported!')

    try:
        dataframe = pd.read_csv(path, dtype=str, keep_default_na=False)
    except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as error:
        raise ParseError(f'Failed to parse matrix file {path}: {error}') from error

    if len(dataframe.columns) < 2 or dataframe.columns[0] != ANGLE_HEADER or len(dataframe) < 1:
        raise ParseError(f'Matrix file {path} must start with an {ANGLE_HEADER!r} column followed by levels.')

    try:
        levels = np.array([float(header) for header in dataframe.columns[1:]])
        angles = dataframe[ANGLE_HEADER].astype(np.float64).to_numpy()
        values = dataframe.iloc[:, 1:].to_numpy().astype(np.int64 if mode == ECT else np.float64)
    except ValueError as error:
        raise ParseError(f'Matrix file {path} holds a non-numeric entry: {error}') from error

    if not (np.isfinite(levels).all() and np.isfinite(angles).all() and np.isfinite(values).all()):
        raise ParseError(f'Matrix file {path} holds a non-finite entry.')

    try:
        level_grid = LevelGrid(levels=levels, horizon_T=levels[-1] if horizon_T is None else horizon_T)
        direction_grid = directions_from_angles(angles)
    except InvalidArgumentError as error:
        raise ParseError(f'Matrix file {path} has an invalid grid: {error}') from error

    matrix_type = ECTMatrix if mode == ECT else SECTMatrix

    return matrix_type(values=values, direction_grid=direction_grid, level_grid=level_grid)


def read_matrices(directory: str, mode: str = SECT, horizon_T: Optional[float] = None) -> List[TransformMatrix]:
    """
    Function to read every matrix CSV in a directory, in sorted file-name order.
    """

    if not os.path.isdir(directory):
        raise FileNotFoundError(f'Matrix directory {directory} does not exist!')

    files = get_config_files(directory, MATRIX_SUFFIX)
    if not files:
        raise FileNotFoundError(f'No matrix file found in {directory}!')

    logging.info(f'Reading {len(files)} matrices from {directory}.')

    return [read_matrix(path, mode=mode, horizon_T=horizon_T) for path in files]
