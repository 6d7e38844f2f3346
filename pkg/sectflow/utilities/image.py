import logging
import os
from typing import List, Optional

import numpy as np
from PIL import Image, UnidentifiedImageError

from sectflow.constants.types import (DEFAULT_RADIUS, DEFAULT_THRESHOLD,
                                      IMAGE_EXTENSIONS)
from sectflow.exceptions import InvalidArgumentError, ParseError
from sectflow.shapes.shape import GridShape, shape_from_mask
from sectflow.utilities.file import write_atomic


def get_image_files(directory: str) -> List[str]:
    """
    Function to list the PGM and PNG files of a directory in sorted order.
    """

    if not os.path.isdir(directory):
        raise FileNotFoundError(f'Image directory {directory} does not exist!')

    return sorted(
        os.path.join(directory, filename)
        for filename in os.listdir(directory)
        if os.path.splitext(filename)[1].lower() in IMAGE_EXTENSIONS
    )


def _normalized_intensity(image: Image.Image) -> np.ndarray:
    if image.mode == '1':
        return np.asarray(image, dtype=np.float64)
    if image.mode in ('I;16', 'I;16B', 'I;16L', 'I'):
        return np.asarray(image, dtype=np.float64) / 65535.0
    if image.mode != 'L':
        logging.warning(f'Converting {image.mode} image to grayscale.')
        image = image.convert('L')

    return np.asarray(image, dtype=np.float64) / 255.0


def read_mask(path: str, threshold: float = DEFAULT_THRESHOLD) -> np.ndarray:
    """
    Function to read a PGM or PNG image as a boolean [x, y] mask.

    A pixel is foreground when its normalized intensity is at least `threshold`. Image row 0
    is the top of the picture, so rows are flipped to make y grow upwards.
    """

    if not 0 <= threshold <= 1:
        raise InvalidArgumentError(f'threshold must lie in [0, 1], got {threshold!r}.')

    try:
        with Image.open(path) as image:
            image.load()
            intensity = _normalized_intensity(image)
    except UnidentifiedImageError as error:
        raise ParseError(f'Failed to decode image {path}: {error}') from error

    return np.flipud(intensity >= threshold).T


def read_shape(path: str, threshold: float = DEFAULT_THRESHOLD, radius_R: float = DEFAULT_RADIUS,
               pixel_pitch: Optional[float] = None) -> GridShape:
    mask = read_mask(path, threshold)
    logging.info(f'Read {path}: {mask.shape[0]}x{mask.shape[1]} pixels, {int(mask.sum())} foreground.')

    return shape_from_mask(mask, radius_R=radius_R, pixel_pitch=pixel_pitch)


def write_mask(shape: GridShape, path: str) -> str:
    """
    Function to write a shape as a binary PGM, foreground white.
    """

    pixels = (np.flipud(shape.mask.T) * 255).astype(np.uint8)

    return write_atomic(path, lambda target: Image.fromarray(pixels).save(target, format='PPM'))
