import logging
import os
from typing import List, Optional, Union

from joblib import Parallel, delayed

from sectflow.constants.types import (BOTH, DEFAULT_DIRECTIONS,
                                      DEFAULT_LEVELS, DEFAULT_RADIUS,
                                      DEFAULT_THRESHOLD, ECT, SECT,
                                      TRANSFORM_MODES)
from sectflow.constants.variables import SECTFLOW_THREADS
from sectflow.exceptions import ConfigurationError
from sectflow.shapes.shape import (DirectionGrid, directions_from_angles,
                                   uniform_directions, uniform_levels)
from sectflow.task_generators.transform.types import (MATRIX_FILE,
                                                      MODE_MATRIX_FILE)
from sectflow.transforms.transform import (ect_from_curves, euler_curves,
                                           sect_from_curves)
from sectflow.utilities.file import write_manifest
from sectflow.utilities.general import get_n_jobs
from sectflow.utilities.image import get_image_files, read_shape
from sectflow.utilities.pandas import write_matrix


class TransformGenerator:
    """
    Constructor arguments:
        config (Required[dict]):
            Flat transform settings: `inputs` (image files or directories) and `out` (output
            directory) are required; `directions` or `angles`, `levels`, `radius`, `pitch`,
            `threshold`, `mode` and `threads` are optional.
        **kwargs:
            Additional keyword arguments.
    """

    def __init__(self, config: dict, **kwargs) -> None:
        self.task_type   : str                        = config['type']
        self.inputs      : Union[str, List[str]]      = config['inputs']
        self.directions  : Optional[int]              = config.get('directions')
        self.angles      : Optional[List[float]]      = config.get('angles')
        self.levels      : int                        = config.get('levels', DEFAULT_LEVELS)
        self.radius_R    : float                      = config.get('radius', DEFAULT_RADIUS)
        self.pixel_pitch : Optional[float]            = config.get('pitch')
        self.threshold   : float                      = config.get('threshold', DEFAULT_THRESHOLD)
        self.mode        : str                        = config.get('mode', SECT)
        self.out         : str                        = config['out']
        self.n_jobs      : int                        = get_n_jobs(config.get('threads', SECTFLOW_THREADS))
        self.config      : dict                       = config

        if isinstance(self.inputs, str):
            self.inputs = [self.inputs]

        if self.directions is not None and self.angles is not None:
            raise ConfigurationError('Give either directions or angles, not both!')
        if self.directions is None and self.angles is None:
            self.directions = DEFAULT_DIRECTIONS

        if self.mode not in TRANSFORM_MODES.__members__ and self.mode != BOTH:
            raise ConfigurationError(f'Transform mode {self.mode!r} is not supported!')

    def __generate_direction_grid(self) -> DirectionGrid:
        if self.angles is not None:
            return directions_from_angles(self.angles)

        return uniform_directions(self.directions)

    def __collect_images(self) -> List[str]:
        files = []
        for path in self.inputs:
            if os.path.isdir(path):
                files.extend(get_image_files(path))
            elif os.path.exists(path):
                files.append(path)
            else:
                raise FileNotFoundError(f'Input {path} does not exist!')

        if not files:
            raise FileNotFoundError(f'No image found in {", ".join(self.inputs)}!')

        stems = [os.path.splitext(os.path.basename(path))[0] for path in files]
        if len(set(stems)) != len(stems):
            raise ConfigurationError('Input images must have distinct file names.')

        return files

    def __generate_target(self, mode: str, stem: str) -> str:
        if self.mode == BOTH:
            return os.path.join(self.out, MODE_MATRIX_FILE.substitute(mode=mode, stem=stem))

        return os.path.join(self.out, MATRIX_FILE.substitute(stem=stem))

    def generate_tasks(self) -> List[str]:
        """
        Function to transform every input image and write one matrix CSV per image and mode,
        plus a manifest.
        """

        files = self.__collect_images()
        shapes = [read_shape(path, self.threshold, self.radius_R, self.pixel_pitch) for path in files]

        dirs = self.__generate_direction_grid()
        levels = uniform_levels(self.levels, 2.0 * self.radius_R)

        logging.info(f'Sweeping {len(shapes)} shapes over {len(dirs)} directions.')
        with Parallel(n_jobs=self.n_jobs) as parallel:
            curves = parallel(delayed(euler_curves)(shape, dirs) for shape in shapes)

        modes = [ECT, SECT] if self.mode == BOTH else [self.mode]
        outputs = []
        for path, shape_curves in zip(files, curves):
            stem = os.path.splitext(os.path.basename(path))[0]
            for mode in modes:
                to_matrix = sect_from_curves if mode == SECT else ect_from_curves
                outputs.append(write_matrix(to_matrix(shape_curves, dirs, levels), self.__generate_target(mode, stem)))

        write_manifest(self.out, self.task_type, self.config, inputs=files, outputs=outputs)

        return outputs
