import logging
import os
from typing import Optional

import polars as pl

from sectflow.constants.types import (DEFAULT_ALPHA, DEFAULT_PERMUTATIONS,
                                      DEFAULT_REPEATS, DEFAULT_SEED,
                                      MATRIX_SUFFIX, SECT, TRANSFORM_MODES)
from sectflow.constants.variables import SECTFLOW_THREADS
from sectflow.exceptions import ConfigurationError
from sectflow.statistics.metrics import pairwise_distances
from sectflow.statistics.nhst import TestConfig, split_half_test
from sectflow.task_generators.split_test.types import (RESULT_MESSAGE,
                                                       SPLIT_P_VALUES_FILE)
from sectflow.utilities.file import write_manifest
from sectflow.utilities.general import get_config_files, get_n_jobs
from sectflow.utilities.pandas import read_matrices
from sectflow.utilities.polars import dataframe_to_file


class SplitTestGenerator:
    """
    Constructor arguments:
        config (Required[dict]):
            Flat split settings: the `group` matrix directory is required; `repeats`, `mode`,
            `alpha`, `permutations`, `seed`, `radius`, `out` (directory) and `threads` are optional.
        **kwargs:
            Additional keyword arguments.
    """

    def __init__(self, config: dict, **kwargs) -> None:
        self.task_type        : str             = config['type']
        self.group            : str             = config['group']
        self.repeats          : int             = config.get('repeats', DEFAULT_REPEATS)
        self.mode             : str             = config.get('mode', SECT)
        self.alpha            : float           = config.get('alpha', DEFAULT_ALPHA)
        self.num_permutations : int             = config.get('permutations', DEFAULT_PERMUTATIONS)
        self.seed             : int             = config.get('seed', DEFAULT_SEED)
        self.radius_R         : Optional[float] = config.get('radius')
        self.out              : Optional[str]   = config.get('out')
        self.n_jobs           : int             = get_n_jobs(config.get('threads', SECTFLOW_THREADS))
        self.config           : dict            = config

        if self.mode not in TRANSFORM_MODES.__members__:
            raise ConfigurationError(f'Test mode {self.mode!r} is not supported!')
        if int(self.repeats) != self.repeats or self.repeats < 1:
            raise ConfigurationError(f'repeats must be a positive integer, got {self.repeats!r}.')

        self.test_config = TestConfig(
            alpha=self.alpha,
            num_permutations=self.num_permutations,
            seed=self.seed,
            n_jobs=self.n_jobs
        )

    def generate_tasks(self) -> dict:
        """
        Function to split one matrix collection into random halves and test them against each other.
        """

        horizon_T = None if self.radius_R is None else 2.0 * self.radius_R
        matrices = read_matrices(self.group, mode=self.mode, horizon_T=horizon_T)

        split = split_half_test(pairwise_distances(matrices), self.test_config, int(self.repeats))

        summary = {
            'mean': split.mean,
            'sd': split.sd,
            'repeats': int(self.repeats),
            'size': len(matrices),
            'alpha': self.alpha,
            'permutations': self.num_permutations,
            'seed': self.seed,
            'mode': self.mode,
        }
        logging.info(RESULT_MESSAGE.substitute(summary))

        if self.out is not None:
            target = os.path.join(self.out, SPLIT_P_VALUES_FILE)
            dataframe = pl.DataFrame({
                'repeat': list(range(len(split.p_values))),
                'p_value': split.p_values.tolist(),
            })
            dataframe_to_file(dataframe, target)
            write_manifest(self.out, self.task_type, self.config,
                           inputs=get_config_files(self.group, MATRIX_SUFFIX), outputs=[target])

        return summary
