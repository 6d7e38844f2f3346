import json
import logging
import os
from typing import Optional

from sectflow.constants.types import (DEFAULT_ALPHA, DEFAULT_PERMUTATIONS,
                                      DEFAULT_SEED, MATRIX_SUFFIX, SECT,
                                      TRANSFORM_MODES)
from sectflow.constants.variables import SECTFLOW_THREADS
from sectflow.exceptions import ConfigurationError
from sectflow.statistics.metrics import GroupLabels, pairwise_distances
from sectflow.statistics.nhst import TestConfig, permutation_test
from sectflow.task_generators.permutation_test.types import RESULT_MESSAGE
from sectflow.utilities.file import write_manifest, write_text_file
from sectflow.utilities.general import get_config_files, get_n_jobs
from sectflow.utilities.pandas import read_matrices


class PermutationTestGenerator:
    """
    Constructor arguments:
        config (Required[dict]):
            Flat test settings: `group1` and `group2` matrix directories are required; `mode`,
            `alpha`, `permutations`, `seed`, `radius`, `out` (JSON path) and `threads` are optional.
        **kwargs:
            Additional keyword arguments.
    """

    def __init__(self, config: dict, **kwargs) -> None:
        self.task_type        : str             = config['type']
        self.group_one        : str             = config['group1']
        self.group_two        : str             = config['group2']
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

        self.test_config = TestConfig(
            alpha=self.alpha,
            num_permutations=self.num_permutations,
            seed=self.seed,
            n_jobs=self.n_jobs
        )

    def generate_tasks(self) -> dict:
        """
        Function to test whether the two matrix collections come from the same distribution.
        """

        horizon_T = None if self.radius_R is None else 2.0 * self.radius_R
        first = read_matrices(self.group_one, mode=self.mode, horizon_T=horizon_T)
        second = read_matrices(self.group_two, mode=self.mode, horizon_T=horizon_T)

        dist = pairwise_distances(first + second)
        result = permutation_test(dist, GroupLabels.from_sizes(len(first), len(second)), self.test_config)

        summary = {
            'decision': result.decision,
            'p_value': result.p_value,
            'observed_loss': result.observed_loss,
            'k_star': result.threshold_index,
            'alpha': self.alpha,
            'permutations': self.num_permutations,
            'seed': self.seed,
            'mode': self.mode,
            'n1': result.n1,
            'n2': result.n2,
        }
        logging.info(RESULT_MESSAGE.substitute(summary))

        if self.out is not None:
            write_text_file(self.out, json.dumps(summary, indent=2, sort_keys=True) + '\n')
            inputs = get_config_files(self.group_one, MATRIX_SUFFIX) + get_config_files(self.group_two, MATRIX_SUFFIX)
            write_manifest(os.path.dirname(os.path.abspath(self.out)), self.task_type, self.config,
                           inputs=inputs, outputs=[self.out])

        return summary
