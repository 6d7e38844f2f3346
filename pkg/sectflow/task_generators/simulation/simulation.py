import json
import logging
import os
from typing import List

import numpy as np
import polars as pl

from sectflow.constants.types import (ARCS, BOTH, DEFAULT_ALPHA,
                                      DEFAULT_EPSILONS, DEFAULT_PERMUTATIONS,
                                      DEFAULT_REPEATS, DEFAULT_RESOLUTION,
                                      DEFAULT_SEED, ECT, FAMILIES, NOISE_MEAN,
                                      NOISE_SD, SECT, SIMULATION_RADIUS,
                                      TRANSFORM_MODES)
from sectflow.constants.variables import SECTFLOW_THREADS
from sectflow.exceptions import ConfigurationError
from sectflow.shapes.shape import uniform_directions
from sectflow.simulations.experiment import (ExperimentConfig, cohort,
                                             example_sect_curves,
                                             run_experiments)
from sectflow.simulations.nodules import run_nodule_study
from sectflow.task_generators.simulation.types import (MASK_FILE,
                                                       NODULE_RESULT_FILE,
                                                       NODULE_SPLIT_FILE,
                                                       P_VALUES_FILE,
                                                       REJECTION_RATES_FILE,
                                                       SECT_CURVES_FILE)
from sectflow.utilities.file import write_manifest, write_text_file
from sectflow.utilities.general import get_n_jobs
from sectflow.utilities.image import write_mask
from sectflow.utilities.polars import dataframe_to_file


class SimulationGenerator:
    """
    Constructor arguments:
        config (Required[dict]):
            Flat experiment settings. `out` is required; `family` picks the shape family
            (`arcs`, the default, or `nodules`) and every other key falls back to its default.
        **kwargs:
            Additional keyword arguments.
    """

    def __init__(self, config: dict, **kwargs) -> None:
        self.task_type   : str           = config['type']
        self.family      : str           = config.get('family', ARCS)
        self.method      : str           = config.get('method', BOTH)
        self.repeats     : int           = config.get('repeats', DEFAULT_REPEATS)
        self.dump_masks  : bool          = bool(config.get('dump_masks', False))
        self.out         : str           = config['out']
        self.config      : dict          = config

        if self.family not in FAMILIES.__members__:
            raise ConfigurationError(f'Simulation family {self.family!r} is not supported!')
        if self.method not in TRANSFORM_MODES.__members__ and self.method != BOTH:
            raise ConfigurationError(f'Method {self.method!r} is not supported!')

        self.experiment = ExperimentConfig(
            epsilons=tuple(config.get('epsilons', DEFAULT_EPSILONS)),
            n_per_group=config.get('n_per_group', 100),
            replicates=config.get('replicates', 100),
            num_directions=config.get('directions', 4),
            num_levels=config.get('levels', 50),
            radius_R=config.get('radius', SIMULATION_RADIUS),
            resolution=config.get('resolution', DEFAULT_RESOLUTION),
            alpha=config.get('alpha', DEFAULT_ALPHA),
            num_permutations=config.get('permutations', DEFAULT_PERMUTATIONS),
            seed=config.get('seed', DEFAULT_SEED),
            noise_sd=config.get('noise_sd', NOISE_SD),
            noise_mean=config.get('noise_mean', NOISE_MEAN),
            n_jobs=get_n_jobs(config.get('threads', SECTFLOW_THREADS))
        )

    def __dump_masks(self) -> List[str]:
        outputs = []
        for epsilon_index, epsilon in enumerate(self.experiment.epsilons):
            for group, group_epsilon in enumerate((0.0, epsilon)):
                for index, shape in enumerate(cohort(self.experiment, epsilon_index, 0, group, group_epsilon)):
                    target = os.path.join(self.out, MASK_FILE.substitute(epsilon_index=epsilon_index, group=group, index=index))
                    outputs.append(write_mask(shape, target))

        return outputs

    def __generate_arcs(self) -> dict:
        methods = [SECT, ECT] if self.method == BOTH else [self.method]
        tables = run_experiments(self.experiment, methods)

        outputs = []
        for method, table in tables.items():
            outputs.append(dataframe_to_file(table.to_dataframe(), os.path.join(self.out, REJECTION_RATES_FILE.substitute(method=method))))
            outputs.append(dataframe_to_file(table.p_values_dataframe(), os.path.join(self.out, P_VALUES_FILE.substitute(method=method))))

        outputs.append(dataframe_to_file(example_sect_curves(self.experiment), os.path.join(self.out, SECT_CURVES_FILE)))

        if self.dump_masks:
            outputs.extend(self.__dump_masks())

        write_manifest(self.out, self.task_type, self.config, inputs=[], outputs=outputs)

        return {
            method: {str(epsilon): float(rate) for epsilon, rate in zip(table.epsilons, table.rates)}
            for method, table in tables.items()
        }

    def __generate_nodules(self) -> dict:
        cfg = self.experiment
        result, split = run_nodule_study(
            n_per_group=cfg.n_per_group,
            resolution=cfg.resolution,
            dirs=uniform_directions(cfg.num_directions),
            levels=cfg.levels,
            config=cfg.test_config(cfg.seed),
            repeats=int(self.repeats),
            radius_R=cfg.radius_R
        )

        summary = {
            'decision': result.decision,
            'p_value': result.p_value,
            'observed_loss': result.observed_loss,
            'k_star': result.threshold_index,
            'n1': result.n1,
            'n2': result.n2,
            'split_mean': split.mean,
            'split_sd': split.sd,
        }

        outputs = [
            write_text_file(os.path.join(self.out, NODULE_RESULT_FILE), json.dumps(summary, indent=2, sort_keys=True) + '\n'),
            dataframe_to_file(
                pl.DataFrame({'repeat': np.arange(split.p_values.size).tolist(), 'p_value': split.p_values.tolist()}),
                os.path.join(self.out, NODULE_SPLIT_FILE)
            ),
        ]
        write_manifest(self.out, self.task_type, self.config, inputs=[], outputs=outputs)

        return summary

    def generate_tasks(self) -> dict:
        logging.info(f'Running the {self.family} simulation into {self.out}.')

        if self.family == ARCS:
            return self.__generate_arcs()

        return self.__generate_nodules()
