from sectflow.constants.types import (PERMUTATION_TEST, SIMULATION,
                                      SPLIT_TEST, TASK_TYPES, TRANSFORM)
from sectflow.exceptions import ConfigurationError
from sectflow.task_generators.permutation_test.permutation_test import \
    PermutationTestGenerator
from sectflow.task_generators.permutation_test.types import \
    CONFIG_KEYS as PERMUTATION_TEST_KEYS
from sectflow.task_generators.simulation.simulation import SimulationGenerator
from sectflow.task_generators.simulation.types import \
    CONFIG_KEYS as SIMULATION_KEYS
from sectflow.task_generators.split_test.split_test import SplitTestGenerator
from sectflow.task_generators.split_test.types import \
    CONFIG_KEYS as SPLIT_TEST_KEYS
from sectflow.task_generators.transform.transform import TransformGenerator
from sectflow.task_generators.transform.types import \
    CONFIG_KEYS as TRANSFORM_KEYS

GENERATORS = {
    TRANSFORM: (TransformGenerator, TRANSFORM_KEYS),
    PERMUTATION_TEST: (PermutationTestGenerator, PERMUTATION_TEST_KEYS),
    SIMULATION: (SimulationGenerator, SIMULATION_KEYS),
    SPLIT_TEST: (SplitTestGenerator, SPLIT_TEST_KEYS),
}


def generate_tasks(config: dict):
    """
    Function to run the task a flat config describes, dispatching on its `type` key.
    """

    task_type = config.get('type')
    if task_type not in TASK_TYPES.__members__:
        raise ConfigurationError(f'Task type {task_type!r} is not supported!')

    generator_class, keys = GENERATORS[task_type]

    unknown = sorted(set(config) - set(keys))
    if unknown:
        raise ConfigurationError(f'Unknown config key(s) for {task_type}: {", ".join(map(str, unknown))}!')

    try:
        generator = generator_class(config=config)
    except KeyError as error:
        raise ConfigurationError(f'Missing config key {error.args[0]!r} for {task_type}!') from error

    return generator.generate_tasks()
