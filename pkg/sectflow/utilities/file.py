import json
import logging
import os
import tempfile
from typing import Callable, List

import yaml

from sectflow.constants.types import (MANIFEST_FILENAME, TOOL_NAME,
                                      TOOL_VERSION)
from sectflow.exceptions import ConfigurationError
from sectflow.utilities.general import get_file_digest, get_iso8601_timestamp


def write_atomic(path: str, writer: Callable[[str], None]) -> str:
    """
    Function to write a file through a temporary sibling that is renamed into place.

    `writer` receives the temporary path and must create the file there.
    """

    dirname = os.path.dirname(os.path.abspath(path))
    if not os.path.exists(dirname):
        os.makedirs(dirname)

    handle, temp = tempfile.mkstemp(dir=dirname, prefix=f'.{os.path.basename(path)}.', suffix='.tmp')
    os.close(handle)

    try:
        writer(temp)
        os.replace(temp, path)
    except BaseException:
        if os.path.exists(temp):
            os.remove(temp)
        raise

    logging.info(f'Successfully wrote {path}.')

    return path


def write_text_file(path: str, text: str) -> str:
    def writer(target: str) -> None:
        with open(target, 'w', encoding='utf-8', newline='\n') as file:
            file.write(text)

    return write_atomic(path, writer)


def read_config_file(path: str) -> dict:
    """
    Function to read a YAML config file into a flat dictionary.

    A config is either a flat mapping or carries its settings under a `task:` block (an optional
    sibling `experiment:` block only describes the run and is dropped).
    """

    logging.info(f'Reading config from {path}.')
    with open(path, 'r') as file:
        try:
            config = yaml.safe_load(file)
        except yaml.YAMLError as error:
            raise ConfigurationError(f'Failed to parse config file {path}: {error}') from error

    if config is None:
        return {}
    if not isinstance(config, dict):
        raise ConfigurationError(f'Config file {path} must hold a mapping!')

    if 'task' in config:
        if not isinstance(config['task'], dict):
            raise ConfigurationError(f'The task block of {path} must be a mapping!')
        config = dict(config['task'])

    return config


def write_manifest(dirname: str, command: str, config: dict, inputs: List[str], outputs: List[str]) -> str:
    """
    Function to write the run manifest: tool version, config echo and sha256 digests of every
    input and output file.
    """

    manifest = {
        'tool': TOOL_NAME,
        'version': TOOL_VERSION,
        'command': command,
        'config': config,
        'inputs': [{'path': path, 'sha256': get_file_digest(path)} for path in inputs],
        'outputs': [{'path': os.path.relpath(path, dirname), 'sha256': get_file_digest(path)} for path in outputs],
        'created_at': get_iso8601_timestamp(),
    }

    return write_text_file(os.path.join(dirname, MANIFEST_FILENAME), json.dumps(manifest, indent=2, sort_keys=True) + '\n')
