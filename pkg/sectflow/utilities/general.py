import fnmatch
import hashlib
import os
from typing import List

import numpy as np
import pendulum

from sectflow.exceptions import InvalidArgumentError


def get_config_files(directory: str, suffix: str) -> List[str]:
    """
    Function to list the files directly under a directory whose name matches a suffix pattern,
    in sorted order. Subdirectories are not entered.
    """

    root, _, filenames = next(iter(os.walk(directory)), (directory, [], []))

    return sorted(os.path.join(root, filename) for filename in fnmatch.filter(filenames, f'{suffix}'))


def get_iso8601_timestamp() -> str:
    """
    Function to get the current time in ISO8601 format.
    """

    return pendulum.now().to_iso8601_string()


def get_file_digest(path: str) -> str:
    """
    Function to get the sha256 hex digest of a file.
    """

    digest = hashlib.sha256()
    with open(path, 'rb') as file:
        for block in iter(lambda: file.read(1 << 16), b''):
            digest.update(block)

    return digest.hexdigest()


def get_derived_seed(*keys: int) -> int:
    """
    Function to derive one unsigned 64-bit seed from a tuple of integer keys.
    """

    return int(np.random.SeedSequence([int(key) for key in keys]).generate_state(1, dtype=np.uint64)[0])


def get_n_jobs(threads) -> int:
    """
    Function to validate a joblib worker count.
    """

    if isinstance(threads, bool) or not isinstance(threads, (int, np.integer)) or threads < 1:
        raise InvalidArgumentError(f'threads must be a positive integer, got {threads!r}.')

    return int(threads)
