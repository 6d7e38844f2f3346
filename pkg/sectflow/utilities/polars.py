import logging

import polars as pl

from sectflow.utilities.file import write_atomic


def dataframe_to_file(dataframe: pl.DataFrame, path: str) -> str:
    """
    Function to write a polars dataframe into a CSV file.
    """

    logging.info(f'Writing {dataframe.height} rows into {path}.')

    return write_atomic(path, lambda target: dataframe.write_csv(target))
