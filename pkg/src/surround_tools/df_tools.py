import os
import time
from typing import Dict, Iterable

import pandas as pd

# Any logging activities inside functions should use this global logger.
from .config import get_global_logger
logger = get_global_logger()

# region dataframes methods


def rows_to_dataframe(rows: Iterable[Dict]) -> pd.DataFrame:
    """Flat records to a DataFrame, columns in first-seen order."""
    return pd.DataFrame.from_records(list(rows))


def write_dataframe_to_file(df: pd.DataFrame, filepath: str, create_dir: bool = False, index: bool = False) -> str:
    """
    Writes a DataFrame as csv or json depending on the extension of ``filepath``.

    :param df: The table.
    :type df: pd.DataFrame
    :param filepath: Target file ending in ``.csv`` or ``.json``.
    :type filepath: str
    :param create_dir: Create the parent directory if it does not exist.
    :type create_dir: bool
    :param index: Keep the DataFrame index as a column.
    :type index: bool
    :return: The absolute path written.
    :raises ValueError: If ``df`` is not a DataFrame, the extension is not supported or the directory is missing.
    """
    logger.debug(f'Start write_dataframe_to_file')

    filetype = os.path.splitext(filepath)[1][1:]
    path = os.path.dirname(os.path.abspath(filepath))
    logger.debug(f'filename : {filepath}, filetype : {filetype}, path : {path}')

    if not isinstance(df, pd.DataFrame):
        raise ValueError('object is not of type dataframe')
    if filetype not in ('csv', 'json'):
        raise ValueError(f'filetype {filetype!r} is not accepted, use csv or json')
    if create_dir and not os.path.exists(path):
        os.makedirs(path)
        logger.debug(f'creating {path}...')
    if not os.path.isdir(path):
        raise ValueError(f'path {path} does not exist')

    start = time.perf_counter()
    if filetype == 'csv':
        df.to_csv(filepath, encoding='utf-8', index=index)
    else:
        df.to_json(filepath, orient='records', indent=2)
    elapsed = time.perf_counter() - start

    file_size = os.path.getsize(filepath)
    logger.info(f'writing dataframe...\n{filepath}\nTime : {elapsed:.3f} s\nFilesize : {file_size / 1024:.1f} KB')
    return os.path.abspath(filepath)


def print_df(dframe: pd.DataFrame, title: str = 'table') -> str:
    """Logs the whole table, untruncated, and returns the rendered text."""
    if not isinstance(dframe, pd.DataFrame):
        logger.warning(f'{title}: object to print is not a dataframe')
        return ''
    with pd.option_context('display.max_rows', None,
                           'display.max_columns', None,
                           'display.width', 1000,
                           'display.precision', 3,
                           'display.colheader_justify', 'left'):
        text = dframe.to_string(index=False) if len(dframe) else '(no rows)'
    logger.info(f'{title} ({len(dframe)} rows)\n{text}')
    return text

# endregion
