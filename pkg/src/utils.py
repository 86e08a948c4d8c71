import csv
import os
from pathlib import Path

import pandas as pd

from src.errors import FileUnreadable, HeaderMismatch


class bcolors:
    """
    Terminal colors for cprint.
    To use this class, call cprint(text, color)
    """
    HEADER = '\033[95m'
    OKBLUE = '\033[94m'
    OKCYAN = '\033[96m'
    OKGREEN = '\033[92m'
    WARNING = '\033[93m'
    FAIL = '\033[91m'
    ENDC = '\033[0m'
    BOLD = '\033[1m'


def cprint(text, color, end='\n'):
    """
    Colorful print function. To see the colors, go to the class bcolors.

    Usage:
    cprint('Scores written', bcolors.OKGREEN)
    cprint('Warning: 3 rows rejected', bcolors.WARNING)
    """
    print(color + text + bcolors.ENDC, end=end)


def render(value: float, digits: int) -> str:
    """Fixed-point text; never renders a negative zero."""
    text = f'{value:.{digits}f}'
    if float(text) == 0.0:
        text = f'{0.0:.{digits}f}'
    return text


def read_table(path, columns, delimiter='\t', required=None) -> pd.DataFrame:
    """
    Read a delimited text file whose header must be `columns` (or just the
    `required` leading columns, in which case the rest are filled with '').
    All cells come back as strings.
    """
    path = Path(path)
    try:
        frame = pd.read_csv(path, sep=delimiter, dtype=str, keep_default_na=False,
                            quoting=csv.QUOTE_NONE, escapechar='\\', encoding='utf-8')
    except (OSError, UnicodeDecodeError) as exc:
        raise FileUnreadable(path, exc) from exc
    except pd.errors.EmptyDataError:
        raise HeaderMismatch(path, columns, ())
    except pd.errors.ParserError as exc:
        raise FileUnreadable(path, exc) from exc

    found = [str(c).strip() for c in frame.columns]
    if found == list(columns):
        pass
    elif required is not None and found == list(required):
        for name in columns[len(required):]:
            frame[name] = ''
    else:
        raise HeaderMismatch(path, columns, found)
    frame.columns = list(columns)
    return frame


def write_table(frame: pd.DataFrame, path, delimiter='\t') -> Path:
    """Write a frame as delimited UTF-8 text with '\\n' line endings, creating the folder."""
    path = Path(path)
    if not os.path.exists(path.parent):
        os.makedirs(path.parent)
    frame.to_csv(path, sep=delimiter, index=False, lineterminator='\n', encoding='utf-8',
                 quoting=csv.QUOTE_NONE, escapechar='\\')
    return path
