"""CSV helpers shared by the command line outputs."""

from __future__ import annotations

import sys
from contextlib import contextmanager
from pathlib import Path
from typing import TYPE_CHECKING, TextIO

from CPAkit.config import CSV_FLOAT_FORMAT

if TYPE_CHECKING:
    from collections.abc import Iterator

    import pandas as pd

    from CPAkit.config import FileName

STDOUT_MARKER = "-"


def format_float(value: float) -> str:
    """Format a float with 17 significant digits, the CSV convention of CPAkit."""
    return CSV_FLOAT_FORMAT % value


@contextmanager
def open_output(out: FileName) -> Iterator[TextIO]:
    """Open the output stream of a command.

    Parameters
    ----------
    out: FileName
        Path of the file to write, or "-" for the standard output.
        Parent folders are created if needed.

    """
    if str(out) == STDOUT_MARKER:
        yield sys.stdout
        sys.stdout.flush()
        return
    path = Path(out)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as stream:
        yield stream


def write_csv(
    frame: pd.DataFrame,
    stream: TextIO,
    footer: list[str] | None = None,
) -> None:
    """Write a DataFrame as CSV with the CPAkit float format.

    Missing values are written as empty fields.

    Parameters
    ----------
    frame: pandas.DataFrame
        The table to write. Its columns are used as header.
    stream: TextIO
        The open output stream.
    footer: list[str] | None
        Summary lines appended after the table, each prefixed with "# ".

    """
    frame.to_csv(
        stream,
        index=False,
        float_format=CSV_FLOAT_FORMAT,
        na_rep="",
        lineterminator="\n",
    )
    for line in footer or []:
        stream.write(f"# {line}\n")
