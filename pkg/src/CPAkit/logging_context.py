"""Logging context used by the numerical functions, settable using a context manager.

The CPAkit package instantiates a LoggingContext on import in the config module.
State, entanglement and heralding functions log records to LoggingContext.logger.
The logger can be replaced for the duration of a block:

>>> from CPAkit.config import global_logging_context as glc
>>> import logging
>>>
>>> with glc.set_logger(logging.getLogger("sweep")):
>>>     ... # calls to CPAkit functions, which log records to the "sweep" logger
"""

from __future__ import annotations

import logging
from contextlib import contextmanager
from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from collections.abc import Iterator


class LoggingContext:
    """Holder of the logger used by the CPAkit library functions."""

    def __init__(self, logger: logging.Logger | None = None) -> None:
        """Initialize a LoggingContext object.

        Parameters
        ----------
        logger: logging.Logger | None
            The logger library functions write to.
            Defaulted to the "cpakit" logger.

        """
        self.logger = logger if logger is not None else logging.getLogger("cpakit")

    @contextmanager
    def set_logger(self, logger: logging.Logger) -> Iterator[None]:
        """Temporarily route the library records to another logger.

        Parameters
        ----------
        logger: logging.Logger
            The logger to use within the context.
            The previous logger is restored on exit, even if an exception is raised.

        Examples
        --------
        global_logging_context = LoggingContext()
        row_logger = logging.getLogger("sweep")

        with global_logging_context.set_logger(row_logger):
            coherent_subtract(vacuum, 1.0) # Records go to the "sweep" logger

        """
        previous_logger = self.logger
        try:
            self.logger = logger
            yield
        finally:
            self.logger = previous_logger
