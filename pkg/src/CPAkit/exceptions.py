"""Exceptions raised by CPAkit.

Physical degeneracies (an annihilated state, a detector that never clicks)
and truncation problems get their own classes so that callers, the CLI
first of all, can tell them apart from plain argument errors.
"""

from __future__ import annotations


class CPAkitError(Exception):
    """Base class of the CPAkit exceptions."""


class CutoffMismatch(CPAkitError, ValueError):
    """Operands live on Fock spaces truncated at different cutoffs."""


class StepError(CPAkitError):
    """Error that can be attributed to one step of an operation pipeline."""

    def __init__(self, message: str, step: int | None = None) -> None:
        """Initialize the error with an optional failing step index.

        Parameters
        ----------
        message: str
            Description of the failure.
        step: int | None
            Index of the pipeline step that failed, if any.

        """
        if step is not None:
            message = f"step {step}: {message}"
        super().__init__(message)
        self.step = step


class ZeroNorm(StepError):
    """The operator annihilated the state (e.g. subtraction from vacuum)."""


class TruncationOverflow(StepError):
    """Probability mass leaked into the highest retained Fock level."""


class ZeroClickProbability(CPAkitError):
    """The herald detector never clicks for the given configuration."""


class InvalidCount(CPAkitError, ValueError):
    """A sample count is not a positive integer."""
