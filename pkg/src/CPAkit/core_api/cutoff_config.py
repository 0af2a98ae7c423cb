"""CutoffConfig: truncation of the per-mode Fock space and the tolerances tied to it."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from CPAkit.config import (
    AUTO_CUTOFF_BOUNDS,
    DEFAULT_NORM_TOL,
    DEFAULT_TAIL_TOL,
    MAX_TOLERANCE,
)
from CPAkit.config import global_logging_context as glc
from CPAkit.exceptions import CutoffMismatch


@dataclass(frozen=True)
class CutoffConfig:
    """Per-mode photon-number truncation.

    Every mode keeps the Fock levels 0 to n_max included, so single-mode
    matrices have dimension n_max + 1.

    Attributes
    ----------
    n_max: int
        Highest retained photon number per mode.
    norm_tol: float
        Tolerance on the unit norm of states and unit trace of density operators.
    tail_tol: float
        Maximum probability mass allowed on the highest retained Fock level
        for a state to be considered converged.

    """

    n_max: int
    norm_tol: float = DEFAULT_NORM_TOL
    tail_tol: float = DEFAULT_TAIL_TOL

    def __post_init__(self) -> None:
        """Validate the truncation and the tolerances."""
        if int(self.n_max) != self.n_max or self.n_max < 1:
            message = f"n_max must be an integer >= 1, got {self.n_max}."
            raise ValueError(message)
        for name in ("norm_tol", "tail_tol"):
            value = getattr(self, name)
            if not 0 < value < MAX_TOLERANCE:
                message = f"{name} must lie in (0, {MAX_TOLERANCE}), got {value}."
                raise ValueError(message)

    @property
    def dim(self) -> int:
        """Dimension of the single-mode truncated Fock space."""
        return self.n_max + 1

    @classmethod
    def for_squeezing(
        cls,
        lam: float,
        tail_tol: float = DEFAULT_TAIL_TOL,
        headroom: int = 0,
        norm_tol: float = DEFAULT_NORM_TOL,
    ) -> CutoffConfig:
        """Return the cutoff that resolves a two-mode squeezed vacuum of parameter lam.

        The cutoff is the smallest n for which both the probability envelope
        (1 - lam²)·lam^(2n)·(n + 1) and the amplitude envelope lam^n·(n + 1)
        fall below tail_tol / 10. The amplitude criterion is what keeps
        Schmidt-sum quantities (negativity) converged, as they decay like lam^n.
        The result is clamped to the configured bounds, then headroom levels
        are added for photons created afterwards.

        Parameters
        ----------
        lam: float
            Squeezing parameter lambda = tanh(r), in [0, 1).
        tail_tol: float
            Tail tolerance of the returned cutoff.
        headroom: int
            Number of extra Fock levels, one per photon addition planned
            on the state.
        norm_tol: float
            Norm tolerance of the returned cutoff.

        Returns
        -------
        CutoffConfig:
            The automatically sized cutoff.

        Examples
        --------
        >>> CutoffConfig.for_squeezing(0.0).n_max
        8
        >>> CutoffConfig.for_squeezing(0.0, headroom=2).n_max
        10

        """
        if not 0 <= lam < 1:
            message = f"lambda must lie in [0, 1), got {lam}."
            raise ValueError(message)
        if headroom < 0:
            message = f"headroom must be non-negative, got {headroom}."
            raise ValueError(message)

        low, high = AUTO_CUTOFF_BOUNDS
        n = np.arange(high + 1)
        probability_envelope = (1 - lam**2) * lam ** (2 * n) * (n + 1)
        amplitude_envelope = lam**n * (n + 1)
        converged = np.flatnonzero(
            (probability_envelope < tail_tol / 10)
            & (amplitude_envelope < tail_tol / 10),
        )
        n_max = int(converged[0]) if converged.size else high
        n_max = min(max(n_max, low), high) + headroom

        glc.logger.debug(
            "Automatic cutoff for lambda=%s: n_max=%s (headroom %s).",
            lam,
            n_max,
            headroom,
        )
        return cls(n_max=n_max, norm_tol=norm_tol, tail_tol=tail_tol)

    def check_same(self, other: CutoffConfig) -> None:
        """Raise CutoffMismatch if other truncates the Fock space differently."""
        if self.n_max != other.n_max:
            message = f"Cutoff mismatch: n_max={self.n_max} and n_max={other.n_max}."
            raise CutoffMismatch(message)
