"""PureTwoModeState: pure state of two optical modes in the truncated Fock basis.

The state is stored as its amplitude matrix c[m, n] = <m, n|psi>, mode 1
indexing the rows and mode 2 the columns. Flattening the matrix in row-major
order gives the ket in the joint basis |m>⊗|n>, the ordering used by the
two-mode density operators.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

from CPAkit.config import ZERO_NORM_THRESHOLD
from CPAkit.core_api.cutoff_config import CutoffConfig
from CPAkit.core_api.mode_operator import ModeOperator
from CPAkit.exceptions import TruncationOverflow, ZeroNorm

ModeIndex = Literal[1, 2]

PHASE_TIE_RTOL = 1e-9


@dataclass(frozen=True, eq=False)
class PureTwoModeState:
    """Unit-norm pure state of two modes.

    Attributes
    ----------
    amplitudes: np.ndarray
        Complex matrix of shape (n_max + 1, n_max + 1), read-only.
    cutoff: CutoffConfig
        The truncation shared by both modes.

    """

    amplitudes: np.ndarray
    cutoff: CutoffConfig

    def __post_init__(self) -> None:
        """Validate the shape and the norm of the amplitudes."""
        amplitudes = np.array(self.amplitudes, dtype=complex)
        expected_shape = (self.cutoff.dim, self.cutoff.dim)
        if amplitudes.shape != expected_shape:
            message = f"Amplitudes must have shape {expected_shape}, got {amplitudes.shape}."
            raise ValueError(message)
        if not np.all(np.isfinite(amplitudes)):
            message = "Amplitudes must be finite."
            raise ValueError(message)
        norm_squared = float(np.sum(np.abs(amplitudes) ** 2))
        if abs(norm_squared - 1) > self.cutoff.norm_tol:
            message = (
                f"A pure state must have unit norm within {self.cutoff.norm_tol}, "
                f"got squared norm {norm_squared}."
            )
            raise ValueError(message)
        amplitudes.setflags(write=False)
        object.__setattr__(self, "amplitudes", amplitudes)

    def __eq__(self, other: object) -> bool:
        """Return True if both states have the same cutoff and the same amplitudes."""
        if not isinstance(other, PureTwoModeState):
            return False
        return self.cutoff == other.cutoff and np.array_equal(
            self.amplitudes,
            other.amplitudes,
        )

    @classmethod
    def fock(cls, m: int, n: int, cutoff: CutoffConfig) -> PureTwoModeState:
        """Return the Fock state |m, n>."""
        if not (0 <= m <= cutoff.n_max and 0 <= n <= cutoff.n_max):
            message = f"|{m},{n}> is outside the Fock space truncated at {cutoff.n_max}."
            raise ValueError(message)
        amplitudes = np.zeros((cutoff.dim, cutoff.dim), dtype=complex)
        amplitudes[m, n] = 1
        return cls(amplitudes, cutoff)

    @classmethod
    def vacuum(cls, cutoff: CutoffConfig) -> PureTwoModeState:
        """Return the two-mode vacuum |0, 0>."""
        return cls.fock(0, 0, cutoff)

    @property
    def ket(self) -> np.ndarray:
        """Ket in the joint basis |m>⊗|n>, as a vector of length (n_max + 1)²."""
        return self.amplitudes.reshape(-1)

    @property
    def probabilities(self) -> np.ndarray:
        """Joint photon-number distribution |c[m, n]|²."""
        return np.abs(self.amplitudes) ** 2

    @property
    def tail_mass(self) -> float:
        """Probability mass on the highest retained row and column."""
        return amplitude_tail_mass(self.amplitudes)

    def check_converged(self, step: int | None = None) -> PureTwoModeState:
        """Raise TruncationOverflow if the tail mass exceeds the cutoff tail tolerance.

        Parameters
        ----------
        step: int | None
            Pipeline step to report in the error, if any.

        Returns
        -------
        PureTwoModeState:
            The state itself, to allow chaining.

        """
        if (tail := self.tail_mass) > self.cutoff.tail_tol:
            message = (
                f"tail mass {tail:.3e} exceeds tail_tol={self.cutoff.tail_tol:.1e} "
                f"at n_max={self.cutoff.n_max}; increase the cutoff."
            )
            raise TruncationOverflow(message, step=step)
        return self


def amplitude_tail_mass(amplitudes: np.ndarray) -> float:
    """Return the probability mass of an amplitude matrix on its last row and column."""
    probabilities = np.abs(amplitudes) ** 2
    return float(probabilities[-1, :].sum() + probabilities[:-1, -1].sum())


def apply_mode(
    op: ModeOperator,
    which: ModeIndex,
    state: PureTwoModeState,
) -> tuple[np.ndarray, float]:
    """Apply a single-mode operator to one mode of a two-mode state.

    Parameters
    ----------
    op: ModeOperator
        The operator O to apply.
    which: 1 | 2
        The mode O acts on: O⊗I for mode 1, I⊗O for mode 2.
    state: PureTwoModeState
        The state to act on.

    Returns
    -------
    tuple[np.ndarray, float]:
        The unnormalized amplitude matrix and its squared norm.
        Normalizing is left to the caller.

    Raises
    ------
    CutoffMismatch:
        If op and state are truncated differently.

    """
    op.cutoff.check_same(state.cutoff)
    if which not in (1, 2):
        message = f"Mode index must be 1 or 2, got {which}."
        raise ValueError(message)

    if op.kind == "identity":
        amplitudes = state.amplitudes.copy()
    elif which == 1:
        amplitudes = op.matrix @ state.amplitudes
    else:
        amplitudes = state.amplitudes @ op.matrix.T
    return amplitudes, float(np.sum(np.abs(amplitudes) ** 2))


def fix_global_phase(amplitudes: np.ndarray) -> np.ndarray:
    """Rotate the global phase so that the largest amplitude is real and positive.

    Among amplitudes of equal magnitude (within a relative 1e-9), the first
    one in row-major order is chosen.
    """
    flat = amplitudes.reshape(-1)
    magnitudes = np.abs(flat)
    peak = magnitudes.max()
    if peak == 0:
        return amplitudes.copy()
    index = int(np.flatnonzero(magnitudes >= peak * (1 - PHASE_TIE_RTOL))[0])
    phase = flat[index] / magnitudes[index]
    return amplitudes * np.conj(phase)


def normalize(
    amplitudes: np.ndarray,
    cutoff: CutoffConfig | None = None,
    step: int | None = None,
) -> tuple[PureTwoModeState, float]:
    """Normalize an amplitude matrix into a PureTwoModeState.

    The global phase is fixed with fix_global_phase.

    Parameters
    ----------
    amplitudes: np.ndarray
        The unnormalized amplitude matrix.
    cutoff: CutoffConfig | None
        Truncation of the resulting state.
        Defaulted to a cutoff matching the matrix shape with default tolerances.
    step: int | None
        Pipeline step to report in a ZeroNorm error, if any.

    Returns
    -------
    tuple[PureTwoModeState, float]:
        The unit-norm state, and the norm of the input.

    Raises
    ------
    ZeroNorm:
        If the squared norm is below 1e-24, i.e. the state was annihilated.

    Examples
    --------
    >>> state, norm = normalize(2 * PureTwoModeState.vacuum(CutoffConfig(3)).amplitudes)
    >>> norm
    2.0

    """
    amplitudes = np.asarray(amplitudes, dtype=complex)
    if cutoff is None:
        cutoff = CutoffConfig(n_max=amplitudes.shape[0] - 1)
    norm_squared = float(np.sum(np.abs(amplitudes) ** 2))
    if norm_squared < ZERO_NORM_THRESHOLD:
        message = f"the operator annihilated the state (squared norm {norm_squared:.3e})."
        raise ZeroNorm(message, step=step)
    norm = float(np.sqrt(norm_squared))
    return PureTwoModeState(fix_global_phase(amplitudes / norm), cutoff), norm
