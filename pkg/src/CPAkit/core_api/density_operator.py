"""DensityOperator: mixed state of one or two modes in the truncated Fock basis.

Two-mode matrices use the joint basis |m>⊗|n> with mode 1 as the major
index, so that the matrix reshaped to (d, d, d, d) reads rho[m, n, m', n']
= <m, n|rho|m', n'>.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np
from scipy.linalg import eigvalsh

from CPAkit.config import HERMITICITY_TOL, PSD_SLACK
from CPAkit.core_api.cutoff_config import CutoffConfig
from CPAkit.core_api.pure_state import ModeIndex, PureTwoModeState
from CPAkit.exceptions import TruncationOverflow


@dataclass(frozen=True, eq=False)
class DensityOperator:
    """Hermitian, positive semi-definite, trace-one matrix on one or two modes.

    Attributes
    ----------
    matrix: np.ndarray
        Complex square matrix of dimension (n_max + 1)^mode_count, read-only.
    mode_count: 1 | 2
        Number of modes the operator acts on.
    cutoff: CutoffConfig
        The per-mode truncation.

    """

    matrix: np.ndarray
    mode_count: Literal[1, 2]
    cutoff: CutoffConfig

    def __post_init__(self) -> None:
        """Validate the shape, hermiticity, trace and positivity of the matrix."""
        if self.mode_count not in (1, 2):
            message = f"mode_count must be 1 or 2, got {self.mode_count}."
            raise ValueError(message)
        matrix = np.array(self.matrix, dtype=complex)
        dim = self.cutoff.dim**self.mode_count
        if matrix.shape != (dim, dim):
            message = f"A {self.mode_count}-mode density operator must be {dim}x{dim}, got {matrix.shape}."
            raise ValueError(message)
        if (asymmetry := np.max(np.abs(matrix - matrix.conj().T))) > HERMITICITY_TOL:
            message = f"Density operator is not Hermitian (deviation {asymmetry:.3e})."
            raise ValueError(message)
        if abs((trace := np.trace(matrix).real) - 1) > self.cutoff.norm_tol:
            message = f"Density operator must have unit trace within {self.cutoff.norm_tol}, got {trace}."
            raise ValueError(message)
        lowest = eigvalsh(matrix, subset_by_index=[0, 0])[0]
        if lowest < -PSD_SLACK:
            message = f"Density operator is not positive (lowest eigenvalue {lowest:.3e})."
            raise ValueError(message)
        matrix.setflags(write=False)
        object.__setattr__(self, "matrix", matrix)

    @property
    def dim(self) -> int:
        """Dimension of the space the operator acts on."""
        return self.matrix.shape[0]

    def as_tensor(self) -> np.ndarray:
        """Return the matrix with one axis per mode index.

        Shape (d, d) for one mode, (d, d, d, d) ordered [m, n, m', n'] for two.
        """
        d = self.cutoff.dim
        return self.matrix.reshape((d,) * (2 * self.mode_count))

    @property
    def populations(self) -> np.ndarray:
        """Photon-number distribution: a vector for one mode, a (d, d) matrix for two."""
        d = self.cutoff.dim
        diagonal = np.diag(self.matrix).real
        return diagonal if self.mode_count == 1 else diagonal.reshape(d, d)

    @property
    def tail_mass(self) -> float:
        """Probability on the highest retained Fock level of any mode."""
        populations = self.populations
        if self.mode_count == 1:
            return float(populations[-1])
        return float(populations[-1, :].sum() + populations[:-1, -1].sum())

    def check_converged(self, step: int | None = None) -> DensityOperator:
        """Raise TruncationOverflow if the tail mass exceeds the cutoff tail tolerance."""
        if (tail := self.tail_mass) > self.cutoff.tail_tol:
            message = (
                f"tail mass {tail:.3e} exceeds tail_tol={self.cutoff.tail_tol:.1e} "
                f"at n_max={self.cutoff.n_max}; increase the cutoff."
            )
            raise TruncationOverflow(message, step=step)
        return self

    @classmethod
    def normalized(
        cls,
        matrix: np.ndarray,
        mode_count: Literal[1, 2],
        cutoff: CutoffConfig,
    ) -> DensityOperator:
        """Build a DensityOperator from a positive matrix of arbitrary trace.

        The matrix is divided by its trace and symmetrized to remove rounding
        asymmetry.
        """
        matrix = np.asarray(matrix, dtype=complex)
        matrix = (matrix + matrix.conj().T) / 2
        return cls(matrix / np.trace(matrix).real, mode_count, cutoff)


def pure_to_density(state: PureTwoModeState) -> DensityOperator:
    """Return the projector |psi><psi| of a pure two-mode state."""
    ket = state.ket
    return DensityOperator(np.outer(ket, ket.conj()), 2, state.cutoff)


def as_density(state: PureTwoModeState | DensityOperator) -> DensityOperator:
    """Return state as a DensityOperator, converting pure states."""
    if isinstance(state, PureTwoModeState):
        return pure_to_density(state)
    return state


def reduced_density(
    state: PureTwoModeState | DensityOperator,
    keep: ModeIndex,
) -> DensityOperator:
    """Trace out one mode of a two-mode state.

    Parameters
    ----------
    state: PureTwoModeState | DensityOperator
        A pure state, or a two-mode density operator.
    keep: 1 | 2
        The mode that is kept.

    Returns
    -------
    DensityOperator:
        The single-mode reduced density operator.

    """
    if keep not in (1, 2):
        message = f"Mode index must be 1 or 2, got {keep}."
        raise ValueError(message)

    if isinstance(state, PureTwoModeState):
        c = state.amplitudes
        reduced = c @ c.conj().T if keep == 1 else c.T @ c.conj()
    else:
        if state.mode_count != 2:
            message = "Only two-mode density operators can be reduced."
            raise ValueError(message)
        tensor = state.as_tensor()
        reduced = (
            np.einsum("abcb->ac", tensor)
            if keep == 1
            else np.einsum("abad->bd", tensor)
        )
    return DensityOperator.normalized(reduced, 1, state.cutoff)


def purity(rho: DensityOperator) -> float:
    """Return Tr(rho²), 1 for pure states."""
    return float(np.real(np.sum(rho.matrix * rho.matrix.T)))
