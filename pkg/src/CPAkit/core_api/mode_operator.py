"""ModeOperator: truncated matrix of an operator acting on a single optical mode."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

from CPAkit.core_api.cutoff_config import CutoffConfig

OperatorKind = Literal["creation", "annihilation", "identity", "custom"]


@dataclass(frozen=True, eq=False)
class ModeOperator:
    """Matrix of a single-mode operator in the truncated Fock basis.

    Entry (i, j) is the matrix element <i|O|j>.
    The matrix is stored read-only.
    """

    matrix: np.ndarray
    cutoff: CutoffConfig
    kind: OperatorKind = "custom"

    def __post_init__(self) -> None:
        """Validate the shape of the matrix and make it read-only."""
        matrix = np.array(self.matrix, dtype=complex)
        if matrix.shape != (self.cutoff.dim, self.cutoff.dim):
            message = (
                f"A mode operator at n_max={self.cutoff.n_max} must be "
                f"{self.cutoff.dim}x{self.cutoff.dim}, got {matrix.shape}."
            )
            raise ValueError(message)
        matrix.setflags(write=False)
        object.__setattr__(self, "matrix", matrix)

    def __matmul__(self, other: ModeOperator) -> ModeOperator:
        """Compose two operators acting on the same mode."""
        self.cutoff.check_same(other.cutoff)
        return ModeOperator(self.matrix @ other.matrix, self.cutoff)

    @property
    def adjoint(self) -> ModeOperator:
        """Hermitian conjugate of the operator."""
        kind = {"creation": "annihilation", "annihilation": "creation"}.get(
            self.kind,
            self.kind,
        )
        return ModeOperator(self.matrix.conj().T, self.cutoff, kind)


def creation_matrix(cutoff: CutoffConfig) -> ModeOperator:
    """Return the truncated creation operator a†.

    Entry (n + 1, n) is sqrt(n + 1) for n < n_max; the top Fock level is
    mapped to the zero vector (hard truncation).

    Parameters
    ----------
    cutoff: CutoffConfig
        The truncation of the mode.

    Returns
    -------
    ModeOperator:
        The creation operator, of kind "creation".

    """
    matrix = np.diag(np.sqrt(np.arange(1, cutoff.dim)), k=-1)
    return ModeOperator(matrix, cutoff, "creation")


def annihilation_matrix(cutoff: CutoffConfig) -> ModeOperator:
    """Return the truncated annihilation operator a, adjoint of creation_matrix."""
    matrix = np.diag(np.sqrt(np.arange(1, cutoff.dim)), k=1)
    return ModeOperator(matrix, cutoff, "annihilation")


def identity_matrix(cutoff: CutoffConfig) -> ModeOperator:
    """Return the identity on the truncated mode."""
    return ModeOperator(np.eye(cutoff.dim), cutoff, "identity")


def number_matrix(cutoff: CutoffConfig) -> ModeOperator:
    """Return the photon-number operator a†a."""
    return creation_matrix(cutoff) @ annihilation_matrix(cutoff)


def parity_matrix(cutoff: CutoffConfig) -> ModeOperator:
    """Return the photon-number parity (-1)^(a†a)."""
    return ModeOperator(np.diag((-1.0) ** np.arange(cutoff.dim)), cutoff)
