"""Entanglement of two-mode states: Schmidt spectrum, negativity and entropy.

Pure states go through the singular values of their amplitude matrix,
which costs O(d³). The partial-transpose route works on mixed states too,
at the price of an eigendecomposition of the (d²)-dimensional joint matrix.
Logarithms are in base 2 (ebit units).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigvalsh, svdvals

from CPAkit.config import NEGATIVE_EIGENVALUE_CLIP, SCHMIDT_CLIP
from CPAkit.core_api import DensityOperator, PureTwoModeState

SCHMIDT_NORM_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class SchmidtSpectrum:
    """Schmidt coefficients of a pure bipartite state, in descending order."""

    coefficients: np.ndarray

    def __post_init__(self) -> None:
        """Validate ordering, sign and normalization of the coefficients."""
        coefficients = np.asarray(self.coefficients, dtype=float)
        if np.any(coefficients < 0) or np.any(np.diff(coefficients) > 0):
            message = "Schmidt coefficients must be non-negative and sorted descending."
            raise ValueError(message)
        if abs(np.sum(coefficients**2) - 1) > SCHMIDT_NORM_TOL:
            message = "Squared Schmidt coefficients must sum to 1."
            raise ValueError(message)
        coefficients.setflags(write=False)
        object.__setattr__(self, "coefficients", coefficients)

    @property
    def rank(self) -> int:
        """Number of non-zero coefficients."""
        return int(np.count_nonzero(self.coefficients))


def schmidt_coefficients(state: PureTwoModeState) -> SchmidtSpectrum:
    """Return the singular values of the amplitude matrix, values below 1e-14 set to 0."""
    values = svdvals(state.amplitudes)
    values[values < SCHMIDT_CLIP] = 0.0
    return SchmidtSpectrum(np.sort(values)[::-1])


def negativity_pure(state: PureTwoModeState) -> float:
    """Return the negativity ((sum_i c_i)² - 1) / 2 of a pure state."""
    total = np.sum(schmidt_coefficients(state).coefficients)
    return max(0.0, float((total**2 - 1) / 2))


def partial_transpose(rho: DensityOperator) -> np.ndarray:
    """Transpose the mode-2 indices of a two-mode density operator.

    <m, n|rho^T2|m', n'> = <m, n'|rho|m', n>.
    """
    if rho.mode_count != 2:
        message = "The partial transpose needs a two-mode density operator."
        raise ValueError(message)
    tensor = rho.as_tensor().transpose(0, 3, 2, 1)
    return tensor.reshape(rho.dim, rho.dim)


def negativity_density(rho: DensityOperator) -> float:
    """Return the sum of the magnitudes of the negative partial-transpose eigenvalues.

    Eigenvalues above -1e-12 are treated as 0, so that eigensolver noise
    does not register as entanglement.
    """
    eigenvalues = eigvalsh(partial_transpose(rho))
    negative = eigenvalues[eigenvalues < -NEGATIVE_EIGENVALUE_CLIP]
    return float(-np.sum(negative))


def negativity(state: PureTwoModeState | DensityOperator) -> float:
    """Return the negativity of a pure state or of a two-mode density operator."""
    if isinstance(state, PureTwoModeState):
        return negativity_pure(state)
    return negativity_density(state)


def log_negativity(negativity_value: float) -> float:
    """Return the logarithmic negativity log2(2N + 1)."""
    if negativity_value < 0:
        message = f"A negativity is non-negative, got {negativity_value}."
        raise ValueError(message)
    return float(np.log2(2 * negativity_value + 1))


def entanglement_entropy(state: PureTwoModeState) -> float:
    """Return the von Neumann entropy of either reduced state, -sum c² log2 c²."""
    weights = schmidt_coefficients(state).coefficients ** 2
    weights = weights[weights > 0]
    return float(max(0.0, -np.sum(weights * np.log2(weights))))
