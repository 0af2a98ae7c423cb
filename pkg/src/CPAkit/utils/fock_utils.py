"""Overlaps and photon statistics shared by pure states and density operators."""

from __future__ import annotations

import numpy as np
from scipy.linalg import eigh, eigvalsh

from CPAkit.core_api.density_operator import DensityOperator
from CPAkit.core_api.pure_state import ModeIndex, PureTwoModeState

State = PureTwoModeState | DensityOperator


def _psd_sqrt(matrix: np.ndarray) -> np.ndarray:
    values, vectors = eigh(matrix)
    return (vectors * np.sqrt(np.clip(values, 0.0, None))) @ vectors.conj().T


def fidelity(psi: State, phi: State) -> float:
    """Return the fidelity between two states on the same cutoff.

    |<psi|phi>|² for two pure states, <psi|rho|psi> for a pure and a mixed
    state, and the Uhlmann fidelity (Tr sqrt(sqrt(rho) sigma sqrt(rho)))²
    for two mixed states. The result is clipped to [0, 1].

    Raises
    ------
    CutoffMismatch:
        If the states are truncated differently.

    """
    psi.cutoff.check_same(phi.cutoff)

    match psi, phi:
        case PureTwoModeState(), PureTwoModeState():
            value = abs(np.vdot(psi.ket, phi.ket)) ** 2
        case PureTwoModeState(), DensityOperator():
            value = np.vdot(psi.ket, phi.matrix @ psi.ket).real
        case DensityOperator(), PureTwoModeState():
            value = np.vdot(phi.ket, psi.matrix @ phi.ket).real
        case _:
            root = _psd_sqrt(psi.matrix)
            overlap = eigvalsh(root @ phi.matrix @ root)
            value = np.sum(np.sqrt(np.clip(overlap, 0.0, None))) ** 2
    return float(np.clip(value, 0.0, 1.0))


def equal_up_to_phase(
    psi: PureTwoModeState,
    phi: PureTwoModeState,
    atol: float = 1e-9,
) -> bool:
    """Return True if both states are equal up to a global phase.

    phi is rotated by the phase of <phi|psi> before comparing entrywise.
    """
    psi.cutoff.check_same(phi.cutoff)
    overlap = np.vdot(phi.ket, psi.ket)
    if abs(overlap) == 0:
        return False
    aligned = phi.amplitudes * (overlap / abs(overlap))
    return bool(np.allclose(psi.amplitudes, aligned, rtol=0, atol=atol))


def tail_mass(state: State) -> float:
    """Return the probability mass on the highest retained Fock level of any mode."""
    return state.tail_mass


def mean_photon_number(state: State, mode: ModeIndex) -> float:
    """Return the mean photon number <a†a> of one mode."""
    if mode not in (1, 2):
        message = f"Mode index must be 1 or 2, got {mode}."
        raise ValueError(message)
    populations = (
        state.probabilities
        if isinstance(state, PureTwoModeState)
        else state.populations
    )
    if populations.ndim == 1:
        return float(np.arange(populations.size) @ populations)
    marginal = populations.sum(axis=2 - mode)
    return float(np.arange(marginal.size) @ marginal)
