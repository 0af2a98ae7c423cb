"""Heralded coherent photon addition with realistic imperfections.

A pump photon down-converts into a signal photon, sent to the two-mode
input through the addition mode A† = cos(phi) a1† + sin(phi) a2†, and an
idler photon, sent to a click detector. The SPDC evolution is expanded to
second order in the gain g,

    U ≈ 1 + g G + (g²/2) G²,    G = A† i† - A i,

which keeps the idler within 2 photons and captures the contamination by
higher-order emissions. The idler goes through a loss channel of
efficiency eta before a non-photon-number-resolving click POVM I - |0><0|.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import comb

from CPAkit.config import (
    DEFAULT_GAIN,
    DEFAULT_HERALD_EFFICIENCY,
    DEFAULT_PUMP_ANGLE,
    IDLER_CUTOFF,
    MAX_GAIN,
    ZERO_CLICK_THRESHOLD,
)
from CPAkit.config import global_logging_context as glc
from CPAkit.core_api import (
    CutoffConfig,
    DensityOperator,
    PureTwoModeState,
    annihilation_matrix,
    apply_mode,
    as_density,
    creation_matrix,
    normalize,
)
from CPAkit.core_api.pure_state import ModeIndex
from CPAkit.exceptions import TruncationOverflow, ZeroClickProbability

MODE_2_ONLY = "mode2_only"
HERALD_HEADROOM = 2


def _check_efficiency(eta: float, name: str = "eta") -> None:
    if not 0 <= eta <= 1:
        message = f"{name} must lie in [0, 1], got {eta}."
        raise ValueError(message)


@dataclass(frozen=True)
class HeraldConfig:
    """Parameters of the heralded addition scheme.

    Attributes
    ----------
    gain: float
        SPDC interaction strength g, in [0, 0.5] (perturbative regime).
    herald_efficiency: float
        Detection efficiency eta of the idler click detector, in [0, 1].
    pump_angle: float
        Polarization angle phi of the twin photons, in radians.
        phi = pi/4 adds the photon with mu = 1; phi = 0 or pi/2 adds it
        to mode 1 or mode 2 only.
    signal_loss: tuple[float, float]
        Transmission of each signal mode after the addition, in [0, 1].

    """

    gain: float = DEFAULT_GAIN
    herald_efficiency: float = DEFAULT_HERALD_EFFICIENCY
    pump_angle: float = DEFAULT_PUMP_ANGLE
    signal_loss: tuple[float, float] = (1.0, 1.0)

    def __post_init__(self) -> None:
        """Validate the ranges of the parameters."""
        if not 0 <= self.gain <= MAX_GAIN:
            message = f"gain must lie in [0, {MAX_GAIN}] for the expansion to hold, got {self.gain}."
            raise ValueError(message)
        _check_efficiency(self.herald_efficiency, "herald_efficiency")
        if not np.isfinite(self.pump_angle):
            message = f"pump_angle must be finite, got {self.pump_angle}."
            raise ValueError(message)
        object.__setattr__(self, "signal_loss", tuple(self.signal_loss))
        if len(self.signal_loss) != 2:  # noqa: PLR2004
            message = f"signal_loss needs one transmission per mode, got {self.signal_loss}."
            raise ValueError(message)
        for transmission in self.signal_loss:
            _check_efficiency(transmission, "signal_loss")


@dataclass(frozen=True)
class HeraldedOutcome:
    """Signal state conditioned on an idler click, and the click probability."""

    state: DensityOperator
    click_probability: float

    def __post_init__(self) -> None:
        """Validate the click probability."""
        if not 0 <= self.click_probability <= 1:
            message = f"click_probability must lie in [0, 1], got {self.click_probability}."
            raise ValueError(message)


def mu_from_angle(phi: float) -> complex | str:
    """Return the weight mu = tan(phi) realized by the pump polarization angle.

    At phi = pi/2 (modulo pi) the photon goes to mode 2 only and mu is
    infinite; the sentinel MODE_2_ONLY is returned instead.

    Examples
    --------
    >>> mu_from_angle(0.0)
    0j

    """
    if abs(np.cos(phi)) < 1e-12:  # noqa: PLR2004
        return MODE_2_ONLY
    return complex(np.tan(phi))


def loss_kraus_operators(eta: float, cutoff: CutoffConfig) -> np.ndarray:
    """Return the Kraus operators of a pure-loss channel of transmission eta.

    K_k = sum_n sqrt(C(n, k)) eta^((n - k)/2) (1 - eta)^(k/2) |n - k><n|,
    for k = 0..n_max. They satisfy sum_k K_k† K_k = I on the truncated space.

    Returns
    -------
    np.ndarray:
        Array of shape (n_max + 1, n_max + 1, n_max + 1), indexed [k, row, column].

    """
    _check_efficiency(eta)
    dim = cutoff.dim
    kraus = np.zeros((dim, dim, dim))
    for k in range(dim):
        n = np.arange(k, dim)
        kraus[k, n - k, n] = (
            np.sqrt(comb(n, k)) * eta ** ((n - k) / 2) * (1 - eta) ** (k / 2)
        )
    return kraus


def loss_channel(rho: DensityOperator, mode: ModeIndex, eta: float) -> DensityOperator:
    """Send one mode of a state through a pure-loss channel of transmission eta.

    The channel sum_k K_k rho K_k† is applied slice by slice: K_k only
    lowers the photon number by k, so each term is a shifted block of rho.

    Parameters
    ----------
    rho: DensityOperator
        One- or two-mode state.
    mode: 1 | 2
        The mode that suffers the loss.
    eta: float
        Transmission, in [0, 1]. eta = 1 is the identity map.

    Returns
    -------
    DensityOperator:
        The attenuated state.

    """
    if mode not in (1, 2) or mode > rho.mode_count:
        message = f"Mode {mode} does not exist on a {rho.mode_count}-mode state."
        raise ValueError(message)
    kraus = loss_kraus_operators(eta, rho.cutoff)
    if eta == 1:
        return rho

    dim = rho.cutoff.dim
    ket_axis, bra_axis = mode - 1, rho.mode_count + mode - 1
    tensor = np.moveaxis(rho.as_tensor(), (ket_axis, bra_axis), (0, 1))
    output = np.zeros_like(tensor)
    trailing = (1,) * (tensor.ndim - 2)
    for k in range(dim):
        coefficients = np.diagonal(kraus[k], offset=k)
        weights = np.outer(coefficients, coefficients).reshape(
            (dim - k, dim - k, *trailing),
        )
        output[: dim - k, : dim - k] += weights * tensor[k:, k:]
    output = np.moveaxis(output, (0, 1), (ket_axis, bra_axis))
    return DensityOperator.normalized(
        output.reshape(rho.dim, rho.dim),
        rho.mode_count,
        rho.cutoff,
    )


def ideal_addition(state: PureTwoModeState, phi: float) -> PureTwoModeState:
    """Return the lossless target: normalized (cos(phi) a1† + sin(phi) a2†)|psi>."""
    creation = creation_matrix(state.cutoff)
    mode_1, _ = apply_mode(creation, 1, state)
    mode_2, _ = apply_mode(creation, 2, state)
    result, _ = normalize(np.cos(phi) * mode_1 + np.sin(phi) * mode_2, state.cutoff)
    return result


def _click_weights(eta: float) -> np.ndarray:
    """Return the click probability of the idler detector for 0, 1, 2 idler photons."""
    kraus = loss_kraus_operators(eta, CutoffConfig(IDLER_CUTOFF))
    return np.sum(np.abs(kraus[:, 1:, :]) ** 2, axis=(0, 1))


def _apply_addition_mode(
    ladder: np.ndarray,
    matrix: np.ndarray,
    phi: float,
) -> np.ndarray:
    """Left-multiply a two-mode matrix by cos(phi) L⊗I + sin(phi) I⊗L.

    The single-mode ladder L is contracted on the ket indices of the
    (d, d, d²) tensor, without forming the d²×d² operator.
    """
    dim = ladder.shape[0]
    tensor = matrix.reshape(dim, dim, -1)
    output = np.cos(phi) * np.einsum("ij,jbk->ibk", ladder, tensor) + np.sin(
        phi,
    ) * np.einsum("ij,ajk->aik", ladder, tensor)
    return output.reshape(matrix.shape)


def _check_headroom(rho: DensityOperator) -> None:
    populations = rho.populations
    top = populations[-HERALD_HEADROOM:, :].sum() + populations[
        :-HERALD_HEADROOM,
        -HERALD_HEADROOM:,
    ].sum()
    if top > rho.cutoff.tail_tol:
        message = (
            f"heralded addition needs {HERALD_HEADROOM} free Fock levels per mode; "
            f"{top:.3e} of the input lies on the top levels at n_max={rho.cutoff.n_max}."
        )
        raise TruncationOverflow(message)


def heralded_addition(
    state: PureTwoModeState | DensityOperator,
    cfg: HeraldConfig,
) -> HeraldedOutcome:
    """Condition a two-mode state on an idler click of the SPDC addition scheme.

    The idler starts in vacuum, so the evolved state decomposes on the idler
    Fock states as sum_kl |k><l| ⊗ U_k rho U_l† with the signal operators

        U_0 = 1 - (g²/2) A A†,   U_1 = g A†,   U_2 = (g²/sqrt(2)) A†².

    Loss never creates idler coherences, so only the diagonal blocks reach
    the click POVM, each weighted by the probability that at least one of
    its k idler photons survives. The idler is then traced out, signal
    losses are applied and the state renormalized.

    Parameters
    ----------
    state: PureTwoModeState | DensityOperator
        The two-mode input. It needs 2 free Fock levels per mode.
    cfg: HeraldConfig
        The scheme parameters.

    Returns
    -------
    HeraldedOutcome:
        The conditional state, and the click probability: the click-conditioned
        trace relative to the trace of the second-order evolved state.

    Raises
    ------
    TruncationOverflow:
        If the input lacks headroom or the output leaks onto the last level.
    ZeroClickProbability:
        If the detector (practically) never clicks, e.g. eta = 0 or g = 0.

    """
    rho = as_density(state)
    _check_headroom(rho)

    cutoff = rho.cutoff
    creation = creation_matrix(cutoff).matrix
    annihilation = annihilation_matrix(cutoff).matrix

    def emit(matrix: np.ndarray) -> np.ndarray:
        return _apply_addition_mode(creation, matrix, cfg.pump_angle)

    def absorb(matrix: np.ndarray) -> np.ndarray:
        return _apply_addition_mode(annihilation, matrix, cfg.pump_angle)

    g = cfg.gain
    branches = [
        lambda matrix: matrix - g**2 / 2 * absorb(emit(matrix)),
        lambda matrix: g * emit(matrix),
        lambda matrix: g**2 / np.sqrt(2) * emit(emit(matrix)),
    ]
    # U rho U† = U (U rho)† for a Hermitian rho
    blocks = [branch(branch(rho.matrix).conj().T) for branch in branches]
    total = sum(np.trace(block).real for block in blocks)

    weights = _click_weights(cfg.herald_efficiency)
    clicked = sum(weight * block for weight, block in zip(weights, blocks))
    click_probability = float(np.trace(clicked).real / total)
    glc.logger.debug(
        "Heralded addition g=%s eta=%s phi=%s: click probability %.6g.",
        g,
        cfg.herald_efficiency,
        cfg.pump_angle,
        click_probability,
    )
    if click_probability < ZERO_CLICK_THRESHOLD:
        message = (
            f"click probability {click_probability:.3e} vanishes "
            f"(gain={g}, herald_efficiency={cfg.herald_efficiency})."
        )
        raise ZeroClickProbability(message)

    heralded = DensityOperator.normalized(clicked, 2, cutoff)
    for mode, transmission in zip((1, 2), cfg.signal_loss):
        heralded = loss_channel(heralded, mode, transmission)
    return HeraldedOutcome(heralded.check_converged(), click_probability)
