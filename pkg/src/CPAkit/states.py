"""Two-mode squeezed vacuum and its coherently photon-added/subtracted descendants.

The coherent operations apply the delocalized ladder operators
(a1† + mu a2†) and (a1 + mu a2) to a two-mode state, then renormalize.
Their squared norm before renormalization is returned as the operation
weight, proportional to the heralding likelihood of an ideal scheme.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

from CPAkit.config import MAX_MU_MAGNITUDE
from CPAkit.config import global_logging_context as glc
from CPAkit.core_api import (
    CutoffConfig,
    PureTwoModeState,
    annihilation_matrix,
    apply_mode,
    creation_matrix,
    normalize,
)
from CPAkit.exceptions import StepError

DB_PER_NEPER = 20 / np.log(10)

StepKind = Literal["add", "subtract"]


def _check_lambda(lam: float) -> None:
    if not 0 <= lam < 1:
        message = f"lambda must lie in [0, 1), got {lam}."
        raise ValueError(message)


@dataclass(frozen=True)
class SqueezingParams:
    """Squeezing of a two-mode squeezed vacuum, in its three usual units.

    Attributes
    ----------
    r: float
        Squeezing degree, >= 0.
    lam: float
        lambda = tanh(r), in [0, 1).
    db: float
        Squeezing in decibels, -10·log10(exp(-2r)).

    """

    r: float
    lam: float
    db: float

    def __post_init__(self) -> None:
        """Validate the ranges and the consistency of the three units."""
        if self.r < 0 or not np.isfinite(self.r):
            message = f"The squeezing degree r must be finite and >= 0, got {self.r}."
            raise ValueError(message)
        if not 0 <= self.lam < 1:
            message = f"lambda must lie in [0, 1), got {self.lam}."
            raise ValueError(message)
        if abs(np.tanh(self.r) - self.lam) > 1e-12 or abs(
            DB_PER_NEPER * self.r - self.db,
        ) > 1e-12 * max(1.0, self.db):
            message = f"Inconsistent squeezing parameters: {self}."
            raise ValueError(message)

    @classmethod
    def from_r(cls, r: float) -> SqueezingParams:
        """Build the parameters from the squeezing degree r."""
        return cls(r=float(r), lam=float(np.tanh(r)), db=float(DB_PER_NEPER * r))

    @classmethod
    def from_lambda(cls, lam: float) -> SqueezingParams:
        """Build the parameters from lambda = tanh(r)."""
        _check_lambda(lam)
        r = float(np.arctanh(lam))
        return cls(r=r, lam=float(lam), db=float(DB_PER_NEPER * r))

    @classmethod
    def from_db(cls, db: float) -> SqueezingParams:
        """Build the parameters from a squeezing expressed in decibels.

        Examples
        --------
        >>> round(SqueezingParams.from_db(3).lam, 5)
        0.33228

        """
        if db < 0:
            message = f"Squeezing in dB must be >= 0, got {db}."
            raise ValueError(message)
        return cls.from_r(db / DB_PER_NEPER)


@dataclass(frozen=True)
class AdditionWeight:
    """Complex weight mu of mode 2 in the delocalized ladder operators."""

    mu: complex

    def __post_init__(self) -> None:
        """Validate that mu is finite and not degenerate."""
        mu = complex(self.mu)
        if not np.isfinite(mu):
            message = f"mu must be finite, got {self.mu}."
            raise ValueError(message)
        if abs(mu) > MAX_MU_MAGNITUDE:
            message = f"|mu| must not exceed {MAX_MU_MAGNITUDE:g}, got {abs(mu):g}."
            raise ValueError(message)
        object.__setattr__(self, "mu", mu)

    @classmethod
    def of(cls, mu: complex | AdditionWeight) -> AdditionWeight:
        """Return mu as an AdditionWeight."""
        return mu if isinstance(mu, AdditionWeight) else cls(mu)


@dataclass(frozen=True)
class PipelineStep:
    """One coherent operation of a pipeline."""

    kind: StepKind
    weight: AdditionWeight

    def __post_init__(self) -> None:
        """Validate the step kind."""
        if self.kind not in ("add", "subtract"):
            message = f"A pipeline step is either 'add' or 'subtract', got {self.kind!r}."
            raise ValueError(message)


@dataclass(frozen=True)
class OpPipeline:
    """Ordered, non-empty sequence of coherent additions and subtractions."""

    steps: tuple[PipelineStep, ...]

    def __post_init__(self) -> None:
        """Validate that the pipeline is not empty."""
        object.__setattr__(self, "steps", tuple(self.steps))
        if not self.steps:
            message = "A pipeline needs at least one step."
            raise ValueError(message)

    @classmethod
    def of(
        cls,
        *kinds: StepKind,
        mu: complex | AdditionWeight = 1.0,
    ) -> OpPipeline:
        """Build a pipeline whose steps all share the same weight mu.

        Examples
        --------
        >>> [step.kind for step in OpPipeline.of("add", "subtract").steps]
        ['add', 'subtract']

        """
        weight = AdditionWeight.of(mu)
        return cls(tuple(PipelineStep(kind, weight) for kind in kinds))

    @property
    def additions(self) -> int:
        """Number of photon additions, i.e. the Fock headroom the pipeline needs."""
        return sum(step.kind == "add" for step in self.steps)


def tmsv(
    params: SqueezingParams | float,
    cutoff: CutoffConfig,
) -> PureTwoModeState:
    """Return the two-mode squeezed vacuum sqrt(1 - lam²)·sum_n lam^n |n, n>.

    The amplitudes are renormalized over the truncated block, so the state
    has unit norm at any cutoff.

    Parameters
    ----------
    params: SqueezingParams | float
        The squeezing, or directly lambda = tanh(r).
    cutoff: CutoffConfig
        The truncation of both modes.

    Returns
    -------
    PureTwoModeState:
        The diagonal two-mode squeezed vacuum.

    Raises
    ------
    TruncationOverflow:
        If the cutoff leaves more than tail_tol on the last Fock level.

    """
    if not isinstance(params, SqueezingParams):
        params = SqueezingParams.from_lambda(params)
    n = np.arange(cutoff.dim)
    amplitudes = np.diag(np.sqrt(1 - params.lam**2) * params.lam**n)
    state, _ = normalize(amplitudes, cutoff)
    return state.check_converged()


def _coherent_operation(
    state: PureTwoModeState,
    mu: complex | AdditionWeight,
    kind: StepKind,
) -> tuple[PureTwoModeState, float]:
    weight = AdditionWeight.of(mu)
    ladder = (
        creation_matrix(state.cutoff)
        if kind == "add"
        else annihilation_matrix(state.cutoff)
    )
    mode_1, _ = apply_mode(ladder, 1, state)
    mode_2, _ = apply_mode(ladder, 2, state)
    amplitudes = mode_1 + weight.mu * mode_2
    result, norm = normalize(amplitudes, state.cutoff)
    glc.logger.debug(
        "Coherent %s with mu=%s: weight %.6g.",
        kind,
        weight.mu,
        norm**2,
    )
    return result.check_converged(), norm**2


def coherent_add(
    state: PureTwoModeState,
    mu: complex | AdditionWeight,
) -> tuple[PureTwoModeState, float]:
    """Coherently add one photon: normalized (a1† + mu a2†)|psi>.

    Parameters
    ----------
    state: PureTwoModeState
        The input state. It needs one free Fock level of headroom.
    mu: complex | AdditionWeight
        The weight of mode 2.

    Returns
    -------
    tuple[PureTwoModeState, float]:
        The photon-added state, and the squared norm before renormalization.

    Raises
    ------
    TruncationOverflow:
        If the added photon pushes probability onto the last Fock level.

    """
    return _coherent_operation(state, mu, "add")


def coherent_subtract(
    state: PureTwoModeState,
    mu: complex | AdditionWeight,
) -> tuple[PureTwoModeState, float]:
    """Coherently subtract one photon: normalized (a1 + mu a2)|psi>.

    Parameters
    ----------
    state: PureTwoModeState
        The input state.
    mu: complex | AdditionWeight
        The weight of mode 2.

    Returns
    -------
    tuple[PureTwoModeState, float]:
        The photon-subtracted state, and the squared norm before renormalization.

    Raises
    ------
    ZeroNorm:
        If the operator annihilates the state, as it does the vacuum.

    """
    return _coherent_operation(state, mu, "subtract")


def cpa_reference(lam: float, cutoff: CutoffConfig) -> PureTwoModeState:
    """Return the closed form of the photon-added squeezed vacuum at mu = 1.

    Amplitudes (1 - lam²)/sqrt(2)·lam^n·sqrt(n + 1) on |n + 1, n> and
    |n, n + 1>, renormalized over the truncated block.
    """
    _check_lambda(lam)
    n = np.arange(cutoff.n_max)
    coefficients = (1 - lam**2) / np.sqrt(2) * lam**n * np.sqrt(n + 1)
    amplitudes = np.diag(coefficients, k=-1) + np.diag(coefficients, k=1)
    state, _ = normalize(amplitudes, cutoff)
    return state.check_converged()


def cps_reference(lam: float, cutoff: CutoffConfig) -> PureTwoModeState:
    """Return the closed form of the photon-subtracted squeezed vacuum at mu = 1.

    Amplitudes (1 - lam²)/sqrt(2)·lam^(n - 1)·sqrt(n) on |n - 1, n> and
    |n, n - 1> for n >= 1, renormalized over the truncated block.
    Up to the shift of the summation index, this is the photon-added form.
    """
    _check_lambda(lam)
    n = np.arange(1, cutoff.dim)
    coefficients = (1 - lam**2) / np.sqrt(2) * lam ** (n - 1) * np.sqrt(n)
    amplitudes = np.zeros((cutoff.dim, cutoff.dim))
    amplitudes[n - 1, n] = coefficients
    amplitudes[n, n - 1] = coefficients
    state, _ = normalize(amplitudes, cutoff)
    return state.check_converged()


def mode_swap(state: PureTwoModeState) -> PureTwoModeState:
    """Exchange the two modes: the amplitude matrix is transposed."""
    return PureTwoModeState(state.amplitudes.T, state.cutoff)


def run_pipeline(
    state: PureTwoModeState,
    pipeline: OpPipeline,
) -> tuple[PureTwoModeState, float]:
    """Apply the steps of a pipeline in order, renormalizing after each one.

    Parameters
    ----------
    state: PureTwoModeState
        The input state.
    pipeline: OpPipeline
        The operations to apply.

    Returns
    -------
    tuple[PureTwoModeState, float]:
        The final state, and the product of the step weights.

    Raises
    ------
    ZeroNorm, TruncationOverflow:
        With the index of the failing step in their step attribute.

    """
    cumulative_weight = 1.0
    for index, step in enumerate(pipeline.steps):
        operation = coherent_add if step.kind == "add" else coherent_subtract
        try:
            state, weight = operation(state, step.weight)
        except StepError as error:
            raise type(error)(str(error), step=index) from error
        cumulative_weight *= weight
    return state, cumulative_weight
