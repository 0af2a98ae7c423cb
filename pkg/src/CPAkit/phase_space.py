"""Phase-space observables: Wigner functions, quadrature densities, homodyne samples.

Quadratures follow x = (a + a†)/sqrt(2), p = (a - a†)/(i sqrt(2)), so that
[x, p] = i and the vacuum has variance 1/2 in every quadrature.

The Wigner function is evaluated as a displaced parity,
W(x, p) = (1/pi)·Tr[rho D(2 alpha) Pi] with alpha = (x + i p)/sqrt(2).
The matrix elements of the displacement are associated Laguerre polynomials
with a Gaussian envelope; they are built by the ladder recurrence

    <m|D(b)|0> = exp(-|b|²/2) b^m / sqrt(m!)
    <m|D(b)|n> = (sqrt(m) <m-1|D(b)|n-1> - conj(b) <m|D(b)|n-1>) / sqrt(n)

which carries the envelope from the first term and never forms factorials,
so it stays finite for cutoffs in the hundreds.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np
import pandas as pd
from scipy.integrate import cumulative_trapezoid, trapezoid

from CPAkit.config import (
    HOMODYNE_POINTS,
    HOMODYNE_WINDOW,
    IMAGINARY_RESIDUE_TOL,
)
from CPAkit.config import global_logging_context as glc
from CPAkit.core_api import (
    DensityOperator,
    PureTwoModeState,
    parity_matrix,
)
from CPAkit.exceptions import InvalidCount
from CPAkit.utils.formatting_utils import write_csv

if TYPE_CHECKING:
    from typing import TextIO

NEGATIVE_PDF_WARNING = 1e-12


@dataclass(frozen=True)
class PhasePoint:
    """Point (x, p) of the single-mode phase space."""

    x: float
    p: float

    def __post_init__(self) -> None:
        """Validate that both quadratures are finite."""
        if not (np.isfinite(self.x) and np.isfinite(self.p)):
            message = f"Phase-space coordinates must be finite, got ({self.x}, {self.p})."
            raise ValueError(message)

    @property
    def alpha(self) -> complex:
        """Complex amplitude (x + i p)/sqrt(2) of the point."""
        return complex(self.x, self.p) / np.sqrt(2)


@dataclass(frozen=True, eq=False)
class WignerGrid:
    """Wigner function sampled on a regular (x, p) mesh.

    values[i, j] is W(x_i, p_j).
    """

    x_min: float
    x_max: float
    p_min: float
    p_max: float
    nx: int
    np_: int
    values: np.ndarray

    def __post_init__(self) -> None:
        """Validate the grid bounds, sizes and values."""
        if not (self.x_min < self.x_max and self.p_min < self.p_max):
            message = "Grid bounds must be ordered (min < max)."
            raise ValueError(message)
        if self.nx < 2 or self.np_ < 2:
            message = f"A grid needs at least 2 points per axis, got {self.nx}x{self.np_}."
            raise ValueError(message)
        values = np.asarray(self.values, dtype=float)
        if values.shape != (self.nx, self.np_) or not np.all(np.isfinite(values)):
            message = f"Grid values must be a finite {self.nx}x{self.np_} matrix."
            raise ValueError(message)
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def x(self) -> np.ndarray:
        """Abscissae of the grid."""
        return np.linspace(self.x_min, self.x_max, self.nx)

    @property
    def p(self) -> np.ndarray:
        """Ordinates of the grid."""
        return np.linspace(self.p_min, self.p_max, self.np_)

    def integral(self) -> float:
        """Integrate the sampled Wigner function with the trapezoid rule."""
        return float(trapezoid(trapezoid(self.values, self.p, axis=1), self.x))

    def to_frame(self) -> pd.DataFrame:
        """Return the grid as a row-major table with columns x, p, w."""
        xx, pp = np.meshgrid(self.x, self.p, indexing="ij")
        return pd.DataFrame(
            {"x": xx.reshape(-1), "p": pp.reshape(-1), "w": self.values.reshape(-1)},
        )

    def to_csv(self, stream: TextIO) -> None:
        """Write the grid as CSV (header x,p,w, 17 significant digits)."""
        write_csv(self.to_frame(), stream)


def displacement_matrix(beta: np.ndarray | complex, dim: int) -> np.ndarray:
    """Return the truncated displacement matrix elements <m|D(beta)|n>.

    Parameters
    ----------
    beta: np.ndarray | complex
        Displacement amplitude(s). Array inputs are evaluated elementwise.
    dim: int
        Dimension of the truncated Fock space.

    Returns
    -------
    np.ndarray:
        Array of shape (dim, dim) + shape(beta). The elements are exact
        matrix elements of the infinite-dimensional operator.

    """
    beta = np.asarray(beta, dtype=complex)
    matrix = np.zeros((dim, dim, *beta.shape), dtype=complex)
    matrix[0, 0] = np.exp(-np.abs(beta) ** 2 / 2)
    for m in range(1, dim):
        matrix[m, 0] = beta / np.sqrt(m) * matrix[m - 1, 0]
    sqrt_m = np.sqrt(np.arange(1, dim)).reshape((-1,) + (1,) * beta.ndim)
    for n in range(1, dim):
        column = -np.conj(beta) * matrix[:, n - 1]
        column[1:] += sqrt_m * matrix[:-1, n - 1]
        matrix[:, n] = column / np.sqrt(n)
    return matrix


def _displaced_parity(alpha: np.ndarray | complex, rho: DensityOperator) -> np.ndarray:
    """Return the matrix D(2 alpha)·Pi, shape (d, d) + shape(alpha)."""
    signs = np.diag(parity_matrix(rho.cutoff).matrix).real
    kernel = displacement_matrix(2 * np.asarray(alpha), rho.cutoff.dim)
    return kernel * signs.reshape((1, -1) + (1,) * np.ndim(alpha))


def _real_part(values: np.ndarray, context: str) -> np.ndarray:
    residue = float(np.max(np.abs(np.imag(values)), initial=0.0))
    if residue > IMAGINARY_RESIDUE_TOL:
        glc.logger.warning(
            "Discarding an imaginary residue of %.3e in the %s.",
            residue,
            context,
        )
    return np.real(values)


def _check_single_mode(rho: DensityOperator) -> None:
    if rho.mode_count != 1:
        message = "This observable needs a single-mode density operator; use reduced_density."
        raise ValueError(message)


def wigner_point(rho: DensityOperator, pt: PhasePoint) -> float:
    """Return the Wigner function of a single-mode state at one phase-space point.

    Normalized so that its integral is 1; the vacuum gives 1/pi at the origin.
    """
    _check_single_mode(rho)
    kernel = _displaced_parity(pt.alpha, rho)
    value = np.einsum("mn,nm->", rho.matrix, kernel) / np.pi
    return float(_real_part(np.asarray(value), "Wigner sum"))


def wigner_grid(
    rho: DensityOperator,
    x_min: float,
    x_max: float,
    p_min: float,
    p_max: float,
    nx: int,
    np_: int,
) -> WignerGrid:
    """Sample the Wigner function of a single-mode state on a regular mesh.

    The mesh is evaluated one x row at a time.

    Parameters
    ----------
    rho: DensityOperator
        Single-mode state.
    x_min, x_max, p_min, p_max: float
        Bounds of the mesh, included.
    nx, np_: int
        Number of points along x and p.

    Returns
    -------
    WignerGrid:
        The sampled Wigner function.

    """
    _check_single_mode(rho)
    xs = np.linspace(x_min, x_max, nx)
    ps = np.linspace(p_min, p_max, np_)
    values = np.empty((nx, np_))
    for row, x in enumerate(xs):
        alphas = (x + 1j * ps) / np.sqrt(2)
        kernel = _displaced_parity(alphas, rho)
        values[row] = _real_part(
            np.einsum("mn,nmk->k", rho.matrix, kernel) / np.pi,
            "Wigner grid",
        )
    return WignerGrid(x_min, x_max, p_min, p_max, nx, np_, values)


def wigner_two_mode_point(
    state: PureTwoModeState | DensityOperator,
    pt1: PhasePoint,
    pt2: PhasePoint,
) -> float:
    """Return the two-mode Wigner function at the joint point (pt1, pt2).

    W = (1/pi)²·Tr[rho (D1 Pi1 D1†)⊗(D2 Pi2 D2†)], so that |0, 0> gives 1/pi²
    at the joint origin.
    """
    if isinstance(state, DensityOperator) and state.mode_count != 2:
        message = "The two-mode Wigner function needs a two-mode state."
        raise ValueError(message)
    signs = np.diag(parity_matrix(state.cutoff).matrix).real
    dim = state.cutoff.dim
    kernel_1 = displacement_matrix(2 * pt1.alpha, dim) * signs
    kernel_2 = displacement_matrix(2 * pt2.alpha, dim) * signs

    if isinstance(state, PureTwoModeState):
        c = state.amplitudes
        value = np.sum(np.conj(c) * (kernel_1 @ c @ kernel_2.T))
    else:
        value = np.einsum("abcd,ca,db->", state.as_tensor(), kernel_1, kernel_2)
    return float(_real_part(np.asarray(value / np.pi**2), "two-mode Wigner sum"))


def hermite_functions(x: np.ndarray, dim: int) -> np.ndarray:
    """Return the oscillator eigenfunctions psi_n(x), n < dim, with vacuum variance 1/2.

    psi_n(x) = pi^(-1/4) (2^n n!)^(-1/2) H_n(x) exp(-x²/2), built by the
    three-term recurrence to avoid factorials.
    """
    x = np.asarray(x, dtype=float)
    psi = np.zeros((dim, *x.shape))
    psi[0] = np.pi**-0.25 * np.exp(-(x**2) / 2)
    if dim > 1:
        psi[1] = np.sqrt(2) * x * psi[0]
    for n in range(2, dim):
        psi[n] = np.sqrt(2 / n) * x * psi[n - 1] - np.sqrt((n - 1) / n) * psi[n - 2]
    return psi


def quadrature_pdf(
    rho: DensityOperator,
    theta: float,
    x: np.ndarray | float,
) -> np.ndarray | float:
    """Return the homodyne probability density p(x|theta) of a single-mode state.

    p(x|theta) = sum_mn rho_mn psi_n(x) psi_m(x) exp(i (n - m) theta),
    the marginal of the quadrature x cos(theta) - p sin(theta).
    Negative values left by truncation noise are clamped to 0.

    Parameters
    ----------
    rho: DensityOperator
        Single-mode state.
    theta: float
        Local oscillator phase, in radians.
    x: np.ndarray | float
        Quadrature value(s).

    Returns
    -------
    np.ndarray | float:
        The density, with the shape of x.

    """
    _check_single_mode(rho)
    psi = hermite_functions(x, rho.cutoff.dim)
    n = np.arange(rho.cutoff.dim)
    phases = np.exp(1j * (n[None, :] - n[:, None]) * theta)
    values = _real_part(
        np.einsum("mn,mn,n...,m...->...", rho.matrix, phases, psi, psi),
        "quadrature density",
    )
    if (lowest := float(np.min(values))) < -NEGATIVE_PDF_WARNING:
        glc.logger.warning("Clamping a negative quadrature density of %.3e.", lowest)
    values = np.clip(values, 0.0, None)
    return float(values) if np.ndim(values) == 0 else values


def homodyne_sample(
    rho: DensityOperator,
    theta: float,
    count: int,
    seed: int,
) -> np.ndarray:
    """Draw homodyne outcomes of a single-mode state by inverse-CDF sampling.

    The density is tabulated on the configured window (default [-8, 8],
    4096 points), its cumulative distribution is integrated with the
    trapezoid rule and inverted by linear interpolation.

    Parameters
    ----------
    rho: DensityOperator
        Single-mode state.
    theta: float
        Local oscillator phase, in radians.
    count: int
        Number of samples.
    seed: int
        Seed of the generator owned by this call; equal seeds give equal samples.

    Returns
    -------
    np.ndarray:
        The count quadrature outcomes.

    Raises
    ------
    InvalidCount:
        If count is not a positive integer.

    """
    if int(count) != count or count < 1:
        message = f"The sample count must be a positive integer, got {count}."
        raise InvalidCount(message)
    grid = np.linspace(*HOMODYNE_WINDOW, HOMODYNE_POINTS)
    cdf = cumulative_trapezoid(quadrature_pdf(rho, theta, grid), grid, initial=0.0)
    cdf /= cdf[-1]
    cdf, kept = np.unique(cdf, return_index=True)
    rng = np.random.default_rng(seed)
    return np.interp(rng.random(int(count)), cdf, grid[kept])
