from __future__ import annotations

import io

import numpy as np
import pandas as pd
import pytest
from scipy.integrate import trapezoid

from CPAkit.core_api import (
    CutoffConfig,
    DensityOperator,
    PureTwoModeState,
    pure_to_density,
    reduced_density,
)
from CPAkit.exceptions import InvalidCount
from CPAkit.phase_space import (
    PhasePoint,
    WignerGrid,
    displacement_matrix,
    hermite_functions,
    homodyne_sample,
    quadrature_pdf,
    wigner_grid,
    wigner_point,
    wigner_two_mode_point,
)
from CPAkit.states import coherent_add, tmsv

ORIGIN = PhasePoint(0.0, 0.0)


def fock_density(n: int, n_max: int = 10) -> DensityOperator:
    populations = np.zeros(n_max + 1)
    populations[n] = 1
    return DensityOperator(np.diag(populations), 1, CutoffConfig(n_max))


@pytest.fixture
def cpa_vacuum(vacuum: PureTwoModeState) -> PureTwoModeState:
    return coherent_add(vacuum, 1.0)[0]


@pytest.mark.unit
def test_phase_point() -> None:
    assert PhasePoint(1.0, -1.0).alpha == pytest.approx((1 - 1j) / np.sqrt(2))
    with pytest.raises(ValueError, match="finite"):
        PhasePoint(np.nan, 0.0)


@pytest.mark.unit
def test_displacement_matrix() -> None:
    assert np.allclose(displacement_matrix(0.0, 6), np.eye(6))

    matrix = displacement_matrix(0.5 - 0.3j, 40)
    assert np.allclose(
        np.linalg.norm(matrix[:, :5], axis=0),
        1.0,
        atol=1e-10,
    )
    assert matrix[1, 0] == pytest.approx((0.5 - 0.3j) * np.exp(-0.34 / 2))

    stacked = displacement_matrix(np.array([0.1, 0.2j]), 8)
    assert stacked.shape == (8, 8, 2)
    assert np.allclose(stacked[..., 1], displacement_matrix(0.2j, 8))


@pytest.mark.unit
@pytest.mark.parametrize(
    ("rho", "expected"),
    [
        pytest.param(fock_density(0), 1 / np.pi, id="vacuum"),
        pytest.param(fock_density(1), -1 / np.pi, id="one_photon"),
        pytest.param(fock_density(2), 1 / np.pi, id="two_photons"),
        pytest.param(
            DensityOperator(np.diag([0.5, 0.5, 0, 0]), 1, CutoffConfig(3)),
            0.0,
            id="mixture",
        ),
    ],
)
def test_wigner_at_origin(rho: DensityOperator, expected: float) -> None:
    assert wigner_point(rho, ORIGIN) == pytest.approx(expected, abs=1e-12)


@pytest.mark.unit
def test_wigner_of_vacuum_is_gaussian() -> None:
    point = PhasePoint(1.0, -0.5)
    assert wigner_point(fock_density(0), point) == pytest.approx(
        np.exp(-1.25) / np.pi,
        rel=1e-10,
    )


@pytest.mark.unit
def test_wigner_of_reduced_cpa_vacuum(cpa_vacuum: PureTwoModeState) -> None:
    for mode in (1, 2):
        reduced = reduced_density(cpa_vacuum, mode)
        assert wigner_point(reduced, ORIGIN) == pytest.approx(0.0, abs=1e-12)


@pytest.mark.unit
def test_wigner_needs_single_mode(vacuum: PureTwoModeState) -> None:
    with pytest.raises(ValueError, match="single-mode"):
        wigner_point(pure_to_density(vacuum), ORIGIN)


@pytest.mark.unit
@pytest.mark.parametrize("n", [0, 1, 3])
def test_wigner_grid_integral(n: int) -> None:
    grid = wigner_grid(fock_density(n), -7, 7, -7, 7, 141, 141)
    assert grid.values.shape == (141, 141)
    assert grid.integral() == pytest.approx(1.0, abs=1e-6)
    assert grid.values[70, 70] == pytest.approx((-1) ** n / np.pi, abs=1e-12)


@pytest.mark.unit
def test_wigner_grid_rows_match_points() -> None:
    rho = reduced_density(tmsv(0.3, CutoffConfig(12)), 1)
    grid = wigner_grid(rho, -2, 2, -1, 1, 5, 3)
    for i, x in enumerate(grid.x):
        for j, p in enumerate(grid.p):
            assert grid.values[i, j] == pytest.approx(
                wigner_point(rho, PhasePoint(x, p)),
                abs=1e-14,
            )


@pytest.mark.unit
def test_wigner_grid_validation() -> None:
    with pytest.raises(ValueError, match="ordered"):
        WignerGrid(1.0, -1.0, -1.0, 1.0, 2, 2, np.zeros((2, 2)))
    with pytest.raises(ValueError, match="at least 2"):
        WignerGrid(-1.0, 1.0, -1.0, 1.0, 1, 2, np.zeros((1, 2)))
    with pytest.raises(ValueError, match="finite"):
        WignerGrid(-1.0, 1.0, -1.0, 1.0, 2, 2, np.zeros((2, 3)))


@pytest.mark.unit
def test_wigner_grid_csv() -> None:
    grid = wigner_grid(fock_density(0), -1, 1, -1, 1, 3, 2)
    stream = io.StringIO()
    grid.to_csv(stream)
    lines = stream.getvalue().splitlines()

    assert lines[0] == "x,p,w"
    assert len(lines) == 1 + 3 * 2
    assert [line.split(",")[:2] for line in lines[1:]] == [
        ["-1", "-1"],
        ["-1", "1"],
        ["0", "-1"],
        ["0", "1"],
        ["1", "-1"],
        ["1", "1"],
    ]

    frame = pd.read_csv(io.StringIO(stream.getvalue()), float_precision="round_trip")
    assert np.array_equal(frame["w"].to_numpy(), grid.values.reshape(-1))


@pytest.mark.unit
def test_two_mode_wigner_at_origin(
    vacuum: PureTwoModeState,
    cpa_vacuum: PureTwoModeState,
) -> None:
    assert wigner_two_mode_point(vacuum, ORIGIN, ORIGIN) == pytest.approx(
        1 / np.pi**2,
        abs=1e-12,
    )
    assert wigner_two_mode_point(cpa_vacuum, ORIGIN, ORIGIN) == pytest.approx(
        -1 / np.pi**2,
        abs=1e-12,
    )
    assert wigner_two_mode_point(tmsv(0.3, vacuum.cutoff), ORIGIN, ORIGIN) > 0


@pytest.mark.unit
def test_two_mode_wigner_routes_agree() -> None:
    state, _ = coherent_add(tmsv(0.3, CutoffConfig(12)), 0.6 + 0.2j)
    pt1, pt2 = PhasePoint(0.4, -0.2), PhasePoint(-0.7, 0.1)
    assert wigner_two_mode_point(pure_to_density(state), pt1, pt2) == pytest.approx(
        wigner_two_mode_point(state, pt1, pt2),
        abs=1e-12,
    )

    with pytest.raises(ValueError, match="two-mode"):
        wigner_two_mode_point(reduced_density(state, 1), pt1, pt2)


@pytest.mark.unit
def test_hermite_functions_orthonormal() -> None:
    x = np.linspace(-12, 12, 6001)
    psi = hermite_functions(x, 12)
    overlaps = trapezoid(psi[:, None, :] * psi[None, :, :], x, axis=-1)
    assert np.allclose(overlaps, np.eye(12), atol=1e-8)


@pytest.mark.unit
@pytest.mark.parametrize("theta", [0.0, 0.7, np.pi / 2])
def test_quadrature_pdf_of_fock_states(theta: float) -> None:
    assert quadrature_pdf(fock_density(0), theta, 0.0) == pytest.approx(
        1 / np.sqrt(np.pi),
        rel=1e-12,
    )
    assert quadrature_pdf(fock_density(1), theta, 0.0) == pytest.approx(0.0, abs=1e-15)

    x = np.linspace(-8, 8, 4001)
    for n in (0, 1, 4):
        assert trapezoid(quadrature_pdf(fock_density(n), theta, x), x) == pytest.approx(
            1.0,
            abs=1e-6,
        )


@pytest.mark.unit
@pytest.mark.parametrize("theta", [0.0, 0.7, 2.1, np.pi])
def test_quadrature_pdf_of_thermal_state_ignores_phase(theta: float) -> None:
    n_max = 30
    populations = 0.7 * 0.3 ** np.arange(n_max + 1)
    rho = DensityOperator.normalized(np.diag(populations), 1, CutoffConfig(n_max))
    x = np.linspace(-4, 4, 81)
    assert np.allclose(
        quadrature_pdf(rho, theta, x),
        quadrature_pdf(rho, 0.0, x),
        rtol=0,
        atol=1e-14,
    )


@pytest.mark.unit
@pytest.mark.parametrize(
    "rho",
    [
        pytest.param(
            DensityOperator(
                np.outer([1, np.exp(0.4j), 0, 0], [1, np.exp(-0.4j), 0, 0]) / 2,
                1,
                CutoffConfig(3),
            ),
            id="vacuum_photon_superposition",
        ),
        pytest.param(
            reduced_density(coherent_add(tmsv(0.3, CutoffConfig(14)), 1.0)[0], 1),
            id="reduced_cpa",
        ),
    ],
)
def test_wigner_marginal_is_quadrature_pdf(rho: DensityOperator) -> None:
    grid = wigner_grid(rho, -2.0, 2.0, -9.0, 9.0, 9, 901)
    marginal = trapezoid(grid.values, grid.p, axis=1)
    assert np.allclose(marginal, quadrature_pdf(rho, 0.0, grid.x), rtol=0, atol=1e-10)


@pytest.mark.unit
def test_quadrature_pdf_phase_dependence() -> None:
    matrix = np.zeros((6, 6))
    matrix[:2, :2] = 0.5
    rho = DensityOperator(matrix, 1, CutoffConfig(5))
    x = np.linspace(-3, 3, 61)
    assert np.allclose(
        quadrature_pdf(rho, 0.3, x),
        quadrature_pdf(rho, 0.3 + np.pi, -x),
        atol=1e-14,
    )
    assert not np.allclose(quadrature_pdf(rho, 0.0, x), quadrature_pdf(rho, 0.0, -x))


@pytest.mark.unit
def test_homodyne_vacuum_variance() -> None:
    samples = homodyne_sample(fock_density(0), 0.0, 100_000, seed=3)
    assert samples.shape == (100_000,)
    assert np.var(samples) == pytest.approx(0.5, abs=0.01)


@pytest.mark.unit
def test_homodyne_is_seeded() -> None:
    rho = reduced_density(tmsv(0.3, CutoffConfig(12)), 2)
    first = homodyne_sample(rho, 0.4, 500, seed=11)
    assert np.array_equal(first, homodyne_sample(rho, 0.4, 500, seed=11))
    assert not np.array_equal(first, homodyne_sample(rho, 0.4, 500, seed=12))


@pytest.mark.unit
def test_homodyne_one_photon_is_bimodal() -> None:
    samples = homodyne_sample(fock_density(1), 0.0, 100_000, seed=5)
    assert np.mean(np.abs(samples) < 0.05) < 0.005


@pytest.mark.unit
@pytest.mark.parametrize("count", [0, -3, 2.5])
def test_homodyne_invalid_count(count: float) -> None:
    with pytest.raises(InvalidCount):
        homodyne_sample(fock_density(0), 0.0, count, seed=0)
