from __future__ import annotations

import numpy as np
import pytest

from CPAkit.core_api import (
    CutoffConfig,
    DensityOperator,
    ModeOperator,
    PureTwoModeState,
    annihilation_matrix,
    apply_mode,
    creation_matrix,
    fix_global_phase,
    identity_matrix,
    normalize,
    number_matrix,
    pure_to_density,
    purity,
    reduced_density,
)
from CPAkit.exceptions import CutoffMismatch, TruncationOverflow, ZeroNorm
from CPAkit.states import tmsv


def fock_vector(n: int, cutoff: CutoffConfig) -> np.ndarray:
    return np.eye(cutoff.dim)[n]


@pytest.mark.unit
@pytest.mark.parametrize(
    "kwargs",
    [
        pytest.param({"n_max": 0}, id="empty_space"),
        pytest.param({"n_max": 2.5}, id="non_integer_n_max"),
        pytest.param({"n_max": 4, "norm_tol": 0.0}, id="null_norm_tol"),
        pytest.param({"n_max": 4, "tail_tol": 1e-3}, id="tail_tol_too_large"),
        pytest.param({"n_max": 4, "tail_tol": -1e-8}, id="negative_tail_tol"),
    ],
)
def test_cutoff_config_validation(kwargs: dict) -> None:
    with pytest.raises(ValueError):
        CutoffConfig(**kwargs)


@pytest.mark.unit
@pytest.mark.parametrize(
    ("lam", "headroom", "expected"),
    [
        pytest.param(0.0, 0, 8, id="vacuum_clamped_to_minimum"),
        pytest.param(0.0, 2, 10, id="vacuum_with_headroom"),
        pytest.param(0.5, 0, 36, id="amplitude_criterion"),
        pytest.param(0.999, 0, 256, id="clamped_to_maximum"),
    ],
)
def test_cutoff_for_squeezing(lam: float, headroom: int, expected: int) -> None:
    cutoff = CutoffConfig.for_squeezing(lam, headroom=headroom)
    assert cutoff.n_max == expected
    assert cutoff.dim == expected + 1


@pytest.mark.unit
def test_cutoff_for_squeezing_rejects_unphysical_lambda() -> None:
    with pytest.raises(ValueError, match="lambda"):
        CutoffConfig.for_squeezing(1.0)


@pytest.mark.unit
def test_cutoff_check_same() -> None:
    CutoffConfig(5).check_same(CutoffConfig(5, tail_tol=1e-6))
    with pytest.raises(CutoffMismatch):
        CutoffConfig(5).check_same(CutoffConfig(6))


@pytest.mark.unit
@pytest.mark.parametrize(
    ("input_level", "output_level", "amplitude"),
    [
        pytest.param(0, 1, 1.0, id="vacuum"),
        pytest.param(3, 4, 2.0, id="three_photons"),
        pytest.param(5, None, 0.0, id="top_level_truncated"),
    ],
)
def test_creation_matrix(
    input_level: int,
    output_level: int | None,
    amplitude: float,
) -> None:
    cutoff = CutoffConfig(5)
    result = creation_matrix(cutoff).matrix @ fock_vector(input_level, cutoff)
    expected = (
        np.zeros(cutoff.dim)
        if output_level is None
        else amplitude * fock_vector(output_level, cutoff)
    )
    assert np.allclose(result, expected, atol=1e-15)


@pytest.mark.unit
@pytest.mark.parametrize(
    ("input_level", "output_level", "amplitude"),
    [
        pytest.param(1, 0, 1.0, id="one_photon"),
        pytest.param(0, None, 0.0, id="vacuum_annihilated"),
        pytest.param(4, 3, 2.0, id="four_photons"),
    ],
)
def test_annihilation_matrix(
    input_level: int,
    output_level: int | None,
    amplitude: float,
) -> None:
    cutoff = CutoffConfig(5)
    result = annihilation_matrix(cutoff).matrix @ fock_vector(input_level, cutoff)
    expected = (
        np.zeros(cutoff.dim)
        if output_level is None
        else amplitude * fock_vector(output_level, cutoff)
    )
    assert np.allclose(result, expected, atol=1e-15)


@pytest.mark.unit
def test_mode_operator_algebra(cutoff: CutoffConfig) -> None:
    creation = creation_matrix(cutoff)
    assert creation.adjoint.kind == "annihilation"
    assert np.array_equal(creation.adjoint.matrix, annihilation_matrix(cutoff).matrix)
    assert np.allclose(np.diag(number_matrix(cutoff).matrix), np.arange(cutoff.dim))

    with pytest.raises(ValueError):
        creation.matrix[0, 0] = 1

    with pytest.raises(CutoffMismatch):
        creation @ annihilation_matrix(CutoffConfig(cutoff.n_max + 1))

    with pytest.raises(ValueError, match="must be"):
        ModeOperator(np.eye(3), cutoff)


@pytest.mark.unit
@pytest.mark.parametrize(
    "amplitudes",
    [
        pytest.param(2 * np.eye(3)[0][:, None] * np.eye(3)[0], id="not_normalized"),
        pytest.param(np.ones((3, 4)) / np.sqrt(12), id="wrong_shape"),
        pytest.param(np.full((3, 3), np.nan), id="not_finite"),
    ],
)
def test_pure_state_validation(amplitudes: np.ndarray) -> None:
    with pytest.raises(ValueError):
        PureTwoModeState(amplitudes, CutoffConfig(2))


@pytest.mark.unit
def test_pure_state_constructors(cutoff: CutoffConfig) -> None:
    state = PureTwoModeState.fock(2, 1, cutoff)
    assert state.amplitudes[2, 1] == 1
    assert state.ket[2 * cutoff.dim + 1] == 1
    assert state == PureTwoModeState.fock(2, 1, cutoff)
    assert state != PureTwoModeState.fock(1, 2, cutoff)
    assert PureTwoModeState.vacuum(cutoff).probabilities[0, 0] == 1

    with pytest.raises(ValueError, match="outside"):
        PureTwoModeState.fock(cutoff.n_max + 1, 0, cutoff)


@pytest.mark.unit
def test_apply_mode_on_vacuum(vacuum: PureTwoModeState) -> None:
    amplitudes, norm_squared = apply_mode(creation_matrix(vacuum.cutoff), 1, vacuum)
    assert amplitudes[1, 0] == 1
    assert norm_squared == 1

    amplitudes, norm_squared = apply_mode(annihilation_matrix(vacuum.cutoff), 1, vacuum)
    assert not np.any(amplitudes)
    assert norm_squared == 0


@pytest.mark.unit
def test_apply_mode_on_squeezed_vacuum() -> None:
    state = tmsv(0.5, CutoffConfig(20))
    amplitudes, _ = apply_mode(creation_matrix(state.cutoff), 2, state)
    assert amplitudes[1, 2] == pytest.approx(np.sqrt(0.75) * 0.5 * np.sqrt(2), rel=1e-9)
    assert not np.any(amplitudes[1, :2])


@pytest.mark.unit
def test_apply_mode_errors(vacuum: PureTwoModeState) -> None:
    with pytest.raises(CutoffMismatch):
        apply_mode(creation_matrix(CutoffConfig(4)), 1, vacuum)
    with pytest.raises(ValueError, match="Mode index"):
        apply_mode(creation_matrix(vacuum.cutoff), 3, vacuum)


@pytest.mark.unit
def test_apply_identity_copies(vacuum: PureTwoModeState) -> None:
    amplitudes, norm_squared = apply_mode(identity_matrix(vacuum.cutoff), 2, vacuum)
    amplitudes[0, 0] = 0
    assert norm_squared == 1
    assert vacuum.amplitudes[0, 0] == 1


@pytest.mark.unit
def test_normalize(vacuum: PureTwoModeState) -> None:
    state, norm = normalize(2 * vacuum.amplitudes, vacuum.cutoff)
    assert norm == 2
    assert state == vacuum

    with pytest.raises(ZeroNorm, match="step 3"):
        normalize(np.zeros_like(vacuum.amplitudes), vacuum.cutoff, step=3)


@pytest.mark.unit
@pytest.mark.parametrize("phase", [0.0, 0.4, -2.9])
def test_normalize_is_idempotent(phase: float) -> None:
    cutoff = CutoffConfig(12)
    amplitudes, _ = apply_mode(creation_matrix(cutoff), 2, tmsv(0.3, cutoff))
    state, _ = normalize(3 * np.exp(1j * phase) * amplitudes, cutoff)
    again, norm = normalize(state.amplitudes, cutoff)
    assert norm == pytest.approx(1.0, abs=1e-14)
    assert np.allclose(again.amplitudes, state.amplitudes, rtol=0, atol=1e-15)


@pytest.mark.unit
def test_pure_state_equality_and_hash(cutoff: CutoffConfig) -> None:
    assert PureTwoModeState.vacuum(cutoff) == PureTwoModeState.fock(0, 0, cutoff)
    assert PureTwoModeState.vacuum(cutoff) != PureTwoModeState.fock(1, 0, cutoff)
    assert PureTwoModeState.vacuum(cutoff) != PureTwoModeState.vacuum(CutoffConfig(3))
    with pytest.raises(TypeError, match="unhashable"):
        hash(PureTwoModeState.vacuum(cutoff))


@pytest.mark.unit
def test_fix_global_phase(vacuum: PureTwoModeState) -> None:
    rotated = np.exp(0.7j) * vacuum.amplitudes
    assert np.allclose(fix_global_phase(rotated), vacuum.amplitudes, atol=1e-15)

    amplitudes = np.zeros((3, 3), dtype=complex)
    amplitudes[0, 1] = 1j / np.sqrt(2)
    amplitudes[1, 0] = -1j / np.sqrt(2)
    fixed = fix_global_phase(amplitudes)
    assert fixed[0, 1] == pytest.approx(1 / np.sqrt(2))
    assert fixed[1, 0] == pytest.approx(-1 / np.sqrt(2))


@pytest.mark.unit
@pytest.mark.parametrize(
    ("state", "expected"),
    [
        pytest.param(PureTwoModeState.vacuum(CutoffConfig(5)), 0.0, id="vacuum"),
        pytest.param(PureTwoModeState.fock(5, 0, CutoffConfig(5)), 1.0, id="top_row"),
        pytest.param(PureTwoModeState.fock(0, 5, CutoffConfig(5)), 1.0, id="top_column"),
    ],
)
def test_tail_mass(state: PureTwoModeState, expected: float) -> None:
    assert state.tail_mass == expected


@pytest.mark.unit
def test_check_converged() -> None:
    assert tmsv(0.5, CutoffConfig(20)).tail_mass < 1e-10
    with pytest.raises(TruncationOverflow, match="step 1"):
        PureTwoModeState.fock(5, 0, CutoffConfig(5)).check_converged(step=1)


@pytest.mark.unit
@pytest.mark.parametrize(
    "matrix",
    [
        pytest.param(np.array([[0.5, 0.1], [0.0, 0.5]]), id="not_hermitian"),
        pytest.param(np.eye(2), id="trace_two"),
        pytest.param(np.diag([1.5, -0.5]), id="negative_eigenvalue"),
        pytest.param(np.eye(3) / 3, id="wrong_dimension"),
    ],
)
def test_density_operator_validation(matrix: np.ndarray) -> None:
    with pytest.raises(ValueError):
        DensityOperator(matrix, 1, CutoffConfig(1))


@pytest.mark.unit
def test_density_operator_normalized() -> None:
    rho = DensityOperator.normalized(np.diag([3.0, 1.0]), 1, CutoffConfig(1))
    assert np.allclose(rho.populations, [0.75, 0.25])
    assert rho.tail_mass == pytest.approx(0.25)
    with pytest.raises(TruncationOverflow):
        rho.check_converged()


@pytest.mark.unit
def test_pure_to_density(vacuum: PureTwoModeState) -> None:
    rho = pure_to_density(PureTwoModeState.fock(1, 2, vacuum.cutoff))
    assert rho.mode_count == 2
    assert rho.dim == vacuum.cutoff.dim**2
    assert rho.as_tensor()[1, 2, 1, 2] == 1
    assert rho.populations[1, 2] == 1
    assert purity(rho) == pytest.approx(1.0)


@pytest.mark.unit
def test_reduce_vacuum(vacuum: PureTwoModeState) -> None:
    reduced = reduced_density(vacuum, 1)
    expected = np.zeros((vacuum.cutoff.dim, vacuum.cutoff.dim))
    expected[0, 0] = 1
    assert reduced.mode_count == 1
    assert np.allclose(reduced.matrix, expected)


@pytest.mark.unit
@pytest.mark.parametrize("keep", [1, 2])
def test_reduce_single_photon_superposition(cutoff: CutoffConfig, keep: int) -> None:
    amplitudes = np.zeros((cutoff.dim, cutoff.dim))
    amplitudes[1, 0] = amplitudes[0, 1] = 1 / np.sqrt(2)
    state = PureTwoModeState(amplitudes, cutoff)

    for reduced in (reduced_density(state, keep), reduced_density(pure_to_density(state), keep)):
        assert np.allclose(reduced.matrix[:2, :2], np.eye(2) / 2)
        assert np.allclose(reduced.matrix[2:, :], 0)


@pytest.mark.unit
def test_reduce_squeezed_vacuum() -> None:
    lam = 0.5
    state = tmsv(lam, CutoffConfig(20))
    n = np.arange(21)
    thermal = (1 - lam**2) * lam ** (2 * n)
    for keep in (1, 2):
        reduced = reduced_density(state, keep)
        assert np.allclose(reduced.matrix, np.diag(thermal), atol=1e-9)
        assert purity(reduced) == pytest.approx((1 - lam**2) / (1 + lam**2), abs=1e-9)


@pytest.mark.unit
def test_reduce_routes_agree() -> None:
    cutoff = CutoffConfig(6)
    rng = np.random.default_rng(7)
    amplitudes = rng.normal(size=(7, 7)) + 1j * rng.normal(size=(7, 7))
    amplitudes[-1, :] = amplitudes[:, -1] = 0
    state, _ = normalize(amplitudes, cutoff)
    for keep in (1, 2):
        assert np.allclose(
            reduced_density(state, keep).matrix,
            reduced_density(pure_to_density(state), keep).matrix,
            atol=1e-12,
        )


@pytest.mark.unit
def test_reduce_errors(vacuum: PureTwoModeState) -> None:
    with pytest.raises(ValueError, match="Mode index"):
        reduced_density(vacuum, 3)
    with pytest.raises(ValueError, match="two-mode"):
        reduced_density(reduced_density(vacuum, 1), 1)
