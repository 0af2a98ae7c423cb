from __future__ import annotations

import logging

import pytest

from CPAkit.core_api import CutoffConfig, PureTwoModeState
from CPAkit.states import tmsv


@pytest.fixture
def cutoff() -> CutoffConfig:
    return CutoffConfig(n_max=12)


@pytest.fixture
def vacuum(cutoff: CutoffConfig) -> PureTwoModeState:
    return PureTwoModeState.vacuum(cutoff)


@pytest.fixture
def squeezed_state(request: pytest.FixtureRequest) -> PureTwoModeState:
    """Two-mode squeezed vacuum, parametrized indirectly.

    request.param is a dict with the keys "lam" (default 0.3)
    and "n_max" (default 12).
    """
    params = getattr(request, "param", {})
    lam = params.get("lam", 0.3)
    n_max = params.get("n_max", 12)
    return tmsv(lam, CutoffConfig(n_max=n_max))


@pytest.fixture(autouse=True)
def patch_filehandlers(
    monkeypatch: pytest.MonkeyPatch,
    request: pytest.FixtureRequest,
) -> None:
    if "allow_log_write_to_file" in request.keywords:
        return

    def disabled_filewrite(self: any, record: any) -> None:
        pass

    monkeypatch.setattr(logging.FileHandler, "emit", disabled_filewrite)
