"""
Test configuration and fixtures.
"""
from pathlib import Path
from typing import Generator

import pytest

from cprng.config.settings import get_settings
from cprng.models.tent_map import GeneratorState
from cprng.schemas.coupling import CouplingConfig
from cprng.schemas.presets import CANONICAL_X0, DENSITY_X0


@pytest.fixture
def coupling4() -> CouplingConfig:
    """The canonical 4-coupled system (eps1 = 1e-14, a = 2)."""
    return CouplingConfig(p=4)


@pytest.fixture
def coupling3() -> CouplingConfig:
    """The 3-coupled system of the density runs."""
    return CouplingConfig(p=3)


@pytest.fixture
def generator4(coupling4: CouplingConfig) -> GeneratorState:
    """Fresh 4-coupled generator from the correlation/sampling initial vector."""
    return GeneratorState(coupling4, CANONICAL_X0)


@pytest.fixture
def generator3(coupling3: CouplingConfig) -> GeneratorState:
    """Fresh 3-coupled generator from the density initial vector."""
    return GeneratorState(coupling3, DENSITY_X0[:3])


@pytest.fixture
def tmp_output(tmp_path: Path) -> Path:
    """Path of an output file inside a per-test directory."""
    return tmp_path / "out.csv"


@pytest.fixture
def env_settings(monkeypatch: pytest.MonkeyPatch) -> Generator:
    """
    Set CPRNG_* variables for one test.

    Usage: ``env_settings(CHUNK_SIZE="64")``; the cached settings are reset
    before and after.
    """

    def apply(**values: str) -> None:
        for key, value in values.items():
            monkeypatch.setenv(f"CPRNG_{key}", value)
        get_settings.cache_clear()

    yield apply
    monkeypatch.undo()
    get_settings.cache_clear()
