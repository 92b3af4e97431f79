"""Shared test fixtures for alopt."""

from collections.abc import Generator
from pathlib import Path

import pytest

from alopt.data import Instance, Provenance, airbus_reference_instance, generate_sized_instance
from alopt.model import ConstraintSystem, build_constraints
from alopt.settings import SEED_ENV, THREADS_ENV
from tests.helpers import payload_of, small_aircraft


@pytest.fixture(autouse=True)
def clean_env(monkeypatch: pytest.MonkeyPatch) -> Generator[None, None, None]:
    """Keep seed and thread settings from the shell out of the tests."""
    monkeypatch.delenv(SEED_ENV, raising=False)
    monkeypatch.delenv(THREADS_ENV, raising=False)
    yield


@pytest.fixture
def reference_instance() -> Instance:
    """The 30-container, 20-bin sample data set."""
    return airbus_reference_instance()


@pytest.fixture
def reference_system(reference_instance: Instance) -> ConstraintSystem:
    return build_constraints(reference_instance.spec, reference_instance.payload)


@pytest.fixture
def tiny_instance() -> Instance:
    """Four bins, one container of each size plus a spare size 1."""
    spec = small_aircraft(4)
    payload = payload_of((1, 1, 2000), (2, 1, 1500), (3, 2, 900), (4, 3, 4000))
    return Instance(spec, payload, Provenance("file"))


@pytest.fixture
def generated_instance() -> Instance:
    return generate_sized_instance(12, 8, seed=7)


@pytest.fixture
def workdir(tmp_path: Path) -> Path:
    """Temporary directory for written artifacts."""
    out = tmp_path / "work"
    out.mkdir()
    return out
