"""Pytest fixtures for laysem testing."""

from pathlib import Path

import pytest

from laysem.core import ConstructedSemiring
from laysem.monoids import ValuedMonoid, make_qmax, make_truncated_nat
from laysem.sorting import SortingKind, SortingSemiring, make_sorting
from tests.fixtures.instance_loader import InstanceLoader


@pytest.fixture(scope="session")
def project_root() -> Path:
    """Get project root directory.

    Returns:
        Path to project root
    """
    return Path(__file__).parent.parent


@pytest.fixture(scope="session")
def data_dir(project_root: Path) -> Path:
    """Get fixture data directory.

    Args:
        project_root: Project root path

    Returns:
        Path to tests/fixtures/data
    """
    return project_root / "tests" / "fixtures" / "data"


@pytest.fixture(scope="session")
def loader(data_dir: Path) -> InstanceLoader:
    """Create instance loader.

    Args:
        data_dir: Path to fixture data

    Returns:
        InstanceLoader instance
    """
    return InstanceLoader(data_dir)


@pytest.fixture(scope="session")
def nat_inf() -> SortingSemiring:
    return make_sorting(SortingKind.NAT_INF)


@pytest.fixture(scope="session")
def trunc4() -> SortingSemiring:
    return make_sorting(SortingKind.TRUNCATED, 4)


@pytest.fixture(scope="session")
def trunc_nat5() -> ValuedMonoid:
    return make_truncated_nat(5)


@pytest.fixture(scope="session")
def qmax() -> ValuedMonoid:
    return make_qmax()


@pytest.fixture(scope="session")
def r21(loader: InstanceLoader) -> ConstructedSemiring:
    """R(trunc:4, trunc-nat:5): values 0..4 at sorts 1..4 plus the infinite element <5>^0.

    Args:
        loader: InstanceLoader

    Returns:
        The 21-element reference instance
    """
    return loader.case("r21").build()


@pytest.fixture(scope="session")
def r5(loader: InstanceLoader) -> ConstructedSemiring:
    """R(trunc:2, trunc-nat:2), small enough to enumerate its monoid maps."""
    return loader.case("r5").build()


@pytest.fixture(scope="session")
def r3(loader: InstanceLoader) -> ConstructedSemiring:
    return loader.case("r3").build()


@pytest.fixture(scope="session")
def natinf_qmax(loader: InstanceLoader) -> ConstructedSemiring:
    """R(nat-inf, qmax), the infinite instance checked by sampling."""
    return loader.case("natinf_qmax").build()


@pytest.fixture
def seed_env(monkeypatch: pytest.MonkeyPatch) -> pytest.MonkeyPatch:
    """Clear LAYSEM_SEED so CLI runs use the built-in default seed.

    Args:
        monkeypatch: Pytest monkeypatch fixture

    Returns:
        The monkeypatch, for tests that set the variable themselves
    """
    monkeypatch.delenv("LAYSEM_SEED", raising=False)
    return monkeypatch
