import sys
from pathlib import Path

import pytest

PROJECT_ROOT = Path(__file__).resolve().parents[1]
SRC_PATH = PROJECT_ROOT / "src"
if SRC_PATH.exists():
    sys.path.insert(0, str(SRC_PATH))

from buraulab.claims.base import Workbench  # noqa: E402
from buraulab.groups.cache import GroupCache  # noqa: E402


@pytest.fixture(scope="session")
def store() -> GroupCache:
    """In-memory group cache shared by the whole test session."""
    return GroupCache()


@pytest.fixture
def bench(store: GroupCache) -> Workbench:
    return Workbench(store=store)
