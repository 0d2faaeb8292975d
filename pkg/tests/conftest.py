import pytest
from hypothesis import settings

from soluble_tower.config import TowerConfig
from soluble_tower.tower import Tower

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture(scope="session")
def tower23():
    return Tower(TowerConfig((2, 3)))


@pytest.fixture(scope="session")
def tower32():
    return Tower(TowerConfig((3, 2)))


@pytest.fixture(scope="session")
def tower232():
    return Tower(TowerConfig((2, 3, 2)))


@pytest.fixture(scope="session")
def tower5():
    return Tower(TowerConfig((2, 3, 2, 3, 2)))


class FaultyTower(Tower):
    """Negative control: products of two non-identity level-2+ elements pick up a stray center."""

    def multiply(self, a, b):
        out = super().multiply(a, b)
        if a.depth >= 2 and b.depth >= 2:
            z = self.center_generator(2)
            out = super().multiply(out, self.embed(z, max(out.level, 2)))
        return out


@pytest.fixture
def faulty_tower():
    return FaultyTower(TowerConfig((2, 3, 2)))


def pytest_terminal_summary(terminalreporter):
    import sys

    module = sys.modules.get("test_acceptance")
    if module is not None and module.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in module.RESULTS:
            terminalreporter.write_line(line)
