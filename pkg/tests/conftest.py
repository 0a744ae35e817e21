import pytest

from brs.context import preset_context


@pytest.fixture(scope="session")
def ctx1():
    return preset_context("sqrt2")


@pytest.fixture(scope="session")
def ctx2():
    return preset_context("sqrt2_sqrt3")


@pytest.fixture(scope="session")
def ctx3():
    return preset_context("sqrt2_sqrt3_sqrt5")
