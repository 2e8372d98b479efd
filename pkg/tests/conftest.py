import pytest

from mvlmul import gen_multiplier


@pytest.fixture(scope="session")
def b1():
    return gen_multiplier(2, 1)


@pytest.fixture(scope="session")
def b2():
    return gen_multiplier(2, 2)


@pytest.fixture(scope="session")
def b4():
    return gen_multiplier(2, 4)


@pytest.fixture(scope="session")
def b8():
    return gen_multiplier(2, 8)


@pytest.fixture(scope="session")
def q1():
    return gen_multiplier(4, 1)


@pytest.fixture(scope="session")
def q2():
    return gen_multiplier(4, 2)


@pytest.fixture(scope="session")
def q4():
    return gen_multiplier(4, 4)


@pytest.fixture(scope="session")
def all_designs(b1, b2, b4, b8, q1, q2, q4):
    return {(2, 1): b1, (2, 2): b2, (2, 4): b4, (2, 8): b8,
            (4, 1): q1, (4, 2): q2, (4, 4): q4}
