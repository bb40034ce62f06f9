import pytest

from betadyn import Beta


@pytest.fixture(scope="session")
def b2():
    return Beta.integer(2)


@pytest.fixture(scope="session")
def b3():
    return Beta.integer(3)


@pytest.fixture(scope="session")
def phi():
    return Beta.golden()


@pytest.fixture(scope="session")
def silver():
    # 1 + sqrt(2), root of x**2 - 2x - 1 in [2, 3]
    return Beta.quadratic(1, -2, -1, 2, 3)


@pytest.fixture(scope="session")
def b18():
    return Beta.parse("1.8")


@pytest.fixture(scope="session")
def bpi():
    return Beta.pi()
