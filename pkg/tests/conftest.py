import pytest

from beauville.catalog import build
from beauville.groups import subgroup_generated, trivial_subgroup
from beauville.classify import KernelContext


@pytest.fixture(scope="session")
def z52():
    return build("C5^2")


@pytest.fixture(scope="session")
def z5():
    return build("C5")


@pytest.fixture(scope="session")
def s5():
    return build("S5")


@pytest.fixture(scope="session")
def psl7():
    return build("PSL(2,7)")


@pytest.fixture(scope="session")
def chi1_context(z52):
    triv = trivial_subgroup(z52)
    return KernelContext(z52, (triv, triv, subgroup_generated(z52, [1])))
