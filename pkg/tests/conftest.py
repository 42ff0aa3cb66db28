import pytest

from oscispec import canonical_potential, compute_k2


@pytest.fixture
def canonical():
    return canonical_potential()


@pytest.fixture(scope="session")
def canonical_k2():
    # session-scoped: the dual-route computation is cheap but not free,
    # and half the suite wants this number
    return compute_k2(canonical_potential())
