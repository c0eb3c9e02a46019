import pytest

from ehrhart_roots.graphs import enumerate_connected_simple


@pytest.fixture(scope="session")
def corpus5():
    """All connected simple graphs on 2..5 vertices (30 graphs)."""
    return [g for d in range(2, 6) for g in enumerate_connected_simple(d)]


@pytest.fixture(scope="session")
def corpus6():
    """All connected simple graphs on 2..6 vertices (142 graphs)."""
    return [g for d in range(2, 7) for g in enumerate_connected_simple(d)]
