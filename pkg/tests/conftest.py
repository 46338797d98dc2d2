import pytest

from knotlocal import cli, triangulate


@pytest.fixture(scope="session")
def knots():
    """Name -> parsed builtin triangulation."""
    return {t.name: t for t in cli.bundled_examples()}


@pytest.fixture(scope="session")
def systems(knots):
    """Name -> derived gluing system."""
    return {name: triangulate.gluing_system(t) for name, t in knots.items()}
