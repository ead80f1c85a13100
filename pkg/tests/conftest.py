import pytest

from spheretrack import create_app
from spheretrack.splitting import build_diagram


@pytest.fixture(scope="session")
def l21():
    return build_diagram(2, 1)


@pytest.fixture(scope="session")
def l31():
    return build_diagram(3, 1)


@pytest.fixture(scope="session")
def l52():
    return build_diagram(5, 2)


@pytest.fixture
def app(tmp_path, monkeypatch):
    """A cache in a throwaway folder; never touches the user's data folder."""
    monkeypatch.setenv("SPHERETRACK_CACHE_DIR", str(tmp_path / "cache"))
    return create_app()


@pytest.fixture
def session(app):
    session = app.Session()
    yield session
    session.close()


def seed_budget(diagram):
    """Smallest budget at which alpha1, alpha2 and beta2 are enumerated."""
    return max(max(c.weights) for c in (diagram.alpha1, diagram.alpha2, diagram.beta2))
