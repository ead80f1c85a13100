import logging
import os
from dataclasses import dataclass

from sqlalchemy import create_engine
from sqlalchemy.orm import sessionmaker

from .models import Base

logger = logging.getLogger(__name__)

CACHE_DIR_ENV = "SPHERETRACK_CACHE_DIR"


def default_data_folder():
    """
    The writable folder for the enumeration cache.

    SPHERETRACK_CACHE_DIR wins; otherwise a SphereTrack folder inside the
    user's application data folder (APPDATA on Windows, home elsewhere).
    """
    override = os.environ.get(CACHE_DIR_ENV)
    if override:
        return override
    app_data_path = os.environ.get("APPDATA") or os.path.expanduser("~")
    return os.path.join(app_data_path, "SphereTrack")


@dataclass
class App:
    config: dict
    engine: object
    Session: object

    def __repr__(self):
        return f"<App {self.config['DATABASE_URI']}>"


def create_app(config_overrides=None):
    """Application factory: resolves the data folder, opens the cache and creates its tables."""
    config_overrides = dict(config_overrides or {})
    data_folder = config_overrides.pop("DATA_FOLDER", None) or default_data_folder()

    # Safely create this folder if it doesn't already exist
    os.makedirs(data_folder, exist_ok=True)
    db_path = os.path.join(data_folder, "cache.db")

    config = {
        "DATA_FOLDER": data_folder,
        "DATABASE_URI": f"sqlite:///{db_path}",
        "WORKERS": 1,
    }
    config.update(config_overrides)

    engine = create_engine(config["DATABASE_URI"])
    Base.metadata.create_all(engine)
    logger.debug("Cache database ready at %s", config["DATABASE_URI"])
    return App(config, engine, sessionmaker(bind=engine))
