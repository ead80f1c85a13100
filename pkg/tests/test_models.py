import json

import pytest
from sqlalchemy import select

from spheretrack import create_app
from spheretrack.errors import CacheMismatchError
from spheretrack.models import DiagramPreset, DiskSetCache
from spheretrack.splitting import enumerate_disks
from spheretrack.utils import cached_disks, content_hash, lens_parameters, load_or_build_diagram

from conftest import seed_budget


def test_create_app_uses_the_cache_folder(app, tmp_path):
    assert app.config["DATA_FOLDER"] == str(tmp_path / "cache")
    assert app.config["DATABASE_URI"].endswith("cache.db")


def test_create_app_overrides(tmp_path):
    app = create_app({"DATA_FOLDER": str(tmp_path / "other"), "WORKERS": 4})
    assert app.config["WORKERS"] == 4
    assert (tmp_path / "other").is_dir()


def test_lens_parameters():
    assert lens_parameters(5) == [(2, 1), (3, 1), (4, 1), (5, 1), (5, 2)]


def test_preset_is_stored_then_reused(session):
    first = load_or_build_diagram(session, 3, 1)
    rows = session.execute(select(DiagramPreset)).scalars().all()
    assert len(rows) == 1
    assert repr(rows[0]) == f"<DiagramPreset L(3,1) {first.model_version}>"
    assert rows[0].to_dict()["diagram"]["p"] == 3
    assert load_or_build_diagram(session, 3, 1) == first


def test_disk_set_is_cached_with_its_hash(session, l21):
    n = seed_budget(l21)
    stored = cached_disks(session, l21, "V", n)
    row = session.execute(select(DiskSetCache)).scalar_one()
    assert row.content_hash == content_hash(row.payload_json)
    assert row.to_dict()["disk_count"] == len(stored)
    restored = cached_disks(session, l21, "V", n)
    assert [d.key for d in restored] == [d.key for d in stored]
    assert enumerate_disks(l21, "V", n) == tuple(restored)


def test_tampered_disk_set_is_rejected(session, l21):
    n = seed_budget(l21)
    cached_disks(session, l21, "W", n)
    row = session.execute(select(DiskSetCache)).scalar_one()
    row.payload_json = json.dumps(json.loads(row.payload_json)[:-1])
    session.commit()
    with pytest.raises(CacheMismatchError):
        cached_disks(session, l21, "W", n)


def test_stale_model_version_is_rejected(session, l21):
    n = seed_budget(l21)
    cached_disks(session, l21, "V", n)
    row = session.execute(select(DiskSetCache)).scalar_one()
    row.model_version = "older-model"
    session.commit()
    with pytest.raises(CacheMismatchError):
        cached_disks(session, l21, "V", n)
