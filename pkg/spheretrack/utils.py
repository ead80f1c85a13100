"""
Export and cache helpers shared by the command surface and the seed script.
"""
import hashlib
import json
import logging
import os
from math import gcd

from sqlalchemy import select

from .complexes import ComplexGraph
from .errors import CacheMismatchError, ConfigError
from .models import DiagramPreset, DiskSetCache
from .splitting import (SIDES, HeegaardDiagram, build_diagram, diagram_checks, enumerate_disks,
                        make_disk, preload_disks)
from .surface import MODEL_VERSION, NormalCurve

logger = logging.getLogger(__name__)

FORMATS = ("json", "dot")


def to_json(payload):
    """Stable JSON text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _dot_id(text):
    return '"' + str(text).replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(graph):
    """
    DOT rendering of a ComplexGraph payload (the dict produced by to_dict).

    Nodes and edges come out in canonical key order; edge labels carry the
    adjacency clause or the common duals of the witness when present.
    """
    budget = graph.get("budget", {})
    lines = ["graph G {",
             f"  label={_dot_id(graph.get('kind', ''))};",
             f"  comment={_dot_id(json.dumps(budget, sort_keys=True))};"]
    for vertex in sorted(graph.get("vertices", []), key=lambda v: v["key"]):
        lines.append(f"  {_dot_id(vertex['key'])};")
    for edge in sorted(graph.get("edges", []), key=lambda e: (e["u"], e["v"])):
        witness = edge.get("witness") or {}
        label = witness.get("clause") or ",".join(witness.get("common_duals", []))
        suffix = f" [label={_dot_id(label)}]" if label else ""
        lines.append(f"  {_dot_id(edge['u'])} -- {_dot_id(edge['v'])}{suffix};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def render(payload, fmt):
    if fmt not in FORMATS:
        raise ConfigError(f"unknown format {fmt!r}; choose from {', '.join(FORMATS)}")
    if fmt == "json":
        return to_json(payload)
    if "vertices" not in payload:
        raise ConfigError("only complex artifacts have a DOT rendering")
    return to_dot(payload)


def write_artifact(payload, path, fmt="json"):
    """Writes the rendered artifact and returns its path."""
    text = render(payload, fmt)
    folder = os.path.dirname(os.path.abspath(path))
    os.makedirs(folder, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(text)
    logger.info("Wrote %s (%d bytes)", path, len(text))
    return path


def load_json(path):
    """Reads a JSON artifact; an unreadable or malformed file is a ConfigError."""
    try:
        with open(path, encoding="utf-8") as handle:
            return json.load(handle)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read artifact {path}: {exc}") from exc


def load_complex(path):
    """Reads a complex artifact back into a checked ComplexGraph."""
    payload = load_json(path)
    try:
        return ComplexGraph.from_dict(payload)
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"{path} is not a complex artifact: {exc}") from exc


def content_hash(payload_json):
    return hashlib.sha256(payload_json.encode("utf-8")).hexdigest()


def load_or_build_diagram(session, p, q):
    """
    The diagram of L(p, q), from the preset table when present.

    A stored preset that fails the diagram checks, or that was written by a
    different triangulation model, raises CacheMismatchError.
    """
    row = session.execute(
        select(DiagramPreset).filter_by(p=p, q=q, model_version=MODEL_VERSION)
    ).scalar_one_or_none()
    if row is not None:
        diagram = HeegaardDiagram.from_dict(json.loads(row.payload_json))
        failed = [name for name, ok in diagram_checks(diagram).items() if not ok]
        if failed:
            raise CacheMismatchError(f"cached preset L({p},{q}) fails {', '.join(failed)}")
        logger.debug("Preset L(%d,%d) loaded from cache", p, q)
        return diagram

    diagram = build_diagram(p, q)
    session.add(DiagramPreset(p=p, q=q, model_version=MODEL_VERSION,
                              payload_json=to_json(diagram.to_dict())))
    session.commit()
    logger.info("Preset L(%d,%d) stored", p, q)
    return diagram


def cached_disks(session, diagram, side, max_weight, workers=1):
    """
    Disk classes at budget, restored from the cache or enumerated and stored.

    Restored sets are handed to the enumerator so every builder sees them.

    Raises:
        CacheMismatchError: the stored hash or model version does not match.
    """
    row = session.execute(
        select(DiskSetCache).filter_by(p=diagram.p, q=diagram.q, side=side, max_weight=max_weight)
    ).scalars().first()
    if row is not None:
        if row.model_version != MODEL_VERSION:
            raise CacheMismatchError(
                f"disk set {row!r} was built by {row.model_version!r}, running {MODEL_VERSION!r}")
        if content_hash(row.payload_json) != row.content_hash:
            raise CacheMismatchError(f"disk set {row!r} does not match its content hash")
        disks = []
        for weights in row.weights:
            disk = make_disk(diagram, side, NormalCurve(weights))
            if disk is None:
                raise CacheMismatchError(f"cached curve {list(weights)} bounds no disk on {side}")
            disks.append(disk)
        preload_disks(diagram, side, max_weight, disks)
        logger.debug("Disk set %r restored (%d disks)", row, len(disks))
        return tuple(disks)

    disks = enumerate_disks(diagram, side, max_weight, workers)
    payload_json = json.dumps([list(d.boundary.weights) for d in disks])
    session.add(DiskSetCache(p=diagram.p, q=diagram.q, side=side, max_weight=max_weight,
                             model_version=MODEL_VERSION, content_hash=content_hash(payload_json),
                             payload_json=payload_json))
    session.commit()
    logger.info("Disk set L(%d,%d) %s N=%d stored (%d disks)",
                diagram.p, diagram.q, side, max_weight, len(disks))
    return disks


def warm_cache(session, diagram, max_weights, workers=1):
    """Restores or builds the disk sets on both sides for every budget."""
    for max_weight in sorted(set(max_weights)):
        for side in SIDES:
            cached_disks(session, diagram, side, max_weight, workers)


def lens_parameters(max_p):
    """Every valid (p, q) with 2 <= p <= max_p, 1 <= q <= p/2 and gcd(p, q) = 1."""
    return [(p, q) for p in range(2, max_p + 1) for q in range(1, p // 2 + 1) if gcd(p, q) == 1]


def seed_presets(app, max_p=8, max_weights=(), workers=1):
    """
    Stores the preset of every lens space up to max_p, then the disk sets
    at each requested budget. Returns the number of presets processed.
    """
    presets = lens_parameters(max_p)
    session = app.Session()
    try:
        for p, q in presets:
            diagram = load_or_build_diagram(session, p, q)
            warm_cache(session, diagram, max_weights, workers)
    except Exception:
        session.rollback()
        raise
    finally:
        session.close()
    logger.info("Seeded %d presets up to p=%d", len(presets), max_p)
    return len(presets)
