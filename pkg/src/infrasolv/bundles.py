"""Registry of the bundled example actions."""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

from .schema import Bundle, load_bundle

BUILTIN = (
    "torus2",
    "torus3",
    "klein_bottle",
    "half_turn",
    "hantzsche_wendt",
    "heisenberg",
    "heisenberg_infra",
    "sol3",
    "nonfree_point_reflection",
    "corrupt_central_torus",
)


def builtin_names():
    return list(BUILTIN)


def _builtin_path(name):
    return resources.files("infrasolv").joinpath(f"data/bundles/{name}.json")


def bundle_bytes(name_or_path) -> bytes:
    """Raw bytes of a bundle, by builtin name or filesystem path."""
    if name_or_path in BUILTIN:
        return _builtin_path(name_or_path).read_bytes()
    p = Path(name_or_path)
    if not p.exists():
        raise FileNotFoundError(
            f"'{name_or_path}' is neither a builtin bundle nor a file; "
            f"builtins: {', '.join(BUILTIN)}")
    return p.read_bytes()


def load_bundle_bytes(raw: bytes) -> Bundle:
    return load_bundle(json.loads(raw))


def load(name_or_path) -> Bundle:
    return load_bundle_bytes(bundle_bytes(name_or_path))


def descriptions():
    out = {}
    for name in BUILTIN:
        obj = json.loads(_builtin_path(name).read_bytes())
        out[name] = obj.get("description", "")
    return out
