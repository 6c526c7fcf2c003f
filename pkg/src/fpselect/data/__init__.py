"""Bundled resources: the toy example dataset, sidecar metadata, mapping
configs for the two public dataset formats, and a synthetic desk-scale sample
in the first format (see tools/make_fpstalker_sample.py)."""

from pathlib import Path

_DIR = Path(__file__).resolve().parent

BUNDLED = (
    "table1.csv",
    "table1.times.json",
    "fpstalker.mapping.json",
    "tillmann.mapping.json",
    "fpstalker_sample.csv",
)


def path(name: str) -> Path:
    """Filesystem path of a bundled resource."""
    if name not in BUNDLED:
        raise KeyError(f"no bundled resource {name!r}; available: {BUNDLED}")
    return _DIR / name
