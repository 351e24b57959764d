"""Access to data files shipped inside the package."""

from __future__ import annotations

from importlib import resources
from pathlib import Path


def data_path(*parts: str) -> Path:
    """Path to a shipped data file, e.g. ``data_path("graphs", "acs.sop")``."""
    root = resources.files("rescueaid") / "data"
    return Path(str(root.joinpath(*parts)))


def graphs_dir() -> Path:
    return data_path("graphs")
