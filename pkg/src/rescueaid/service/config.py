"""Service configuration: a flat key = value text file.

Recognized keys (all optional, defaults below):

    listen_host = 127.0.0.1
    listen_port = 8008
    graphs_dir = <packaged treatment graphs>
    model_path = <path to a trained model bundle, required to serve>
    event_log_dir = <directory for per-session NDJSON logs; empty = off>
    window_ms = 10000
    switch_margin = 0.10
    switch_persistence = 3
    recommendation_depth = 5
    language_default = en
    log_level = INFO

Comments start with ``#``; blank lines are ignored.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Union

from rescueaid.assets import graphs_dir as packaged_graphs_dir


@dataclass
class ServiceConfig:
    listen_host: str = "127.0.0.1"
    listen_port: int = 8008
    graphs_dir: Path = field(default_factory=packaged_graphs_dir)
    model_path: Optional[Path] = None
    event_log_dir: Optional[Path] = None
    window_ms: int = 10_000
    switch_margin: float = 0.10
    switch_persistence: int = 3
    recommendation_depth: int = 5
    language_default: str = "en"
    log_level: str = "INFO"

    def validate(self) -> None:
        """Startup checks: referenced paths exist, numbers are sane."""
        if not 0 < self.listen_port < 65536:
            raise ValueError(f"invalid port {self.listen_port}")
        if not Path(self.graphs_dir).is_dir():
            raise ValueError(f"graphs_dir {self.graphs_dir} does not exist")
        if self.model_path is not None and not Path(self.model_path).is_file():
            raise ValueError(f"model_path {self.model_path} does not exist")
        if self.window_ms <= 0:
            raise ValueError("window_ms must be positive")


_INT_KEYS = {"listen_port", "window_ms", "switch_persistence", "recommendation_depth"}
_FLOAT_KEYS = {"switch_margin"}
_PATH_KEYS = {"graphs_dir", "model_path", "event_log_dir"}


def parse_config_text(text: str) -> ServiceConfig:
    config = ServiceConfig()
    for line_number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"config line {line_number}: expected key = value")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not hasattr(config, key):
            raise ValueError(f"config line {line_number}: unknown key {key!r}")
        if key in _INT_KEYS:
            setattr(config, key, int(value))
        elif key in _FLOAT_KEYS:
            setattr(config, key, float(value))
        elif key in _PATH_KEYS:
            setattr(config, key, Path(value) if value else None)
        else:
            setattr(config, key, value)
    return config


def load_config(path: Union[str, Path]) -> ServiceConfig:
    config = parse_config_text(Path(path).read_text(encoding="utf-8"))
    config.validate()
    return config
