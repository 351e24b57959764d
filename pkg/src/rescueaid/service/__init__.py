"""Long-running service: sessions, command endpoints, live event streams."""

from rescueaid.service.config import ServiceConfig, parse_config_text
from rescueaid.service.core import ServiceCore, ServiceError, UnknownSession
from rescueaid.service.events import SessionEventStream

__all__ = [
    "ServiceConfig",
    "ServiceCore",
    "ServiceError",
    "SessionEventStream",
    "UnknownSession",
    "parse_config_text",
]
