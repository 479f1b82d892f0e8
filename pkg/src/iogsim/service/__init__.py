"""HTTP session service and its persistence layer."""

from .app import ApiError, create_app
from .render import scene_svg
from .store import ACTIVE, FINALIZED, SessionRecord, SessionRecordStore

__all__ = [
    "ApiError", "create_app", "scene_svg",
    "ACTIVE", "FINALIZED", "SessionRecord", "SessionRecordStore",
]
