"""iogsim: interactive object grasping over a synthetic tabletop.

A dialogue-driven grounding engine (tabular probabilistic agents, an
accumulating candidate set, pragmatic target selection), grasp-point
extraction from region-matched point clouds, an offline benchmark
harness, and an HTTP session service for human-in-the-loop episodes.
"""

__version__ = "0.1.0"

from . import agents, dialogue, evaluation, grasp, world
from .errors import (
    DatasetFormatError,
    DegenerateGeometryError,
    EmptyRegionError,
    EngineError,
    InvalidSessionStateError,
    NoCandidatesError,
    ObjectNotFoundError,
    UngroundableUtteranceError,
    UnresolvableReferentError,
)

__all__ = [
    "agents", "dialogue", "evaluation", "grasp", "world",
    "DatasetFormatError", "DegenerateGeometryError", "EmptyRegionError",
    "EngineError", "InvalidSessionStateError", "NoCandidatesError",
    "ObjectNotFoundError", "UngroundableUtteranceError", "UnresolvableReferentError",
]
