"""Engine error hierarchy.

Every failure the engine can signal maps onto one of these, so callers
(episode runner, HTTP service, CLI) can translate them uniformly.
"""


class EngineError(Exception):
    """Base class for all engine-level failures."""


class UngroundableUtteranceError(EngineError):
    """Utterance does not resolve to any known intent tag."""


class UnresolvableReferentError(EngineError):
    """Question referent box overlaps no scene object."""


class NoCandidatesError(EngineError):
    """Candidate set is empty after grounding."""


class DegenerateGeometryError(EngineError):
    """Not enough non-collinear points to fit a plane."""


class EmptyRegionError(EngineError):
    """Region segmentation produced no points."""


class ObjectNotFoundError(EngineError):
    """All segmented points belong to the table plane."""


class DatasetFormatError(EngineError):
    """Dataset file violates the record schema; message names the field."""


class InvalidSessionStateError(EngineError):
    """Session operation called out of lifecycle order."""
