"""Probabilistic agents: grounder, question generator, answer model."""

from .types import (
    AgentNoiseParams,
    Answer,
    Descriptor,
    DialogueState,
    Question,
    ScoredRegion,
    make_answer,
    render_answer,
)
from .descriptors import (
    MATCH_IOU,
    REFERENT_IOU,
    all_renderable_descriptors,
    best_object,
    canonical_descriptor,
    correction_descriptors,
    minimal_descriptor,
)
from .grounding import (
    consistency_checker,
    consistent_objects,
    dialogue_constraints,
    ground,
    object_consistent,
    region_distribution,
    region_likelihood,
)
from .questioning import generate_question, parse_question_text
from .answering import (
    answer_likelihood,
    answer_space,
    parse_answer_text,
    simulate_answer,
    truthful_answer,
)

__all__ = [
    "AgentNoiseParams", "Answer", "Descriptor", "DialogueState", "Question",
    "ScoredRegion", "make_answer", "render_answer",
    "MATCH_IOU", "REFERENT_IOU", "all_renderable_descriptors", "best_object",
    "canonical_descriptor", "correction_descriptors", "minimal_descriptor",
    "consistency_checker", "consistent_objects", "dialogue_constraints",
    "ground", "object_consistent", "region_distribution", "region_likelihood",
    "generate_question", "parse_question_text",
    "answer_likelihood", "answer_space", "parse_answer_text", "simulate_answer",
    "truthful_answer",
]
