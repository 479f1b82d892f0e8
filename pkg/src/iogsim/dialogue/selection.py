"""Pragmatic candidate selection: blend answer and grounding evidence.

score(r) = rationality * log P_A(answer | r, question)
         + (1 - rationality) * log P_V(r | scene, dialogue)

with P_V normalized over the candidate set. Ties break toward higher
P_V, then earliest insertion. The endpoints skip the unused factor so
rationality=0 reduces to the grounding argmax and rationality=1 to the
answer-interpretation argmax.
"""

from __future__ import annotations

import math

import numpy as np

from ..world.lexicon import IntentLexicon
from ..world.types import RegionBox, Scene
from ..agents.answering import answer_likelihood
from ..agents.grounding import region_distribution
from ..agents.types import AgentNoiseParams, Answer, DialogueState, Question


def _log(x: float) -> float:
    return math.log(x) if x > 0.0 else -math.inf


def argmax_with_ties(scores, region_probs) -> int:
    """Index of the best score; ties -> higher region prob -> lowest index."""
    best = 0
    for i in range(1, len(scores)):
        if scores[i] > scores[best] or (
            scores[i] == scores[best] and region_probs[i] > region_probs[best]
        ):
            best = i
    return best


def blend_select_index(answer_probs, region_probs, rationality: float) -> int:
    """Pure selection core over explicit probability vectors."""
    if len(answer_probs) != len(region_probs) or len(answer_probs) == 0:
        raise ValueError("probability vectors must be nonempty and aligned")
    if not (0.0 <= rationality <= 1.0):
        raise ValueError("rationality must be in [0, 1]")
    scores = np.empty(len(answer_probs), dtype=np.float64)
    for i in range(len(answer_probs)):
        log_v = _log(float(region_probs[i]))
        log_a = _log(float(answer_probs[i]))
        if rationality == 0.0:
            scores[i] = log_v
        elif rationality == 1.0:
            scores[i] = log_a
        else:
            scores[i] = rationality * log_a + (1.0 - rationality) * log_v
    return argmax_with_ties(scores, region_probs)


def pragmatic_select_index(
    candidates: list[RegionBox],
    scene: Scene,
    dialogue: DialogueState,
    last_qa: tuple[Question, Answer],
    rationality: float,
    params: AgentNoiseParams,
    lexicon: IntentLexicon | None = None,
) -> int:
    if not candidates:
        raise ValueError("empty candidate set")

    region_probs = region_distribution(scene, dialogue, candidates, params, lexicon)
    question, answer = last_qa
    answer_probs = np.array(
        [answer_likelihood(scene, box, question, answer, params) for box in candidates],
        dtype=np.float64,
    )
    return blend_select_index(answer_probs, region_probs, rationality)


def pragmatic_select(
    candidates: list[RegionBox],
    scene: Scene,
    dialogue: DialogueState,
    last_qa: tuple[Question, Answer],
    rationality: float,
    params: AgentNoiseParams,
    lexicon: IntentLexicon | None = None,
) -> RegionBox:
    idx = pragmatic_select_index(
        candidates, scene, dialogue, last_qa, rationality, params, lexicon
    )
    return candidates[idx]
