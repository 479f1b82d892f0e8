"""Grounding from scripted dialogue history: one-shot target selection.

Feeds a record's whole dialogue to the grounder at once and picks the
argmax region, versus the utterance-only baseline that ignores the QA
pairs. Both share the grounder, so the comparison isolates the value
of the dialogue content.
"""

from __future__ import annotations

import numpy as np

from ..world.dataset import DatasetRecord
from ..world.lexicon import IntentLexicon, default_lexicon
from ..world.types import box_iou
from ..agents.answering import parse_answer_text
from ..agents.grounding import ground
from ..agents.questioning import parse_question_text
from ..agents.types import AgentNoiseParams, DialogueState


def dialogue_from_record(record: DatasetRecord) -> DialogueState:
    """Rebuild the structured dialogue from a record's rendered strings."""
    dialogue = DialogueState(record.utterance)
    for q_text, a_text in record.qa_pairs:
        question = parse_question_text(record.scene, q_text)
        answer = parse_answer_text(record.scene, a_text)
        dialogue = dialogue.with_qa(question, answer)
    return dialogue


def _ground_argmax(scene, dialogue, params, rng, lexicon, grounder):
    detections = grounder(scene, dialogue, params, rng, lexicon)
    if not detections:
        return None
    best = 0
    for i in range(1, len(detections)):
        if detections[i].log_prob > detections[best].log_prob:
            best = i
    return detections[best].box


def run_gdh(
    records: list[DatasetRecord],
    grounder=ground,
    params: AgentNoiseParams | None = None,
    thresholds: tuple[float, ...] = (0.1, 0.5, 0.9),
    seed: int = 0,
    utterance_only: bool = False,
    lexicon: IntentLexicon | None = None,
) -> dict[float, float]:
    """Acc@tau of one-shot grounding on scripted dialogues.

    With utterance_only=True the QA pairs are withheld, giving the
    silent-style baseline on the same records.
    """
    if not records:
        raise ValueError("empty record list")
    params = params or AgentNoiseParams()
    lexicon = lexicon or default_lexicon()
    if not utterance_only:
        for i, record in enumerate(records):
            if not record.qa_pairs:
                raise ValueError(f"record {i} has no qa_pairs")

    hits = {tau: 0 for tau in thresholds}
    for i, record in enumerate(records):
        if utterance_only:
            dialogue = DialogueState(record.utterance)
        else:
            dialogue = dialogue_from_record(record)
        rng = np.random.default_rng([seed, i])
        estimate = _ground_argmax(record.scene, dialogue, params, rng, lexicon, grounder)
        if estimate is None:
            continue
        score = box_iou(estimate, record.target_box)
        for tau in thresholds:
            if score > tau:
                hits[tau] += 1
    return {tau: hits[tau] / len(records) for tau in thresholds}
