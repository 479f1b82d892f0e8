"""Tabular visual grounding: consistent-object detection and region scoring.

An object is consistent with a dialogue when it satisfies the
utterance's intent and every constraint extracted from the QA pairs:
a "yes" requires the questioned descriptor, a plain "no" excludes it,
and a corrective "no" excludes it while requiring the correction.
"""

from __future__ import annotations

import math
from typing import Callable

import numpy as np

from ..world.lexicon import IntentLexicon, default_lexicon
from ..world.types import ObjectSpec, RegionBox, Scene
from .descriptors import best_object
from .types import AgentNoiseParams, Descriptor, DialogueState, ScoredRegion


def dialogue_constraints(qa_pairs) -> list[tuple[str, Descriptor]]:
    """Flatten QA history into (require | exclude, descriptor) constraints."""
    constraints: list[tuple[str, Descriptor]] = []
    for question, answer in qa_pairs:
        if answer.polarity == "yes":
            constraints.append(("require", question.descriptor))
        else:
            constraints.append(("exclude", question.descriptor))
            if answer.correction is not None:
                constraints.append(("require", answer.correction))
    return constraints


def violation_counter(
    scene: Scene,
    dialogue: DialogueState,
    lexicon: IntentLexicon | None = None,
) -> Callable[[ObjectSpec], int]:
    """Resolve the utterance and constraints once; return a per-object
    count of violated constraints (0 = fully consistent).

    Raises UngroundableUtteranceError for unknown utterances.
    """
    lexicon = lexicon or default_lexicon()
    entry = lexicon.entries[lexicon.resolve_utterance(dialogue.utterance)]
    constraints = dialogue_constraints(dialogue.qa_pairs)

    def count(obj: ObjectSpec) -> int:
        violations = 0 if entry.satisfied_by(obj) else 1
        for kind, desc in constraints:
            hit = desc.matches(obj)
            if (kind == "require") != hit:
                violations += 1
        return violations

    return count


def consistency_checker(
    scene: Scene,
    dialogue: DialogueState,
    lexicon: IntentLexicon | None = None,
) -> Callable[[ObjectSpec], bool]:
    """Per-object test for full consistency with intent and QA history."""
    count = violation_counter(scene, dialogue, lexicon)
    return lambda obj: count(obj) == 0


def object_consistent(
    obj: ObjectSpec,
    scene: Scene,
    dialogue: DialogueState,
    lexicon: IntentLexicon | None = None,
) -> bool:
    return consistency_checker(scene, dialogue, lexicon)(obj)


def consistent_objects(
    scene: Scene,
    dialogue: DialogueState,
    lexicon: IntentLexicon | None = None,
) -> list[ObjectSpec]:
    check = consistency_checker(scene, dialogue, lexicon)
    return [o for o in scene.objects if check(o)]


def _jitter_box(
    box: RegionBox,
    scene: Scene,
    jitter_px: float,
    rng: np.random.Generator,
) -> RegionBox:
    shift = rng.normal(0.0, 1.0, size=4) * jitter_px
    x1 = min(max(box.x1 + shift[0], 0.0), scene.width - 1.0)
    y1 = min(max(box.y1 + shift[1], 0.0), scene.height - 1.0)
    x2 = min(max(box.x2 + shift[2], x1 + 1.0), float(scene.width))
    y2 = min(max(box.y2 + shift[3], y1 + 1.0), float(scene.height))
    return RegionBox(x1, y1, x2, y2)


def _spurious_box(scene: Scene, rng: np.random.Generator) -> RegionBox:
    src = scene.objects[int(rng.integers(len(scene.objects)))].box
    w, h = src.width, src.height
    dx = float(rng.uniform(0.4, 1.0)) * w * (1 if rng.random() < 0.5 else -1)
    dy = float(rng.uniform(0.4, 1.0)) * h * (1 if rng.random() < 0.5 else -1)
    sw = w * float(rng.uniform(0.7, 1.4))
    sh = h * float(rng.uniform(0.7, 1.4))
    cx = min(max(src.center[0] + dx, sw / 2 + 1), scene.width - sw / 2 - 1)
    cy = min(max(src.center[1] + dy, sh / 2 + 1), scene.height - sh / 2 - 1)
    return RegionBox(cx - sw / 2, cy - sh / 2, cx + sw / 2, cy + sh / 2)


def ground(
    scene: Scene,
    dialogue: DialogueState,
    params: AgentNoiseParams,
    rng: np.random.Generator,
    lexicon: IntentLexicon | None = None,
) -> list[ScoredRegion]:
    """Detect dialogue-consistent objects (jittered boxes) plus spurious hits.

    Raises UngroundableUtteranceError for unknown utterances. Returns an
    empty list when nothing is consistent and no spurious box fires.
    """
    check = consistency_checker(scene, dialogue, lexicon)
    consistent = [o for o in scene.objects if check(o)]

    boxes: list[RegionBox] = []
    weights: list[float] = []
    for obj in consistent:
        boxes.append(_jitter_box(obj.box, scene, params.grounder_jitter_px, rng))
        weights.append(1.0)

    if scene.objects:
        n_spurious = int(rng.poisson(params.distractor_rate))
        for _ in range(n_spurious):
            boxes.append(_spurious_box(scene, rng))
            weights.append(params.p_floor)

    if not boxes:
        return []
    total = sum(weights)
    return [
        ScoredRegion(box=b, log_prob=math.log(w / total))
        for b, w in zip(boxes, weights)
    ]


def region_distribution(
    scene: Scene,
    dialogue: DialogueState,
    boxes: list[RegionBox],
    params: AgentNoiseParams,
    lexicon: IntentLexicon | None = None,
) -> np.ndarray:
    """Normalized region probabilities over an explicit candidate pool.

    Boxes resolving to a fully consistent object share mass uniformly
    (weight 1); each violated constraint multiplies a region's weight by
    p_floor, so unresolvable boxes and heavily contradicted objects sink
    while the least-contradicted candidate still dominates when noisy
    answers have poisoned the whole pool. Box tightness is deliberately
    not the grounder's concern: interpreting how well a box fits the
    confirmed object is the answer model's job.
    """
    if not boxes:
        raise ValueError("empty candidate pool")
    count = violation_counter(scene, dialogue, lexicon)
    # a box matching no object ranks below the worst-explained real object
    unmatched = 2 + len(dialogue_constraints(dialogue.qa_pairs))
    weights = np.empty(len(boxes), dtype=np.float64)
    for i, box in enumerate(boxes):
        obj = best_object(scene, box)
        violations = count(obj) if obj is not None else unmatched
        weights[i] = params.p_floor ** violations
    return weights / weights.sum()


def region_likelihood(
    scene: Scene,
    dialogue: DialogueState,
    region: RegionBox,
    candidate_pool: list[RegionBox],
    params: AgentNoiseParams,
    lexicon: IntentLexicon | None = None,
) -> float:
    if region not in candidate_pool:
        raise ValueError("region must be a member of the candidate pool")
    probs = region_distribution(scene, dialogue, candidate_pool, params, lexicon)
    return float(probs[candidate_pool.index(region)])
