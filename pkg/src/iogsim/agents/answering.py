"""Answer model: closed rendering set, exact likelihoods, simulated answerer.

The likelihood never sees the dialogue history: it is a function of the
scene, a hypothesized region, the question, and the answer alone.
"""

from __future__ import annotations

import numpy as np

from ..world.types import RegionBox, Scene
from .descriptors import (
    best_object,
    canonical_descriptor,
    correction_descriptors,
    object_alignment,
)
from .types import AgentNoiseParams, Answer, Question, make_answer


def answer_space(scene: Scene, question: Question) -> list[Answer]:
    """Every answer the model can render for this scene and question."""
    answers = [make_answer("yes"), make_answer("no")]
    answers.extend(make_answer("no", desc) for desc in correction_descriptors(scene))
    return answers


def answer_likelihood(
    scene: Scene,
    region: RegionBox,
    question: Question,
    answer: Answer,
    params: AgentNoiseParams,
) -> float:
    """P(answer | scene, region, question) over the closed rendering set.

    m = [question descriptor matches the object under region], scaled by
    how tightly the region covers that object (1 for the exact box);
    P(yes) = m(1-eps) + (1-m)eps. The no-branch splits between the plain
    form and corrections weighted 1 for region-matching descriptors and
    eps otherwise.
    """
    obj = best_object(scene, region)
    if obj is not None and question.descriptor.matches(obj):
        m = object_alignment(obj, region)
    else:
        m = 0.0
    eps = params.epsilon_answer
    p_yes = m * (1.0 - eps) + (1.0 - m) * eps

    if answer.polarity == "yes":
        return p_yes

    p_no = 1.0 - p_yes
    if answer.correction is None:
        return p_no * (1.0 - params.p_corrective)

    corrections = correction_descriptors(scene)
    if answer.correction not in corrections:
        return 0.0
    weights = [
        1.0 if (obj is not None and c.matches(obj)) else eps
        for c in corrections
    ]
    total = sum(weights)
    if total == 0.0:
        # unmatched region with eps=0: no information, uniform corrections
        weights = [1.0] * len(corrections)
        total = float(len(corrections))
    w = weights[corrections.index(answer.correction)]
    return p_no * params.p_corrective * w / total


def simulate_answer(
    scene: Scene,
    target_box: RegionBox,
    question: Question,
    params: AgentNoiseParams,
    rng: np.random.Generator,
) -> Answer:
    """Sample from exactly the distribution answer_likelihood defines
    with the ground-truth box as the region."""
    space = answer_space(scene, question)
    probs = np.array(
        [answer_likelihood(scene, target_box, question, a, params) for a in space],
        dtype=np.float64,
    )
    probs = probs / probs.sum()
    idx = int(rng.choice(len(space), p=probs))
    return space[idx]


def truthful_answer(scene: Scene, target_box: RegionBox, question: Question) -> Answer:
    """Noise-free answer: yes iff the question names the target, else a
    correction carrying the target's scene-level descriptor."""
    obj = best_object(scene, target_box)
    if obj is not None and question.descriptor.matches(obj):
        return make_answer("yes")
    if obj is None:
        return make_answer("no")
    return make_answer("no", canonical_descriptor(scene, obj))


def parse_answer_text(scene: Scene, text: str) -> Answer:
    """Recover an Answer from its rendered closed form."""
    from .descriptors import all_renderable_descriptors
    from .types import render_answer

    if text == render_answer("yes"):
        return make_answer("yes")
    if text == render_answer("no"):
        return make_answer("no")
    for desc in all_renderable_descriptors(scene):
        if text == render_answer("no", desc):
            return make_answer("no", desc)
    raise ValueError(f"unparseable answer text: {text!r}")
