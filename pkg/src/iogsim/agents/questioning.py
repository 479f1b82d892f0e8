"""Template question generation over minimal distinguishing descriptors."""

from __future__ import annotations

from ..errors import UnresolvableReferentError
from ..world.lexicon import IntentLexicon, default_lexicon
from ..world.types import RegionBox, Scene
from .descriptors import REFERENT_IOU, best_object, minimal_descriptor
from .grounding import consistency_checker
from .types import DialogueState, Question


def generate_question(
    scene: Scene,
    dialogue: DialogueState,
    referent: RegionBox,
    lexicon: IntentLexicon | None = None,
) -> Question:
    """Ask about the object under the referent box.

    The descriptor is the minimal one separating that object from the
    other intent-consistent objects; deterministic given inputs.
    """
    lexicon = lexicon or default_lexicon()
    obj = best_object(scene, referent, min_iou=REFERENT_IOU)
    if obj is None:
        raise UnresolvableReferentError("referent box overlaps no object")

    intent_only = DialogueState(dialogue.utterance)
    check = consistency_checker(scene, intent_only, lexicon)
    competitors = [o for o in scene.objects if check(o)]
    descriptor = minimal_descriptor(obj, competitors)
    return Question(
        text=f"Should I get the {descriptor.render()}?",
        referent_box=referent,
        descriptor=descriptor,
    )


def parse_question_text(scene: Scene, text: str) -> Question:
    """Recover a Question from its rendered closed form (dataset replay)."""
    from .descriptors import all_renderable_descriptors

    for desc in all_renderable_descriptors(scene):
        if text == f"Should I get the {desc.render()}?":
            for obj in scene.objects:
                if desc.matches(obj):
                    return Question(text=text, referent_box=obj.box, descriptor=desc)
    raise ValueError(f"unparseable question text: {text!r}")
