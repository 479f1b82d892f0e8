"""Descriptor construction and structural matching.

All question/answer semantics go through structured descriptors; free
text is only ever produced by deterministic rendering and recovered by
exact lookup against the scene's finite rendering set.
"""

from __future__ import annotations

from ..world.types import ObjectSpec, RegionBox, Scene, box_iou
from .types import Descriptor

# minimum IoU for a detector box to count as a view of a scene object
MATCH_IOU = 0.5
# minimum IoU for a question referent to resolve to an object
REFERENT_IOU = 0.1
# exponent on box-to-object alignment in the answer interpreter's match
# variable: sharp enough that a tight box outranks a loose one of the
# same object, while exactly-true boxes keep the unscaled likelihoods
ALIGNMENT_GAMMA = 4.0


def object_alignment(obj: ObjectSpec, box: RegionBox) -> float:
    """How well a detection box covers its object, in (0, 1]."""
    return box_iou(obj.box, box) ** ALIGNMENT_GAMMA


def best_object(scene: Scene, box: RegionBox, min_iou: float = MATCH_IOU) -> ObjectSpec | None:
    """Scene object best overlapping the box, or None below min_iou (strict)."""
    best: ObjectSpec | None = None
    best_iou = 0.0
    for obj in scene.objects:
        iou = box_iou(obj.box, box)
        if iou > best_iou:
            best, best_iou = obj, iou
    if best is None or best_iou <= min_iou:
        return None
    return best


def minimal_descriptor(obj: ObjectSpec, competitors: list[ObjectSpec]) -> Descriptor:
    """Shortest descriptor separating obj from the competitors.

    Tries category alone, then color, then size class; falls back to the
    color form when the object is irreducibly ambiguous (identical twin).
    """
    others = [o for o in competitors if o.id != obj.id]
    same_cat = [o for o in others if o.category == obj.category]
    if not same_cat:
        return Descriptor(obj.category)
    if all(o.color != obj.color for o in same_cat):
        return Descriptor(obj.category, obj.color)
    if all(o.size != obj.size for o in same_cat):
        return Descriptor(obj.category, obj.size)
    return Descriptor(obj.category, obj.color)


def canonical_descriptor(scene: Scene, obj: ObjectSpec) -> Descriptor:
    """Scene-level minimal descriptor (vs all other objects)."""
    return minimal_descriptor(obj, list(scene.objects))


def correction_descriptors(scene: Scene) -> list[Descriptor]:
    """Closed set of correction references: one per object, deduplicated
    in object order. Derived from the scene alone (never the dialogue)."""
    seen: list[Descriptor] = []
    for obj in scene.objects:
        desc = canonical_descriptor(scene, obj)
        if desc not in seen:
            seen.append(desc)
    return seen


def all_renderable_descriptors(scene: Scene) -> list[Descriptor]:
    """Every descriptor form any agent could render for this scene."""
    forms: list[Descriptor] = []
    for obj in scene.objects:
        for desc in (
            Descriptor(obj.category),
            Descriptor(obj.category, obj.color),
            Descriptor(obj.category, obj.size),
        ):
            if desc not in forms:
                forms.append(desc)
    return forms
