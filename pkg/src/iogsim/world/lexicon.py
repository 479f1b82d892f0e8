"""Category and intent lexicon for the synthetic tabletop world.

The default lexicon ships 30 everyday-object categories and 9 intent
tags. Every intent entry pairs utterance templates with a predicate
over object affordances; an object satisfies an intent iff the tag is
in its affordance set.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from ..errors import UngroundableUtteranceError
from .types import ObjectSpec


@dataclass(frozen=True)
class CategorySpec:
    """Generator-side description of an object category."""

    name: str
    affordances: frozenset[str]
    base_size_px: tuple[float, float]      # (width, height) before scaling
    height_range_m: tuple[float, float]


@dataclass(frozen=True)
class IntentEntry:
    """Utterance templates plus the affordance predicate for one intent."""

    tag: str
    templates: tuple[str, ...]
    predicate: Callable[[ObjectSpec], bool] = field(repr=False, default=None)  # type: ignore[assignment]

    def __post_init__(self):
        if not self.templates or any(not t for t in self.templates):
            raise ValueError(f"intent {self.tag}: empty template")
        if self.predicate is None:
            tag = self.tag
            object.__setattr__(self, "predicate", lambda obj, _t=tag: _t in obj.affordances)

    def satisfied_by(self, obj: ObjectSpec) -> bool:
        return bool(self.predicate(obj))


@dataclass(frozen=True)
class IntentLexicon:
    """Intent tag -> entry map, with utterance resolution."""

    entries: dict[str, IntentEntry]
    categories: tuple[CategorySpec, ...]

    def __post_init__(self):
        used = set()
        for cat in self.categories:
            used |= cat.affordances
        missing = used - set(self.entries)
        if missing:
            raise ValueError(f"affordances without intent entry: {sorted(missing)}")

    @property
    def intent_tags(self) -> tuple[str, ...]:
        return tuple(sorted(self.entries))

    def category(self, name: str) -> CategorySpec:
        for cat in self.categories:
            if cat.name == name:
                return cat
        raise KeyError(name)

    def templates_for(self, tag: str) -> tuple[str, ...]:
        return self.entries[tag].templates

    def resolve_utterance(self, utterance: str) -> str:
        """Map an utterance back to its intent tag (closed template set)."""
        wanted = _normalize(utterance)
        for tag, entry in self.entries.items():
            for template in entry.templates:
                if _normalize(template) == wanted:
                    return tag
        raise UngroundableUtteranceError(f"ungroundable utterance: {utterance!r}")

    def categories_for(self, tag: str, pool: tuple[str, ...] | None = None) -> tuple[str, ...]:
        names = pool if pool is not None else tuple(c.name for c in self.categories)
        return tuple(n for n in names if tag in self.category(n).affordances)


def _normalize(text: str) -> str:
    return " ".join(text.lower().replace(".", " ").replace("!", " ").split())


COLORS = ("red", "blue", "green", "yellow", "pink", "white", "black", "orange")
SIZE_CLASSES = ("small", "medium", "large")

_INTENTS = (
    ("drinkable", ("I am thirsty.", "I need something to drink.")),
    ("edible", ("I am hungry.", "I am starving.")),
    ("chargeable", ("My device runs out of battery.", "My phone is almost dead.")),
    ("fastening", ("I want to tighten the screws of my chair.", "A screw on my desk is loose.")),
    ("sticking", ("I need to stick this poster to the wall.", "These pages keep falling apart.")),
    ("cutting", ("I need to open this package.", "I have to cut this ribbon.")),
    ("writing", ("I need to jot down a phone number.", "I want to leave a note.")),
    ("cleaning", ("I spilled water on the table.", "This desk is dusty.")),
    ("lighting", ("It is getting dark in here.", "I cannot see anything in the closet.")),
)

# name, affordances, base (w, h) px, height range (m)
_CATEGORIES = (
    ("water bottle", ("drinkable",), (62, 130), (0.10, 0.15)),
    ("can of soda", ("drinkable",), (58, 84), (0.08, 0.12)),
    ("mug", ("drinkable",), (86, 80), (0.07, 0.11)),
    ("thermos", ("drinkable",), (64, 140), (0.11, 0.15)),
    ("juice box", ("drinkable",), (66, 96), (0.08, 0.12)),
    ("banana", ("edible",), (130, 62), (0.03, 0.05)),
    ("apple", ("edible",), (78, 74), (0.06, 0.09)),
    ("kiwi", ("edible",), (58, 50), (0.04, 0.06)),
    ("strawberry", ("edible",), (48, 46), (0.03, 0.05)),
    ("tomato", ("edible",), (68, 64), (0.05, 0.08)),
    ("chocolate bar", ("edible",), (110, 52), (0.03, 0.04)),
    ("snack bag", ("edible",), (104, 126), (0.04, 0.08)),
    ("power bank", ("chargeable",), (96, 58), (0.03, 0.04)),
    ("charging cable", ("chargeable",), (92, 88), (0.03, 0.04)),
    ("battery pack", ("chargeable",), (76, 54), (0.03, 0.05)),
    ("screwdriver", ("fastening",), (136, 40), (0.03, 0.04)),
    ("wrench", ("fastening",), (128, 46), (0.03, 0.04)),
    ("tape", ("sticking", "fastening"), (74, 70), (0.03, 0.05)),
    ("glue stick", ("sticking",), (46, 86), (0.07, 0.10)),
    ("scissors", ("cutting",), (110, 52), (0.03, 0.04)),
    ("cutter", ("cutting",), (104, 42), (0.03, 0.04)),
    ("pen", ("writing",), (118, 36), (0.03, 0.04)),
    ("marker", ("writing",), (108, 42), (0.03, 0.04)),
    ("memo pad", ("writing", "sticking"), (84, 82), (0.03, 0.05)),
    ("notebook", ("writing",), (120, 152), (0.03, 0.05)),
    ("sponge", ("cleaning",), (84, 58), (0.04, 0.06)),
    ("towel", ("cleaning",), (128, 104), (0.04, 0.07)),
    ("tissue box", ("cleaning",), (112, 74), (0.07, 0.10)),
    ("flashlight", ("lighting",), (116, 52), (0.04, 0.06)),
    ("candle", ("lighting",), (56, 92), (0.08, 0.13)),
)

# Categories reserved for the unseen split (excluded from the seen pool).
UNSEEN_CATEGORIES = (
    "thermos", "juice box", "tomato", "snack bag", "battery pack",
    "wrench", "glue stick", "notebook", "towel", "candle",
)


def default_lexicon() -> IntentLexicon:
    entries = {tag: IntentEntry(tag=tag, templates=templates) for tag, templates in _INTENTS}
    categories = tuple(
        CategorySpec(
            name=name,
            affordances=frozenset(affs),
            base_size_px=size,
            height_range_m=heights,
        )
        for name, affs, size, heights in _CATEGORIES
    )
    return IntentLexicon(entries=entries, categories=categories)
