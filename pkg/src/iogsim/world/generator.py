"""Seeded scene generation for the seen / unseen / cluttered splits.

Generation is a pure function of (config, seed): all randomness flows
through one numpy Generator constructed from the seed, and the object
ordering is fixed by the draw order.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass
from typing import NamedTuple

import numpy as np

from .lexicon import COLORS, SIZE_CLASSES, IntentLexicon, default_lexicon
from .types import MAX_PAIR_IOU_CLUTTER, MAX_PAIR_IOU_TIDY, ObjectSpec, RegionBox, Scene, box_iou


@dataclass(frozen=True)
class GeneratorConfig:
    width: int = 640
    height: int = 480
    min_objects: int = 4
    max_objects: int = 7
    clutter_mode: bool = False
    ambiguous: bool = True
    # how many objects satisfy the chosen intent in ambiguous mode
    min_ambiguity: int = 2
    max_ambiguity: int = 4
    # probability of adding an identical twin of one intent object (clutter only)
    twin_rate: float = 0.6
    # per-object scale factor range applied to category base sizes
    size_scale: tuple[float, float] = (0.8, 1.2)
    holdout_categories: tuple[str, ...] = ()
    categories: tuple[str, ...] | None = None  # None = full lexicon
    max_place_attempts: int = 400

    def to_json(self) -> dict:
        data = asdict(self)
        data["holdout_categories"] = list(self.holdout_categories)
        data["categories"] = list(self.categories) if self.categories is not None else None
        data["size_scale"] = list(self.size_scale)
        return data

    @staticmethod
    def from_json(data: dict) -> "GeneratorConfig":
        kwargs = dict(data)
        if kwargs.get("holdout_categories") is not None:
            kwargs["holdout_categories"] = tuple(kwargs["holdout_categories"])
        if kwargs.get("categories") is not None:
            kwargs["categories"] = tuple(kwargs["categories"])
        if kwargs.get("size_scale") is not None:
            kwargs["size_scale"] = tuple(kwargs["size_scale"])
        return GeneratorConfig(**kwargs)


class TaskSpec(NamedTuple):
    """A generated episode setup: the scene plus its opening utterance."""

    scene: Scene
    utterance: str
    intent_tag: str


def _scene_id(config: GeneratorConfig, seed: int) -> str:
    digest = hashlib.sha1(
        json.dumps([config.to_json(), int(seed)], sort_keys=True).encode()
    ).hexdigest()
    return f"scene-{digest[:12]}"


def _active_pool(config: GeneratorConfig, lexicon: IntentLexicon) -> tuple[str, ...]:
    names = config.categories if config.categories is not None else tuple(
        c.name for c in lexicon.categories
    )
    pool = tuple(n for n in names if n not in set(config.holdout_categories))
    if not pool:
        raise ValueError("empty category pool: lexicon exhausted by holdout")
    return pool


def _size_class(scale: float) -> str:
    if scale < 0.93:
        return SIZE_CLASSES[0]
    if scale < 1.07:
        return SIZE_CLASSES[1]
    return SIZE_CLASSES[2]


def _place_boxes(
    dims: list[tuple[float, float]],
    config: GeneratorConfig,
    rng: np.random.Generator,
) -> list[RegionBox]:
    limit = MAX_PAIR_IOU_CLUTTER if config.clutter_mode else MAX_PAIR_IOU_TIDY
    placed: list[RegionBox] = []
    for w, h in dims:
        ok = False
        for _ in range(config.max_place_attempts):
            cx = rng.uniform(w / 2, config.width - w / 2)
            cy = rng.uniform(h / 2, config.height - h / 2)
            box = RegionBox(cx - w / 2, cy - h / 2, cx + w / 2, cy + h / 2)
            if all(box_iou(box, other) <= limit for other in placed):
                placed.append(box)
                ok = True
                break
        if not ok:
            raise ValueError(
                f"cannot place {len(dims)} objects within overlap limit {limit}"
            )
    return placed


def generate_task(
    config: GeneratorConfig,
    seed: int,
    lexicon: IntentLexicon | None = None,
) -> TaskSpec:
    """Generate one scene together with its intention utterance."""
    lexicon = lexicon or default_lexicon()
    rng = np.random.default_rng(int(seed))
    pool = _active_pool(config, lexicon)

    # intents realizable in this pool
    intents = [t for t in lexicon.intent_tags if lexicon.categories_for(t, pool)]
    if not intents:
        raise ValueError("no intent is satisfiable from the category pool")
    intent = intents[int(rng.integers(len(intents)))]
    satisfiers = lexicon.categories_for(intent, pool)
    fillers = tuple(n for n in pool if intent not in lexicon.category(n).affordances)

    n_objects = int(rng.integers(config.min_objects, config.max_objects + 1))
    if config.ambiguous:
        hi = min(config.max_ambiguity, n_objects)
        lo = min(config.min_ambiguity, hi)
        k = int(rng.integers(lo, hi + 1))
        k = max(k, 2) if n_objects >= 2 else 1
    else:
        k = 1
    if not fillers:
        k = n_objects  # everything must satisfy the intent

    chosen: list[str] = []
    for i in range(k):
        # prefer distinct categories while they last
        remaining = [c for c in satisfiers if c not in chosen]
        source = remaining if remaining else list(satisfiers)
        chosen.append(source[int(rng.integers(len(source)))])
    for _ in range(n_objects - k):
        chosen.append(fillers[int(rng.integers(len(fillers)))])

    # colors: keep (category, color) unique; clutter ambiguity is injected
    # only through explicit twins below
    colors: list[str] = []
    for i, name in enumerate(chosen):
        taken = {c for j, c in enumerate(colors) if chosen[j] == name}
        options = [c for c in COLORS if c not in taken] or list(COLORS)
        colors.append(options[int(rng.integers(len(options)))])

    scale_lo, scale_hi = config.size_scale
    scales = [float(rng.uniform(scale_lo, scale_hi)) for _ in chosen]

    if config.clutter_mode and k >= 1 and rng.random() < config.twin_rate:
        # identical twin of one intent object: same descriptor triple
        src = int(rng.integers(k))
        chosen.append(chosen[src])
        colors.append(colors[src])
        scales.append(scales[src])

    dims = []
    heights = []
    for name, scale in zip(chosen, scales):
        cat = lexicon.category(name)
        dims.append((cat.base_size_px[0] * scale, cat.base_size_px[1] * scale))
        h_lo, h_hi = cat.height_range_m
        heights.append(float(rng.uniform(h_lo, h_hi)))

    boxes = _place_boxes(dims, config, rng)

    objects = tuple(
        ObjectSpec(
            id=f"obj-{i}",
            category=name,
            attributes={"color": color, "size": _size_class(scale)},
            affordances=lexicon.category(name).affordances,
            box=box,
            height_m=height,
        )
        for i, (name, color, scale, box, height) in enumerate(
            zip(chosen, colors, scales, boxes, heights)
        )
    )

    entry = lexicon.entries[intent]
    satisfying_ids = [o.id for o in objects if entry.satisfied_by(o)]
    target_id = satisfying_ids[int(rng.integers(len(satisfying_ids)))]

    templates = lexicon.templates_for(intent)
    utterance = templates[int(rng.integers(len(templates)))]

    scene = Scene(
        id=_scene_id(config, seed),
        width=config.width,
        height=config.height,
        objects=objects,
        target_id=target_id,
        table_z=0.0,
        clutter_mode=config.clutter_mode,
    )
    return TaskSpec(scene=scene, utterance=utterance, intent_tag=intent)


def generate_scene(
    config: GeneratorConfig,
    seed: int,
    lexicon: IntentLexicon | None = None,
) -> Scene:
    return generate_task(config, seed, lexicon).scene


def split_config(split: str, base: GeneratorConfig | None = None) -> GeneratorConfig:
    """Benchmark split presets: seen, unseen, cluttered."""
    from .lexicon import UNSEEN_CATEGORIES

    base = base or GeneratorConfig()
    overrides: dict
    if split == "seen":
        overrides = {
            "holdout_categories": list(UNSEEN_CATEGORIES),
            "categories": None,
            "clutter_mode": False,
        }
    elif split == "unseen":
        overrides = {
            "holdout_categories": [],
            "categories": list(UNSEEN_CATEGORIES),
            "clutter_mode": False,
        }
    elif split == "cluttered":
        overrides = {
            "holdout_categories": list(UNSEEN_CATEGORIES),
            "categories": None,
            "clutter_mode": True,
            "min_objects": max(base.min_objects, 7),
            "max_objects": max(base.max_objects, 10),
            "max_ambiguity": max(base.max_ambiguity, 5),
            "twin_rate": 0.25,
            "size_scale": [0.7, 1.0],
        }
    else:
        raise ValueError(f"unknown split {split!r}")
    return GeneratorConfig.from_json({**base.to_json(), **overrides})
