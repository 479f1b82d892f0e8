"""Shared scene builders for the test suite."""

import pytest

from iogsim.world.types import ObjectSpec, RegionBox, Scene


def make_object(
    oid: str,
    category: str,
    box: tuple[float, float, float, float],
    color: str = "red",
    size: str = "medium",
    affordances: tuple[str, ...] = ("edible",),
    height_m: float = 0.05,
) -> ObjectSpec:
    return ObjectSpec(
        id=oid,
        category=category,
        attributes={"color": color, "size": size},
        affordances=frozenset(affordances),
        box=RegionBox(*box),
        height_m=height_m,
    )


def make_scene(objects, target_id, width=640, height=480, clutter=False, scene_id="test-scene"):
    return Scene(
        id=scene_id,
        width=width,
        height=height,
        objects=tuple(objects),
        target_id=target_id,
        table_z=0.0,
        clutter_mode=clutter,
    )


@pytest.fixture
def two_drinks_scene():
    """Two drinkable objects plus one distractor; target is the mug."""
    objects = [
        make_object("a", "can of soda", (50, 50, 150, 160), color="red",
                    affordances=("drinkable",)),
        make_object("b", "mug", (300, 200, 420, 320), color="blue",
                    affordances=("drinkable",)),
        make_object("c", "sponge", (480, 60, 600, 140), color="yellow",
                    affordances=("cleaning",)),
    ]
    return make_scene(objects, target_id="b")


@pytest.fixture
def two_candles_scene():
    """Two candles differing only in color; the pink one is the target."""
    objects = [
        make_object("blue-candle", "candle", (60, 60, 150, 200), color="blue",
                    affordances=("lighting",), height_m=0.1),
        make_object("pink-candle", "candle", (300, 100, 390, 240), color="pink",
                    affordances=("lighting",), height_m=0.1),
    ]
    return make_scene(objects, target_id="pink-candle")
