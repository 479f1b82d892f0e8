"""Core world types: boxes, objects, scenes, point clouds.

Boxes use continuous pixel coordinates with a top-left origin and
half-open edge semantics: a pixel (u, v) is inside iff
x1 <= u < x2 and y1 <= v < y2.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable


@dataclass(frozen=True)
class RegionBox:
    """Axis-aligned region ``(x1, y1, x2, y2)`` in image pixels."""

    x1: float
    y1: float
    x2: float
    y2: float

    def __post_init__(self):
        if not (self.x2 > self.x1 and self.y2 > self.y1):
            raise ValueError(f"degenerate box {self.as_list()}")

    def as_list(self) -> list[float]:
        return [self.x1, self.y1, self.x2, self.y2]

    @staticmethod
    def from_list(values: Iterable[float]) -> "RegionBox":
        x1, y1, x2, y2 = (float(v) for v in values)
        return RegionBox(x1, y1, x2, y2)

    @property
    def width(self) -> float:
        return self.x2 - self.x1

    @property
    def height(self) -> float:
        return self.y2 - self.y1

    @property
    def area(self) -> float:
        return self.width * self.height

    @property
    def center(self) -> tuple[float, float]:
        return ((self.x1 + self.x2) / 2.0, (self.y1 + self.y2) / 2.0)

    def contains_pixel(self, u: float, v: float) -> bool:
        return self.x1 <= u < self.x2 and self.y1 <= v < self.y2

    def within_bounds(self, width: float, height: float) -> bool:
        return 0 <= self.x1 and 0 <= self.y1 and self.x2 <= width and self.y2 <= height


def box_iou(a: RegionBox, b: RegionBox) -> float:
    """Intersection-over-union of two boxes; 0 when disjoint."""
    ix = min(a.x2, b.x2) - max(a.x1, b.x1)
    iy = min(a.y2, b.y2) - max(a.y1, b.y1)
    if ix <= 0 or iy <= 0:
        return 0.0
    inter = ix * iy
    union = a.area + b.area - inter
    return inter / union


@dataclass(frozen=True)
class ObjectSpec:
    """One tabletop object: a groundable region candidate with semantics."""

    id: str
    category: str
    attributes: dict[str, str]  # "color" and "size" required
    affordances: frozenset[str]
    box: RegionBox
    height_m: float

    def __post_init__(self):
        if not self.affordances:
            raise ValueError(f"object {self.id} has no affordances")
        for key in ("color", "size"):
            if key not in self.attributes:
                raise ValueError(f"object {self.id} missing attribute {key!r}")

    @property
    def color(self) -> str:
        return self.attributes["color"]

    @property
    def size(self) -> str:
        return self.attributes["size"]

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "category": self.category,
            "attributes": dict(self.attributes),
            "affordances": sorted(self.affordances),
            "box": self.box.as_list(),
            "height_m": self.height_m,
        }

    @staticmethod
    def from_json(data: dict) -> "ObjectSpec":
        return ObjectSpec(
            id=str(data["id"]),
            category=str(data["category"]),
            attributes={str(k): str(v) for k, v in data["attributes"].items()},
            affordances=frozenset(str(a) for a in data["affordances"]),
            box=RegionBox.from_list(data["box"]),
            height_m=float(data["height_m"]),
        )


MAX_PAIR_IOU_TIDY = 0.05   # pairwise overlap limit when clutter is off
MAX_PAIR_IOU_CLUTTER = 0.5


@dataclass(frozen=True)
class Scene:
    """A synthetic tabletop image surrogate with one designated target."""

    id: str
    width: int
    height: int
    objects: tuple[ObjectSpec, ...]
    target_id: str
    table_z: float = 0.0
    clutter_mode: bool = False

    def __post_init__(self):
        ids = [o.id for o in self.objects]
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate object ids")
        if self.target_id not in ids:
            raise ValueError(f"target_id {self.target_id!r} not in scene")
        for obj in self.objects:
            if not obj.box.within_bounds(self.width, self.height):
                raise ValueError(f"object {obj.id} box out of image bounds")
        limit = MAX_PAIR_IOU_CLUTTER if self.clutter_mode else MAX_PAIR_IOU_TIDY
        for i, a in enumerate(self.objects):
            for b in self.objects[i + 1:]:
                if box_iou(a.box, b.box) > limit:
                    raise ValueError(
                        f"objects {a.id}/{b.id} overlap beyond IoU {limit}"
                    )

    @property
    def target(self) -> ObjectSpec:
        return self.object_by_id(self.target_id)

    def object_by_id(self, object_id: str) -> ObjectSpec:
        for obj in self.objects:
            if obj.id == object_id:
                return obj
        raise KeyError(object_id)

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "width": self.width,
            "height": self.height,
            "objects": [o.to_json() for o in self.objects],
            "target_id": self.target_id,
            "table_z": self.table_z,
            "clutter_mode": self.clutter_mode,
        }

    @staticmethod
    def from_json(data: dict) -> "Scene":
        return Scene(
            id=str(data["id"]),
            width=int(data["width"]),
            height=int(data["height"]),
            objects=tuple(ObjectSpec.from_json(o) for o in data["objects"]),
            target_id=str(data["target_id"]),
            table_z=float(data.get("table_z", 0.0)),
            clutter_mode=bool(data.get("clutter_mode", False)),
        )


@dataclass(frozen=True)
class PointCloud:
    """3D points in meters with a per-point pixel correspondence.

    ``points`` is (n, 3) float64; ``pixel_map`` is (n, 2) float64 holding
    the (u, v) pixel each point projects to under the orthographic
    top-down camera. ``labels`` tags each point with the emitting object
    id or "" for the table plane (generator ground truth, not part of
    the wire format).
    """

    points: "object"     # np.ndarray (n, 3)
    pixel_map: "object"  # np.ndarray (n, 2)
    labels: tuple[str, ...] = field(default=())

    def __post_init__(self):
        if len(self.points) != len(self.pixel_map):
            raise ValueError("points and pixel_map length mismatch")
        if self.labels and len(self.labels) != len(self.points):
            raise ValueError("labels length mismatch")

    def __len__(self) -> int:
        return len(self.points)
