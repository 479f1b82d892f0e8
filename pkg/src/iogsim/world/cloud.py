"""Point cloud synthesis under an orthographic top-down camera.

The cloud is a table-plane grid covering the whole image plus a denser
grid per object box. Pixel (u, v) maps to meters as (u * mpp, v * mpp);
z grows upward from the table. Object points span z in
(table_z, table_z + height], cycling a descending ladder of discrete
levels so a noiseless cloud reaches the object top exactly.
"""

from __future__ import annotations

import hashlib
import json

import numpy as np

from .types import PointCloud, Scene

METERS_PER_PIXEL = 0.00125
PLANE_STEP_PX = 4
OBJECT_STEP_PX = 3
Z_LEVELS = 12


def _grid(x1: float, y1: float, x2: float, y2: float, step: float) -> np.ndarray:
    us = np.arange(x1 + step / 2.0, x2, step, dtype=np.float64)
    vs = np.arange(y1 + step / 2.0, y2, step, dtype=np.float64)
    uu, vv = np.meshgrid(us, vs)
    return np.column_stack([uu.ravel(), vv.ravel()])


def _scene_rng(scene: Scene) -> np.random.Generator:
    digest = hashlib.sha256(scene.id.encode()).digest()
    return np.random.default_rng(int.from_bytes(digest[:8], "little"))


def render_point_cloud(
    scene: Scene,
    noise_sigma: float,
    rng: np.random.Generator | None = None,
    meters_per_pixel: float = METERS_PER_PIXEL,
) -> PointCloud:
    """Synthesize the scene's cloud; deterministic per scene unless rng given."""
    if noise_sigma < 0:
        raise ValueError("noise_sigma must be >= 0")
    rng = rng if rng is not None else _scene_rng(scene)

    pixel_chunks: list[np.ndarray] = []
    z_chunks: list[np.ndarray] = []
    labels: list[str] = []

    plane_px = _grid(0, 0, scene.width, scene.height, PLANE_STEP_PX)
    pixel_chunks.append(plane_px)
    z_chunks.append(np.full(len(plane_px), scene.table_z, dtype=np.float64))
    labels.extend([""] * len(plane_px))

    for obj in scene.objects:
        b = obj.box
        px = _grid(b.x1, b.y1, b.x2, b.y2, OBJECT_STEP_PX)
        if len(px) == 0:
            continue
        idx = np.arange(len(px))
        ladder = (Z_LEVELS - (idx % Z_LEVELS)) / Z_LEVELS
        pixel_chunks.append(px)
        z_chunks.append(scene.table_z + obj.height_m * ladder)
        labels.extend([obj.id] * len(px))

    pixels = np.vstack(pixel_chunks)
    zs = np.concatenate(z_chunks)
    points = np.column_stack([
        pixels[:, 0] * meters_per_pixel,
        pixels[:, 1] * meters_per_pixel,
        zs,
    ])
    if noise_sigma > 0:
        points = points + rng.normal(0.0, noise_sigma, size=points.shape)

    return PointCloud(points=points, pixel_map=pixels, labels=tuple(labels))


def save_cloud(cloud: PointCloud, path: str, meters_per_pixel: float = METERS_PER_PIXEL) -> None:
    """JSON container: one flat [x, y, z, u, v] row per point."""
    rows = np.column_stack([cloud.points, cloud.pixel_map])
    payload = {
        "meters_per_pixel": meters_per_pixel,
        "points": [[float(v) for v in row] for row in rows],
    }
    with open(path, "w") as fh:
        json.dump(payload, fh)


def load_cloud(path: str) -> PointCloud:
    with open(path) as fh:
        payload = json.load(fh)
    rows = np.asarray(payload["points"], dtype=np.float64)
    if rows.ndim != 2 or rows.shape[1] != 5:
        raise ValueError("cloud file rows must be [x, y, z, u, v]")
    return PointCloud(points=rows[:, :3], pixel_map=rows[:, 3:])
