"""Grasp-point extraction: region segmentation, table-plane removal, centroid.

The pipeline segments cloud points whose pixel projection falls inside
the selected box, fits the dominant plane with 3-point RANSAC, drops
its inliers, and averages what remains into a single 3D grasp target.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateGeometryError, EmptyRegionError, ObjectNotFoundError
from .world.types import PointCloud, RegionBox


@dataclass(frozen=True)
class RansacParams:
    iterations: int = 200
    inlier_tol: float = 0.005     # meters
    min_remaining: int = 10
    seed: int = 0

    def __post_init__(self):
        if self.iterations < 1:
            raise ValueError("iterations must be >= 1")
        if self.inlier_tol <= 0:
            raise ValueError("inlier_tol must be > 0")


@dataclass(frozen=True)
class PlaneModel:
    normal: tuple[float, float, float]   # unit length
    offset: float                        # n . p + offset = 0
    inlier_count: int

    def __post_init__(self):
        norm = float(np.linalg.norm(self.normal))
        if abs(norm - 1.0) > 1e-9:
            raise ValueError("plane normal must be unit length")
        if self.inlier_count < 3:
            raise ValueError("a plane needs at least 3 inliers")

    def distances(self, points: np.ndarray) -> np.ndarray:
        n = np.asarray(self.normal)
        return np.abs(points @ n + self.offset)


@dataclass(frozen=True)
class GraspTarget:
    x: float
    y: float
    z: float
    points_used: int

    def to_json(self) -> dict:
        return {"x": self.x, "y": self.y, "z": self.z, "points_used": self.points_used}


def segment_region_points(cloud: PointCloud, box: RegionBox) -> np.ndarray:
    """Points whose (u, v) lies inside the half-open box; may be empty."""
    u = cloud.pixel_map[:, 0]
    v = cloud.pixel_map[:, 1]
    mask = (u >= box.x1) & (u < box.x2) & (v >= box.y1) & (v < box.y2)
    return np.asarray(cloud.points)[mask]


def _least_squares_plane(points: np.ndarray) -> tuple[np.ndarray, float]:
    centroid = points.mean(axis=0)
    _, _, vt = np.linalg.svd(points - centroid, full_matrices=False)
    normal = vt[-1]
    return normal, -float(normal @ centroid)


def ransac_plane(points: np.ndarray, params: RansacParams) -> tuple[PlaneModel, np.ndarray]:
    """Best-inlier-count plane over seeded 3-point hypotheses, refined by a
    least-squares fit to the winning consensus set.

    Returns the model and a boolean inlier mask. Raises
    DegenerateGeometryError with fewer than 3 points or when every
    sampled triple is collinear.
    """
    points = np.asarray(points, dtype=np.float64)
    if len(points) < 3:
        raise DegenerateGeometryError(f"need >= 3 points, got {len(points)}")

    rng = np.random.default_rng(params.seed)
    best_normal: np.ndarray | None = None
    best_offset = 0.0
    best_count = -1

    for _ in range(params.iterations):
        idx = rng.choice(len(points), size=3, replace=False)
        a, b, c = points[idx]
        normal = np.cross(b - a, c - a)
        norm = np.linalg.norm(normal)
        if norm < 1e-12:
            continue  # collinear sample
        normal = normal / norm
        offset = -float(normal @ a)
        count = int(np.count_nonzero(np.abs(points @ normal + offset) <= params.inlier_tol))
        if count > best_count:
            best_normal, best_offset, best_count = normal, offset, count

    if best_normal is None:
        raise DegenerateGeometryError("all sampled triples were collinear")

    mask = np.abs(points @ best_normal + best_offset) <= params.inlier_tol
    refined_normal, refined_offset = _least_squares_plane(points[mask])
    refined_mask = np.abs(points @ refined_normal + refined_offset) <= params.inlier_tol
    if refined_mask.sum() >= 3:
        best_normal, best_offset, mask = refined_normal, refined_offset, refined_mask

    model = PlaneModel(
        normal=(float(best_normal[0]), float(best_normal[1]), float(best_normal[2])),
        offset=best_offset,
        inlier_count=int(mask.sum()),
    )
    return model, mask


def grasp_target(cloud: PointCloud, box: RegionBox, params: RansacParams | None = None) -> GraspTarget:
    """Segment the box, remove the table plane, average the rest."""
    params = params or RansacParams()
    segment = segment_region_points(cloud, box)
    if len(segment) == 0:
        raise EmptyRegionError("empty region: no cloud points under the box")

    _, inlier_mask = ransac_plane(segment, params)
    remaining = segment[~inlier_mask]
    if len(remaining) < params.min_remaining:
        raise ObjectNotFoundError(
            f"object not found above plane: {len(remaining)} points remain "
            f"(need {params.min_remaining})"
        )
    mean = remaining.mean(axis=0)
    return GraspTarget(
        x=float(mean[0]), y=float(mean[1]), z=float(mean[2]),
        points_used=int(len(remaining)),
    )
