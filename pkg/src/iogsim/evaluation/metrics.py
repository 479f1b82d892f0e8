"""Offline metrics: IoU, accuracy at threshold, efficiency, oracle bound."""

from __future__ import annotations

from ..world.types import RegionBox, box_iou
from ..dialogue.episode import EpisodeResult


def iou(a: RegionBox, b: RegionBox) -> float:
    """Intersection area divided by union area; 0 for disjoint boxes."""
    return box_iou(a, b)


def accuracy_at(results: list[EpisodeResult], targets: list[RegionBox], tau: float) -> float:
    """Fraction of episodes whose final estimate clears IoU > tau (strict)."""
    if not results:
        raise ValueError("empty results")
    if len(results) != len(targets):
        raise ValueError("results and targets must align")
    hits = 0
    for result, target in zip(results, targets):
        if result.estimate is not None and iou(result.estimate, target) > tau:
            hits += 1
    return hits / len(results)


def communicative_efficiency(results: list[EpisodeResult]) -> float:
    """Mean rounds used under the early-stop protocol (common T required)."""
    if not results:
        raise ValueError("empty results")
    budgets = {r.max_rounds for r in results}
    if len(budgets) > 1:
        raise ValueError(f"mixed round budgets in efficiency input: {sorted(budgets)}")
    return sum(r.rounds_used for r in results) / len(results)


def oracle_upper_bound(results: list[EpisodeResult], targets: list[RegionBox], tau: float) -> float:
    """Fraction of episodes whose accumulated candidates contain a box
    with IoU > tau against the target (perfect-selector accuracy)."""
    if not results:
        raise ValueError("empty results")
    if len(results) != len(targets):
        raise ValueError("results and targets must align")
    hits = 0
    for result, target in zip(results, targets):
        if result.candidates is None:
            raise ValueError(f"episode {result.scene_id} is missing its candidate set")
        if any(iou(box, target) > tau for box in result.candidates):
            hits += 1
    return hits / len(results)
