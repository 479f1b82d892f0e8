"""Box coordinate quantization onto a 1000-bin integer grid.

Each coordinate maps to floor(v / dim * 1000) clamped to [0, 999];
dequantization returns bin centers, so the round-trip error is at most
half a bin (dim / 2000).
"""

from __future__ import annotations

import math

from .types import RegionBox

BINS = 1000


def quantize_coord(value: float, dim: float) -> int:
    if dim <= 0:
        raise ValueError("dimension must be positive")
    q = math.floor(value / dim * BINS)
    return min(max(q, 0), BINS - 1)


def dequantize_coord(q: int, dim: float) -> float:
    return (q + 0.5) * dim / BINS


def quantize_box(box: RegionBox, width: float, height: float) -> tuple[int, int, int, int]:
    return (
        quantize_coord(box.x1, width),
        quantize_coord(box.y1, height),
        quantize_coord(box.x2, width),
        quantize_coord(box.y2, height),
    )


def dequantize_box(quad: tuple[int, int, int, int], width: float, height: float) -> RegionBox:
    qx1, qy1, qx2, qy2 = quad
    return RegionBox(
        dequantize_coord(qx1, width),
        dequantize_coord(qy1, height),
        dequantize_coord(qx2, width),
        dequantize_coord(qy2, height),
    )
