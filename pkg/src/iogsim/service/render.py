"""Deterministic SVG rendering of scenes for the web UI."""

from __future__ import annotations

from html import escape

from ..world.types import Scene

_FILL = {
    "red": "#d64545", "blue": "#4563d6", "green": "#3f9e4d", "yellow": "#d6b945",
    "pink": "#d645a8", "white": "#e8e8e8", "black": "#3a3a3a", "orange": "#d67f45",
}


def scene_svg(scene: Scene) -> str:
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {scene.width} {scene.height}" '
        f'width="{scene.width}" height="{scene.height}">',
        f'<rect x="0" y="0" width="{scene.width}" height="{scene.height}" fill="#f5f0e8"/>',
    ]
    for obj in scene.objects:
        b = obj.box
        fill = _FILL.get(obj.color, "#999999")
        label = escape(f"{obj.color} {obj.category}")
        parts.append(
            f'<g data-object-id="{escape(obj.id)}">'
            f'<rect x="{b.x1:.1f}" y="{b.y1:.1f}" width="{b.width:.1f}" '
            f'height="{b.height:.1f}" fill="{fill}" fill-opacity="0.55" '
            f'stroke="#444444" stroke-width="1.5"/>'
            f'<text x="{b.x1 + 3:.1f}" y="{b.y1 + 13:.1f}" font-size="11" '
            f'font-family="sans-serif" fill="#222222">{label}</text>'
            f'</g>'
        )
    parts.append("</svg>")
    return "".join(parts)
