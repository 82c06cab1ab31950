"""Deterministic screenshot rasterizer producing ASCII PPM (P3) images.

Widgets are drawn as filled rectangles in component-id order, each with a
one-pixel black border. A highlighted widget gets an extra three-pixel red
frame just outside its bounds, clipped to the canvas.
"""

from __future__ import annotations

from dataclasses import dataclass

from .bundle import CANVAS_HEIGHT, CANVAS_WIDTH
from .errors import HighlightNotVisible
from .simulator import ScreenObservation

Rgb = tuple[int, int, int]

BACKGROUND: Rgb = (245, 245, 245)
BORDER: Rgb = (0, 0, 0)
HIGHLIGHT: Rgb = (234, 67, 53)

TYPE_FILL: dict[str, Rgb] = {
    "button": (66, 133, 244),
    "checkbox": (52, 168, 83),
    "spinner": (251, 188, 5),
    "text_field": (255, 255, 255),
    "list_item": (230, 230, 230),
    "menu_item": (171, 71, 188),
}


@dataclass
class PpmImage:
    width: int
    height: int
    rows: list[list[Rgb]]

    def pixel(self, x: int, y: int) -> Rgb:
        return self.rows[y][x]

    def to_bytes(self) -> bytes:
        """Serialize as ASCII P3, one image row per text line."""
        triple = {}
        line_cache: dict[tuple[Rgb, ...], str] = {}
        lines = [f"P3\n{self.width} {self.height}\n255"]
        for row in self.rows:
            key = tuple(row)
            line = line_cache.get(key)
            if line is None:
                parts = []
                for rgb in key:
                    s = triple.get(rgb)
                    if s is None:
                        s = triple[rgb] = f"{rgb[0]} {rgb[1]} {rgb[2]}"
                    parts.append(s)
                line = line_cache[key] = " ".join(parts)
            lines.append(line)
        return ("\n".join(lines) + "\n").encode("ascii")


def _fill_rect(rows: list[list[Rgb]], x: int, y: int, w: int, h: int, color: Rgb) -> None:
    x0, y0 = max(x, 0), max(y, 0)
    x1, y1 = min(x + w, CANVAS_WIDTH), min(y + h, CANVAS_HEIGHT)
    if x1 <= x0 or y1 <= y0:
        return
    span = [color] * (x1 - x0)
    for yy in range(y0, y1):
        rows[yy][x0:x1] = span


def render_screenshot(observation: ScreenObservation, highlight: str | None = None) -> PpmImage:
    """Rasterize an observation; optionally frame one visible widget in red."""
    if highlight is not None:
        target = observation.widget(highlight)
        if target is None or not target.effective_visible:
            raise HighlightNotVisible(f"component {highlight!r} is not a visible widget")

    rows: list[list[Rgb]] = [[BACKGROUND] * CANVAS_WIDTH for _ in range(CANVAS_HEIGHT)]
    for widget in observation.widgets:
        if not widget.effective_visible:
            continue
        x, y, w, h = widget.bounds
        _fill_rect(rows, x, y, w, h, BORDER)
        _fill_rect(rows, x + 1, y + 1, w - 2, h - 2, TYPE_FILL[widget.ctype])

    if highlight is not None:
        x, y, w, h = observation.widget(highlight).bounds
        _fill_rect(rows, x - 3, y - 3, w + 6, 3, HIGHLIGHT)
        _fill_rect(rows, x - 3, y + h, w + 6, 3, HIGHLIGHT)
        _fill_rect(rows, x - 3, y, 3, h, HIGHLIGHT)
        _fill_rect(rows, x + w, y, 3, h, HIGHLIGHT)

    return PpmImage(width=CANVAS_WIDTH, height=CANVAS_HEIGHT, rows=rows)
