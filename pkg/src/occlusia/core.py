"""Geometry and identity primitives."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np


@dataclass(frozen=True)
class BoundingBox:
    """Axis-aligned box in pixels: left, top, width, height."""

    x: float
    y: float
    w: float
    h: float

    def __post_init__(self):
        if not (self.w > 0 and self.h > 0):
            raise ValueError(f"box needs positive size, got w={self.w}, h={self.h}")

    @property
    def x2(self) -> float:
        return self.x + self.w

    @property
    def y2(self) -> float:
        return self.y + self.h

    @property
    def center(self) -> tuple[float, float]:
        return self.x + self.w / 2.0, self.y + self.h / 2.0

    def area(self) -> float:
        return self.w * self.h

    @classmethod
    def from_center(cls, cx, cy, w, h) -> "BoundingBox":
        return cls(float(cx) - w / 2.0, float(cy) - h / 2.0, float(w), float(h))

    def translate(self, dx, dy) -> "BoundingBox":
        return BoundingBox(self.x + dx, self.y + dy, self.w, self.h)

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.x, self.y, self.w, self.h)


@dataclass(frozen=True)
class Detection:
    frame: int
    box: BoundingBox
    score: float = 1.0

    def __post_init__(self):
        if not 0.0 <= self.score <= 1.0:
            raise ValueError(f"detection score must lie in [0, 1], got {self.score}")
        if self.frame < 1:
            raise ValueError(f"frame indices start at 1, got {self.frame}")


# Labels are plain positive ints; the alias documents intent at call sites.
AgentLabel = int


@dataclass
class Agent:
    """A tracked pedestrian.

    ``kalman`` is a :class:`occlusia.motion.MotionState`; ``ref_histogram`` a
    :class:`occlusia.appearance.Histogram`; ``ref_patch`` the RGB crop of the
    last associated detection, or ``None`` when running without pixels.
    """

    label: AgentLabel
    kalman: object
    ref_histogram: object
    ref_patch: Optional[np.ndarray]
    last_box: BoundingBox
    misses: int = 0
    age: int = 0
    hits: int = 1

    def is_active(self, t_max: int) -> bool:
        return self.misses <= t_max


def intersection_area(a: BoundingBox, b: BoundingBox) -> float:
    iw = min(a.x2, b.x2) - max(a.x, b.x)
    ih = min(a.y2, b.y2) - max(a.y, b.y)
    if iw <= 0 or ih <= 0:
        return 0.0
    return iw * ih


def iou(a: BoundingBox, b: BoundingBox) -> float:
    """Intersection over union of two boxes."""
    inter = intersection_area(a, b)
    if inter == 0.0:
        return 0.0
    if a == b:
        return 1.0
    union = a.area() + b.area() - inter
    return min(1.0, inter / union)
