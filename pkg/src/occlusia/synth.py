"""Synthetic pedestrian scenes: textured rectangles moving over a noisy background.

Agents are drawn in list order, so later agents occlude earlier ones.  An
agent whose box lies entirely inside the box of an agent drawn after it is
hidden and gets no detection in that frame.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional

import numpy as np

from .appearance import box_slices
from .core import BoundingBox, Detection
from .errors import SpecError
from .io import write_detections, write_ground_truth, write_ppm
from .metrics import TrajectorySet

PATTERN_BLOCK = 4


@dataclass(frozen=True)
class AgentSpec:
    """One synthetic pedestrian.

    ``hold=(frame, n)`` keeps the agent at its position of ``frame`` for ``n``
    consecutive frames before it moves on.  The body is a random block
    pattern of ``color`` and ``shade`` seeded by ``pattern_seed``.
    """

    box: BoundingBox
    velocity: tuple = (0.0, 0.0)
    color: tuple = (200, 70, 60)
    shade: tuple = (120, 40, 40)
    pattern_seed: int = 0
    hold: Optional[tuple] = None

    def moving_steps(self, frame: int) -> int:
        steps = frame - 1
        if self.hold is not None:
            first, n = self.hold
            frozen = range(first + 1, first + n)
            steps -= sum(1 for j in range(2, frame + 1) if j in frozen)
        return steps

    def box_at(self, frame: int) -> BoundingBox:
        s = self.moving_steps(frame)
        return self.box.translate(self.velocity[0] * s, self.velocity[1] * s)


@dataclass(frozen=True)
class ScenarioSpec:
    kind: str
    frames: int
    canvas: tuple  # (width, height)
    agents: tuple
    dropout: float = 0.0
    jitter: float = 0.0
    seed: int = 0
    background: int = 128
    background_noise: int = 12

    def with_overrides(self, **kwargs) -> "ScenarioSpec":
        return replace(self, **{k: v for k, v in kwargs.items() if v is not None})


@dataclass
class Scenario:
    spec: ScenarioSpec
    frames: list
    detections: dict
    gt: TrajectorySet
    hidden: dict = field(default_factory=dict)

    def gt_detections(self) -> dict:
        """Ground-truth boxes of every agent as detections (score 1)."""
        out = {}
        for frame in range(1, self.spec.frames + 1):
            out[frame] = [Detection(frame, self.gt[tid][frame]) for tid in sorted(self.gt) if frame in self.gt[tid]]
        return out


def _pattern(agent: AgentSpec) -> np.ndarray:
    w, h = int(np.ceil(agent.box.w)), int(np.ceil(agent.box.h))
    rng = np.random.default_rng(agent.pattern_seed)
    blocks = rng.integers(0, 2, size=(h // PATTERN_BLOCK + 1, w // PATTERN_BLOCK + 1))
    mask = np.kron(blocks, np.ones((PATTERN_BLOCK, PATTERN_BLOCK), dtype=np.int64))[:h, :w]
    color = np.array(agent.color, dtype=np.uint8)
    shade = np.array(agent.shade, dtype=np.uint8)
    return np.where(mask[..., None] == 1, shade, color).astype(np.uint8)


def _contains(outer: BoundingBox, inner: BoundingBox) -> bool:
    return outer.x <= inner.x and outer.y <= inner.y and inner.x2 <= outer.x2 and inner.y2 <= outer.y2


def validate(spec: ScenarioSpec) -> None:
    width, height = spec.canvas
    if spec.frames < 1:
        raise SpecError(f"scenario needs at least one frame, got {spec.frames}")
    if not 0.0 <= spec.dropout <= 1.0:
        raise SpecError(f"dropout probability must lie in [0, 1], got {spec.dropout}")
    if spec.jitter < 0:
        raise SpecError(f"jitter must be non-negative, got {spec.jitter}")
    for i, agent in enumerate(spec.agents):
        for frame in range(1, spec.frames + 1):
            b = agent.box_at(frame)
            if b.x < 0 or b.y < 0 or b.x2 > width or b.y2 > height:
                raise SpecError(f"agent {i + 1} leaves the {width}x{height} canvas at frame {frame}: {b.as_tuple()}")


def synth_scenario(spec: ScenarioSpec, out_dir=None) -> Scenario:
    """Render a scenario; with ``out_dir`` also write frames and CSV files."""
    validate(spec)
    width, height = spec.canvas
    bg_seq, det_seq = np.random.SeedSequence(spec.seed).spawn(2)
    bg_rng, det_rng = np.random.default_rng(bg_seq), np.random.default_rng(det_seq)
    noise = bg_rng.integers(-spec.background_noise, spec.background_noise + 1, size=(height, width, 3))
    background = np.clip(spec.background + noise, 0, 255).astype(np.uint8)
    patterns = [_pattern(a) for a in spec.agents]

    frames, detections, hidden = [], {}, {}
    gt = TrajectorySet()
    for frame in range(1, spec.frames + 1):
        boxes = [a.box_at(frame) for a in spec.agents]
        img = background.copy()
        for box, pat in zip(boxes, patterns):
            rows, cols = box_slices(img.shape, box)
            img[rows, cols] = pat[: rows.stop - rows.start, : cols.stop - cols.start]
        frames.append(img)

        dets, hidden_here = [], []
        for i, box in enumerate(boxes):
            gt.add(i + 1, frame, box)
            if any(_contains(boxes[j], box) for j in range(i + 1, len(boxes))):
                hidden_here.append(i + 1)
                continue
            if spec.dropout > 0 and det_rng.random() < spec.dropout:
                continue
            if spec.jitter > 0:
                dx, dy, dw, dh = det_rng.normal(0.0, spec.jitter, size=4)
                box = BoundingBox(box.x + dx, box.y + dy, max(1.0, box.w + dw), max(1.0, box.h + dh))
            dets.append(Detection(frame, box, 1.0))
        detections[frame] = dets
        if hidden_here:
            hidden[frame] = hidden_here

    scenario = Scenario(spec, frames, detections, gt, hidden)
    if out_dir is not None:
        write_scenario(scenario, out_dir)
    return scenario


def write_scenario(scenario: Scenario, out_dir) -> None:
    out = Path(out_dir)
    (out / "frames").mkdir(parents=True, exist_ok=True)
    for k, img in enumerate(scenario.frames, start=1):
        write_ppm(out / "frames" / f"{k:06d}.ppm", img)
    write_detections(scenario.detections, out / "detections.csv")
    write_ground_truth(scenario.gt, out / "gt.csv")


# -- presets ------------------------------------------------------------------

def crossing(seed: int = 42, frames: int = 60, dropout: float = 0.0, jitter: float = 0.0) -> ScenarioSpec:
    """Two look-alike pedestrians pass each other and stop, one hidden behind the other.

    Both wear the same two colours in different patterns, so colour histograms
    cannot tell them apart.  They meet at frame 26 and stand still for five
    frames, the smaller (farther) one fully covered by the nearer one.
    """
    near = AgentSpec(BoundingBox(313, 96, 24, 48), (-5.0, 0.0), pattern_seed=2, hold=(26, 5))
    far = AgentSpec(BoundingBox(140, 100, 20, 40), (2.0, 0.0), pattern_seed=1, hold=(26, 5))
    return ScenarioSpec("crossing", frames, (400, 240), (far, near), dropout, jitter, seed)


def parallel(seed: int = 0, frames: int = 60, dropout: float = 0.0, jitter: float = 0.0) -> ScenarioSpec:
    """Two pedestrians walking side by side, never overlapping."""
    a = AgentSpec(BoundingBox(40, 40, 24, 48), (3.0, 0.0), (60, 160, 60), (30, 90, 30), pattern_seed=3)
    b = AgentSpec(BoundingBox(40, 150, 24, 48), (3.0, 0.5), (60, 60, 200), (30, 30, 110), pattern_seed=4)
    return ScenarioSpec("parallel", frames, (400, 240), (a, b), dropout, jitter, seed)


def group(seed: int = 0, frames: int = 60, dropout: float = 0.0, jitter: float = 0.0) -> ScenarioSpec:
    """Three pedestrians walking together with partial overlaps."""
    a = AgentSpec(BoundingBox(40, 90, 24, 48), (2.0, 0.0), (200, 70, 60), (120, 40, 40), pattern_seed=5)
    b = AgentSpec(BoundingBox(58, 100, 24, 48), (2.0, 0.2), (60, 160, 60), (30, 90, 30), pattern_seed=6)
    c = AgentSpec(BoundingBox(76, 86, 24, 48), (2.0, -0.2), (60, 60, 200), (30, 30, 110), pattern_seed=7)
    return ScenarioSpec("group", frames, (400, 240), (a, b, c), dropout, jitter, seed)


def dropout(seed: int = 0, frames: int = 60, dropout: float = 0.2, jitter: float = 1.0) -> ScenarioSpec:
    """Two separated pedestrians seen by an unreliable, noisy detector."""
    a = AgentSpec(BoundingBox(30, 60, 24, 48), (4.0, 0.5), (200, 180, 60), (120, 100, 30), pattern_seed=8)
    b = AgentSpec(BoundingBox(340, 120, 24, 48), (-4.0, 0.0), (60, 60, 200), (30, 30, 110), pattern_seed=9)
    return ScenarioSpec("dropout", frames, (400, 240), (a, b), dropout, jitter, seed)


PRESETS = {"crossing": crossing, "parallel": parallel, "group": group, "dropout": dropout}


def preset(name: str, seed: Optional[int] = None, **overrides) -> ScenarioSpec:
    try:
        factory = PRESETS[name]
    except KeyError:
        raise SpecError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}") from None
    kwargs = {k: v for k, v in overrides.items() if v is not None}
    if seed is not None:
        kwargs["seed"] = seed
    return factory(**kwargs)
