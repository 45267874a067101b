"""Frame-by-frame tracking loop.

One call to :func:`step` consumes the detections of frame ``k`` and

1. predicts every active agent into the frame with its Kalman filter,
2. scores predicted windows against detections (box overlap + colour similarity),
3. solves the one-to-one assignment,
4. re-checks labels of agents that overlapped in frame ``k - 1``,
5. updates matched agents, coasts unmatched ones and retires stale ones,
6. opens a new agent for every unassigned detection,
7. rebuilds the registry of overlapping agent pairs.

Unmatched agents are relocated by mean-shift when frame pixels are available;
the mean-shift window only feeds the Kalman filter when its similarity clears
``pipe.ms_fuse_threshold``.
"""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

import numpy as np

from .appearance import (
    DescriptorMatcher,
    Histogram,
    PatchMatcher,
    box_slices,
    crop,
    extract_histogram,
    mean_shift_localize,
)
from .association import SOLVERS, AffinityWeights, build_affinity
from .config import Config
from .core import Agent, BoundingBox, Detection
from .errors import EmptyRegion, FrameOrderError, OcclusiaError, PixelAccessError
from .motion import kf_init, kf_predict, kf_update
from .occlusion import GroupPairSet, LabelingProposal, update_groups, verify_labels

DETECTED = "D"
PREDICTED = "P"


@dataclass
class TrackerState:
    agents: dict = field(default_factory=dict)
    groups: GroupPairSet = field(default_factory=GroupPairSet)
    next_label: int = 1
    frame_index: int = 0


@dataclass
class FrameResult:
    frame: int
    outputs: list = field(default_factory=list)
    events: list = field(default_factory=list)

    def labels(self) -> list:
        return [label for label, _, _ in self.outputs]

    def box_of(self, label) -> Optional[BoundingBox]:
        for out_label, box, _ in self.outputs:
            if out_label == label:
                return box
        return None


def _check_inside(frame, box: BoundingBox):
    rows, cols = box_slices(frame.shape, box)
    if rows.stop <= rows.start or cols.stop <= cols.start:
        raise PixelAccessError(f"detection box {box.as_tuple()} lies outside the frame")


def _blend(old: Histogram, new: Histogram, rate: float) -> Histogram:
    if not new.valid:
        return old
    if not old.valid:
        return new
    values = (1.0 - rate) * old.values + rate * new.values
    return Histogram(values / values.sum(), old.bins)


def step(
    state: TrackerState,
    detections: Sequence[Detection],
    frame: Optional[np.ndarray] = None,
    cfg: Optional[Config] = None,
    matcher: Optional[PatchMatcher] = None,
) -> tuple[TrackerState, FrameResult]:
    """Advance the tracker by one frame; ``state`` is left untouched."""
    cfg = cfg or Config()
    k = state.frame_index + 1
    for det in detections:
        if det.frame != k:
            raise FrameOrderError(f"expected detections for frame {k}, got frame {det.frame}")
    result = FrameResult(k)

    labels = sorted(state.agents)
    predicted = {lab: kf_predict(state.agents[lab].kalman, cfg.kf) for lab in labels}

    det_hists, det_patches = [], []
    for det in detections:
        if frame is None:
            det_hists.append(None)
            det_patches.append(None)
            continue
        _check_inside(frame, det.box)
        det_hists.append(extract_histogram(frame, det.box, cfg.app.bins))
        det_patches.append(crop(frame, det.box))

    rows = [
        (lab, predicted[lab].box(), state.agents[lab].ref_histogram if frame is not None else None)
        for lab in labels
    ]
    weights = AffinityWeights(cfg.assoc.alpha1, cfg.assoc.alpha2)
    S = build_affinity(rows, [(d.box, h) for d, h in zip(detections, det_hists)], weights, cfg.assoc.gate)
    assignment = SOLVERS[cfg.assoc.solver](S)
    proposal = LabelingProposal({j: labels[i] for i, j in assignment.pairs}, assignment)

    if cfg.occ.enabled and frame is not None and len(state.groups):
        patches = {j: det_patches[j] for j in proposal.labels}
        proposal = verify_labels(
            state.groups, state.agents, proposal, patches, matcher or DescriptorMatcher(cfg.app)
        )
    for t, old, new in proposal.relabels:
        result.events.append(("relabel", new, {"detection": t, "from": old}))
    for t, old, new in proposal.skipped:
        result.events.append(("id-switch-suspect", old, {"detection": t, "candidate": new}))

    agents = {}
    matched = {label: j for j, label in proposal.labels.items()}
    for lab in labels:
        agent = state.agents[lab]
        pred = predicted[lab]
        if lab in matched:
            j = matched[lab]
            det = detections[j]
            hist = agent.ref_histogram
            if det_hists[j] is not None:
                hist = _blend(hist, det_hists[j], cfg.pipe.hist_blend)
            agents[lab] = dataclasses.replace(
                agent,
                kalman=kf_update(pred, det.box, cfg.kf),
                ref_histogram=hist,
                ref_patch=det_patches[j] if det_patches[j] is not None else agent.ref_patch,
                last_box=det.box,
                misses=0,
                age=agent.age + 1,
                hits=agent.hits + 1,
            )
            if agents[lab].hits >= cfg.pipe.min_hits:
                result.outputs.append((lab, det.box, DETECTED))
            continue

        misses = agent.misses + 1
        if misses > cfg.pipe.t_max:
            result.events.append(("terminated", lab, {"misses": misses}))
            continue
        kal = pred
        if frame is not None and agent.ref_histogram.valid:
            try:
                ms_box, sim = mean_shift_localize(frame, pred.box(), agent.ref_histogram, cfg.app)
            except EmptyRegion:
                sim = 0.0
            if sim >= cfg.pipe.ms_fuse_threshold:
                kal = kf_update(pred, ms_box, cfg.kf)
        box = kal.box()
        agents[lab] = dataclasses.replace(agent, kalman=kal, last_box=box, misses=misses, age=agent.age + 1)
        if agent.hits >= cfg.pipe.min_hits:
            result.outputs.append((lab, box, PREDICTED))

    next_label = state.next_label
    for j, det in enumerate(detections):
        if j in proposal.labels:
            continue
        lab = next_label
        next_label += 1
        hist = det_hists[j] if det_hists[j] is not None else Histogram.empty(cfg.app.bins)
        agents[lab] = Agent(
            label=lab,
            kalman=kf_init(det.box, cfg.kf),
            ref_histogram=hist,
            ref_patch=det_patches[j],
            last_box=det.box,
        )
        result.events.append(("new-track", lab, {"detection": j}))
        if cfg.pipe.min_hits <= 1:
            result.outputs.append((lab, det.box, DETECTED))

    result.outputs.sort(key=lambda o: o[0])
    groups = update_groups(((lab, a.last_box) for lab, a in agents.items()), cfg.occ.min_overlap_area)
    return TrackerState(agents, groups, next_label, k), result


class Tracker:
    """Stateful convenience wrapper around :func:`step`."""

    def __init__(self, cfg: Optional[Config] = None, matcher: Optional[PatchMatcher] = None):
        self.cfg = cfg or Config()
        self.matcher = matcher
        self.state = TrackerState()

    def update(self, detections, frame=None) -> FrameResult:
        self.state, result = step(self.state, detections, frame, self.cfg, self.matcher)
        return result


def _frame_at(frames, k):
    if frames is None:
        return None
    if hasattr(frames, "get"):
        return frames.get(k)
    if 1 <= k <= len(frames):
        return frames[k - 1]
    return None


def run_sequence(
    detections: Mapping[int, Sequence[Detection]] | Sequence[Sequence[Detection]],
    frames=None,
    cfg: Optional[Config] = None,
    n_frames: Optional[int] = None,
    matcher: Optional[PatchMatcher] = None,
) -> list[FrameResult]:
    """Run the tracker over a whole sequence.

    ``detections`` maps frame numbers (starting at 1) to detection lists, or is
    a list whose ``i``-th entry holds frame ``i + 1``.  Frames without an entry
    are processed with no detections.  ``frames`` is optional and may be a
    list of RGB arrays (frame 1 first) or any object with ``get(k)``.
    """
    if not isinstance(detections, Mapping):
        detections = {i + 1: list(d) for i, d in enumerate(detections)}
    last = max(detections, default=0)
    if n_frames is None and frames is not None and hasattr(frames, "__len__"):
        n_frames = len(frames)
    last = max(last, n_frames or 0)

    tracker = Tracker(cfg, matcher)
    results = []
    for k in range(1, last + 1):
        try:
            results.append(tracker.update(detections.get(k, []), _frame_at(frames, k)))
        except OcclusiaError as exc:
            raise type(exc)(f"frame {k}: {exc}") from exc
    return results
