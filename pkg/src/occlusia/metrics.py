"""Trajectory-level evaluation against ground truth.

Per frame, ground-truth and hypothesis boxes are matched one-to-one at an IoU
threshold.  From the per-frame matches we count recall, precision, false alarms
per frame, mostly tracked / partially tracked / mostly lost ground-truth
tracks, fragmentations and identity switches.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import asdict, dataclass, field
from typing import Mapping, Optional

import numpy as np

from .association import solve_hungarian
from .core import BoundingBox, iou
from .errors import EmptyGroundTruth

MT_THRESHOLD = 0.8
ML_THRESHOLD = 0.2

TABLE_COLUMNS = ("Recall", "Precision", "FAF", "GT", "MT", "PT", "ML", "Frag", "IDS")


class TrajectorySet(dict):
    """track id -> {frame -> BoundingBox}."""

    def add(self, track_id: int, frame: int, box: BoundingBox) -> None:
        boxes = self.setdefault(track_id, {})
        if frame in boxes:
            raise ValueError(f"track {track_id} already has a box in frame {frame}")
        boxes[frame] = box

    def frames(self) -> set:
        return {f for boxes in self.values() for f in boxes}

    def by_frame(self) -> dict:
        out = defaultdict(list)
        for tid in sorted(self):
            for f, box in self[tid].items():
                out[f].append((tid, box))
        return out

    @classmethod
    def from_results(cls, results) -> "TrajectorySet":
        traj = cls()
        for res in results:
            for label, box, _ in res.outputs:
                traj.add(label, res.frame, box)
        return traj


@dataclass
class MetricsReport:
    recall: float
    precision: float
    faf: float
    gt: int
    mt: float
    pt: float
    ml: float
    frag: int
    ids: int
    # hypothesis tracks with more than 80% unmatched boxes; not a standard metric
    ft: int = 0
    frames: int = 0
    matches: int = 0
    false_positives: int = 0
    misses: int = 0
    per_track: dict = field(default_factory=dict, repr=False)

    def row(self, percent: bool = False) -> dict:
        scale = 100.0 if percent else 1.0
        return {
            "Recall": self.recall * scale,
            "Precision": self.precision * scale,
            "FAF": self.faf,
            "GT": self.gt,
            "MT": self.mt * scale,
            "PT": self.pt * scale,
            "ML": self.ml * scale,
            "Frag": self.frag,
            "IDS": self.ids,
        }

    def as_dict(self) -> dict:
        d = asdict(self)
        d.pop("per_track")
        return d


def match_frame(gt_boxes, hyp_boxes, iou_threshold: float = 0.5):
    """One-to-one matching of ground-truth to hypothesis boxes in one frame.

    Pairs below ``iou_threshold`` are excluded.  The matching first maximises
    the number of matched pairs and then their total IoU.  Returns
    ``(pairs, missed_gt, false_positive_hyp)`` with index pairs ``(g, h)``.
    """
    m, n = len(gt_boxes), len(hyp_boxes)
    if m == 0 or n == 0:
        return [], list(range(m)), list(range(n))
    overlap = np.array([[iou(g, h) for h in hyp_boxes] for g in gt_boxes])
    ok = overlap >= iou_threshold
    # the constant dominates any IoU sum, so cardinality is maximised first
    score = np.where(ok, overlap + (min(m, n) + 1), 0.0)
    pairs = list(solve_hungarian(score).pairs)
    matched_g = {g for g, _ in pairs}
    matched_h = {h for _, h in pairs}
    return (
        pairs,
        [g for g in range(m) if g not in matched_g],
        [h for h in range(n) if h not in matched_h],
    )


def evaluate(
    gt: Mapping,
    hyp: Mapping,
    iou_threshold: float = 0.5,
    n_frames: Optional[int] = None,
) -> MetricsReport:
    """Evaluate hypothesis trajectories against ground truth.

    ``n_frames`` defaults to the span of frames present in either input and is
    the denominator of FAF.
    """
    if not gt:
        raise EmptyGroundTruth("ground truth has no tracks")
    gt = gt if isinstance(gt, TrajectorySet) else TrajectorySet(gt)
    hyp = hyp if isinstance(hyp, TrajectorySet) else TrajectorySet(hyp)
    gt_frames, hyp_frames = gt.by_frame(), hyp.by_frame()
    all_frames = set(gt_frames) | set(hyp_frames)
    if n_frames is None:
        n_frames = (max(all_frames) - min(all_frames) + 1) if all_frames else 0

    # gt track -> {frame: hyp id}
    matched_to = defaultdict(dict)
    hyp_matched = defaultdict(int)
    n_match = n_fp = n_miss = 0
    for f in sorted(all_frames):
        g_items, h_items = gt_frames.get(f, []), hyp_frames.get(f, [])
        pairs, missed, fps = match_frame([b for _, b in g_items], [b for _, b in h_items], iou_threshold)
        for g, h in pairs:
            matched_to[g_items[g][0]][f] = h_items[h][0]
            hyp_matched[h_items[h][0]] += 1
        n_match += len(pairs)
        n_miss += len(missed)
        n_fp += len(fps)

    mt = pt = ml = frag = ids = 0
    per_track = {}
    for tid in sorted(gt):
        frames = sorted(gt[tid])
        hits = matched_to.get(tid, {})
        coverage = len(hits) / len(frames)
        if coverage >= MT_THRESHOLD:
            mt += 1
        elif coverage < ML_THRESHOLD:
            ml += 1
        else:
            pt += 1
        track_frag = 0
        was_matched = seen = False
        for f in frames:
            now = f in hits
            if now and seen and not was_matched:
                track_frag += 1
            seen = seen or now
            was_matched = now
        track_ids = 0
        prev = None
        for f in frames:
            if f in hits:
                if prev is not None and hits[f] != prev:
                    track_ids += 1
                prev = hits[f]
        frag += track_frag
        ids += track_ids
        per_track[tid] = {"coverage": coverage, "frag": track_frag, "ids": track_ids}

    ft = sum(
        1 for tid, boxes in hyp.items()
        if (len(boxes) - hyp_matched.get(tid, 0)) > MT_THRESHOLD * len(boxes)
    )
    n_gt_boxes = n_match + n_miss
    n_hyp_boxes = n_match + n_fp
    n_tracks = len(gt)
    return MetricsReport(
        recall=n_match / n_gt_boxes if n_gt_boxes else 0.0,
        precision=n_match / n_hyp_boxes if n_hyp_boxes else 0.0,
        faf=n_fp / n_frames if n_frames else 0.0,
        gt=n_tracks,
        mt=mt / n_tracks,
        pt=pt / n_tracks,
        ml=ml / n_tracks,
        frag=frag,
        ids=ids,
        ft=ft,
        frames=n_frames,
        matches=n_match,
        false_positives=n_fp,
        misses=n_miss,
        per_track=per_track,
    )
