"""Overlap-pair registry and appearance verification of assigned labels.

After assignment, every pair of agents that overlapped in the previous frame is
checked.  When exactly one of the two labels was handed to a detection, the
detection's patch is compared with both agents' stored patches and the label of
the better match wins.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional

from .appearance import DescriptorMatcher, PatchMatcher
from .core import AgentLabel, BoundingBox, intersection_area
from .errors import MissingPatch

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class GroupPairSet:
    """Unordered pairs of labels, stored as ``(low, high)`` tuples."""

    pairs: frozenset = frozenset()

    def __post_init__(self):
        normalized = set()
        for p, q in self.pairs:
            if p == q:
                raise ValueError(f"a group pair needs two distinct labels, got ({p}, {q})")
            normalized.add((min(p, q), max(p, q)))
        object.__setattr__(self, "pairs", frozenset(normalized))

    def __iter__(self):
        return iter(sorted(self.pairs))

    def __len__(self):
        return len(self.pairs)

    def __contains__(self, pair):
        p, q = pair
        return (min(p, q), max(p, q)) in self.pairs

    def labels(self) -> set:
        return {label for pair in self.pairs for label in pair}


@dataclass
class LabelingProposal:
    """Detection index -> label, as produced by assignment and then verification."""

    labels: dict
    assignment: object = None
    relabels: list = field(default_factory=list)
    skipped: list = field(default_factory=list)

    def copy(self) -> "LabelingProposal":
        return LabelingProposal(dict(self.labels), self.assignment, list(self.relabels), list(self.skipped))


def update_groups(
    agents: Iterable[tuple[AgentLabel, BoundingBox]], min_overlap_area: float = 0.0
) -> GroupPairSet:
    items = sorted(agents, key=lambda a: a[0])
    pairs = set()
    for a in range(len(items)):
        for b in range(a + 1, len(items)):
            (p, box_p), (q, box_q) = items[a], items[b]
            if intersection_area(box_p, box_q) > min_overlap_area:
                pairs.add((p, q))
    return GroupPairSet(frozenset(pairs))


def verify_labels(
    prev_groups: GroupPairSet,
    prev_agents: Mapping,
    proposal: LabelingProposal,
    current_patches: Mapping,
    matcher: Optional[PatchMatcher] = None,
) -> LabelingProposal:
    """Re-check assigned labels for agents that were paired in the previous frame.

    ``prev_agents`` maps labels to objects with a ``ref_patch`` attribute;
    ``current_patches`` maps detection indices to RGB crops.  A detection
    without a patch keeps its label.  Pairs are processed in sorted order and
    each decision sees the labels produced by earlier ones.
    """
    matcher = matcher or DescriptorMatcher()
    out = proposal.copy()
    for p, q in prev_groups:
        by_label = {label: det for det, label in out.labels.items()}
        has_p, has_q = p in by_label, q in by_label
        if has_p == has_q:
            continue
        present, other = (p, q) if has_p else (q, p)
        t = by_label[present]
        patch = current_patches.get(t)
        if patch is None:
            continue
        ref_present = _ref_patch(prev_agents, present)
        ref_other = _ref_patch(prev_agents, other)
        score_present = matcher(ref_present, patch)
        score_other = matcher(ref_other, patch)
        if score_other > score_present:
            # keeps labels one-to-one if a caller hands in a proposal that
            # already uses ``other``
            if other in out.labels.values():
                log.info("skip relabel of detection %d to %d: label already assigned", t, other)
                out.skipped.append((t, present, other))
                continue
            out.labels[t] = other
            out.relabels.append((t, present, other))
    return out


def _ref_patch(agents, label):
    agent = agents.get(label)
    patch = getattr(agent, "ref_patch", None) if agent is not None else None
    if patch is None:
        raise MissingPatch(f"agent {label} has no stored appearance patch")
    return patch
