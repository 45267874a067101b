"""Colour histograms, mean-shift localisation and patch descriptors.

Frames and patches are ``(height, width, 3)`` uint8 RGB arrays.  A pixel at
column ``c``, row ``r`` covers ``[c, c+1) x [r, r+1)``; it belongs to a box when
its center ``(c + 0.5, r + 0.5)`` lies inside the box.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .config import AppearanceConfig
from .core import BoundingBox
from .errors import EmptyRegion

ImagePatch = np.ndarray


@dataclass(frozen=True)
class Histogram:
    """Normalised RGB histogram with ``bins**3`` entries.

    An all-zero histogram marks an unusable appearance model (no pixels, or a
    tracker running without frames).
    """

    values: np.ndarray
    bins: int

    @property
    def valid(self) -> bool:
        return bool(self.values.sum() > 0)

    @classmethod
    def empty(cls, bins: int = 8) -> "Histogram":
        return cls(np.zeros(bins ** 3), bins)


@dataclass(frozen=True)
class DescriptorSet:
    positions: np.ndarray = field(default_factory=lambda: np.zeros((0, 2)))
    descriptors: np.ndarray = field(default_factory=lambda: np.zeros((0, 0)))
    flat: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=bool))

    def __len__(self) -> int:
        return len(self.positions)


def as_patch(pixels) -> ImagePatch:
    arr = np.asarray(pixels)
    if arr.ndim != 3 or arr.shape[2] != 3 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ValueError(f"expected an (h, w, 3) RGB array, got shape {arr.shape}")
    return arr.astype(np.uint8, copy=False)


def pixel_span(lo: float, size: float, limit: int) -> tuple[int, int]:
    """Index range ``[start, stop)`` of pixels whose centers fall in ``[lo, lo+size)``."""
    start = max(0, math.ceil(lo - 0.5))
    stop = min(limit, math.ceil(lo + size - 0.5))
    return start, max(start, stop)


def box_slices(frame_shape, box: BoundingBox) -> tuple[slice, slice]:
    h, w = frame_shape[:2]
    c0, c1 = pixel_span(box.x, box.w, w)
    r0, r1 = pixel_span(box.y, box.h, h)
    return slice(r0, r1), slice(c0, c1)


def crop(frame: ImagePatch, box: BoundingBox) -> ImagePatch:
    rows, cols = box_slices(frame.shape, box)
    region = frame[rows, cols]
    if region.size == 0:
        raise EmptyRegion(f"box {box.as_tuple()} has no pixels inside the frame")
    return region.copy()


def bin_indices(pixels: np.ndarray, bins: int) -> np.ndarray:
    q = (pixels.astype(np.int64) * bins) // 256
    return (q[..., 0] * bins + q[..., 1]) * bins + q[..., 2]


def _window(frame, box: BoundingBox, bins: int, kernel: bool):
    """Pixel coordinates, bin indices and kernel weights for pixels in ``box``."""
    rows, cols = box_slices(frame.shape, box)
    region = frame[rows, cols]
    if region.size == 0:
        raise EmptyRegion(f"box {box.as_tuple()} has no pixels inside the frame")
    ys = np.arange(rows.start, rows.stop) + 0.5
    xs = np.arange(cols.start, cols.stop) + 0.5
    gx, gy = np.meshgrid(xs, ys)
    idx = bin_indices(region, bins)
    if kernel:
        cx, cy = box.center
        r2 = ((gx - cx) / (box.w / 2.0)) ** 2 + ((gy - cy) / (box.h / 2.0)) ** 2
        weights = np.clip(1.0 - r2, 0.0, None)
    else:
        weights = np.ones_like(gx)
    return gx.ravel(), gy.ravel(), idx.ravel(), weights.ravel()


def _histogram_from(idx, weights, bins) -> Histogram:
    values = np.bincount(idx, weights=weights, minlength=bins ** 3).astype(float)
    total = values.sum()
    if total > 0:
        values /= total
    return Histogram(values, bins)


def extract_histogram(frame, box: BoundingBox, bins: int = 8, kernel: bool = True) -> Histogram:
    """Kernel-weighted colour histogram of the pixels under ``box``.

    The Epanechnikov kernel is centred on the unclipped box; ``kernel=False``
    weighs every pixel equally.  Raises :class:`EmptyRegion` when the box has no
    pixels inside the frame.
    """
    _, _, idx, weights = _window(frame, box, bins, kernel)
    return _histogram_from(idx, weights, bins)


def bhattacharyya(p: Histogram, q: Histogram) -> float:
    """Bhattacharyya coefficient; 0 when either histogram is unusable."""
    if not (p.valid and q.valid):
        return 0.0
    bc = float(np.sum(np.sqrt(p.values * q.values)))
    return min(1.0, max(0.0, bc))


def _clamp_center(cx, cy, w, h, frame_shape):
    fh, fw = frame_shape[:2]
    cx = min(max(cx, w / 2.0), fw - w / 2.0) if w <= fw else fw / 2.0
    cy = min(max(cy, h / 2.0), fh - h / 2.0) if h <= fh else fh / 2.0
    return cx, cy


def mean_shift_localize(
    frame,
    start: BoundingBox,
    target: Histogram,
    cfg: AppearanceConfig | None = None,
    history: Optional[list] = None,
) -> tuple[BoundingBox, float]:
    """Move a fixed-size window uphill in Bhattacharyya similarity to ``target``.

    Each iteration moves the window center to the weighted mean of its pixel
    positions, weights ``sqrt(q_u / p_u)``; a step that lowers the similarity is
    halved until it does not.  If ``history`` is given, the similarity of every
    accepted window is appended to it.
    """
    cfg = cfg or AppearanceConfig()
    if not target.valid:
        return start, 0.0
    bins = target.bins
    w, h = start.w, start.h
    q = target.values

    def evaluate(cx, cy):
        box = BoundingBox.from_center(cx, cy, w, h)
        gx, gy, idx, kw = _window(frame, box, bins, kernel=True)
        p = _histogram_from(idx, kw, bins)
        return box, p, bhattacharyya(p, target), (gx, gy, idx, kw)

    cx, cy = _clamp_center(*start.center, w, h, frame.shape)
    box, p, rho, win = evaluate(cx, cy)
    if history is not None:
        history.append(rho)

    for _ in range(cfg.ms_max_iters):
        gx, gy, idx, kw = win
        inside = kw > 0
        pu = p.values[idx[inside]]
        with np.errstate(divide="ignore", invalid="ignore"):
            wts = np.where(pu > 0, np.sqrt(q[idx[inside]] / pu), 0.0)
        total = wts.sum()
        if total <= 0:
            break
        nx = float(np.dot(wts, gx[inside]) / total)
        ny = float(np.dot(wts, gy[inside]) / total)
        nx, ny = _clamp_center(nx, ny, w, h, frame.shape)

        new_box, new_p, new_rho, new_win = evaluate(nx, ny)
        halvings = 0
        while new_rho < rho and halvings < 10:
            nx, ny = 0.5 * (cx + nx), 0.5 * (cy + ny)
            new_box, new_p, new_rho, new_win = evaluate(nx, ny)
            halvings += 1
        if new_rho < rho:
            break
        shift = math.hypot(nx - cx, ny - cy)
        cx, cy, box, p, rho, win = nx, ny, new_box, new_p, new_rho, new_win
        if history is not None:
            history.append(rho)
        if shift < cfg.ms_epsilon:
            break
    return box, rho


def resample_nearest(patch: ImagePatch, size: int) -> ImagePatch:
    h, w = patch.shape[:2]
    rows = ((np.arange(size) + 0.5) * h / size).astype(int)
    cols = ((np.arange(size) + 0.5) * w / size).astype(int)
    return patch[np.ix_(np.minimum(rows, h - 1), np.minimum(cols, w - 1))]


def extract_descriptors(patch: ImagePatch, cfg: AppearanceConfig | None = None) -> DescriptorSet:
    """Dense grid of gradient-orientation histograms over a resampled patch.

    One keypoint per grid cell.  Its descriptor concatenates the orientation
    histograms of the cell's ``sub_cells x sub_cells`` blocks, so it has
    ``orient_bins * sub_cells**2`` entries.  Patches smaller than
    ``cfg.min_patch`` on either side give an empty set.  Cells without
    gradient energy get a zero descriptor and are flagged flat.
    """
    cfg = cfg or AppearanceConfig()
    patch = as_patch(patch)
    if patch.shape[0] < cfg.min_patch or patch.shape[1] < cfg.min_patch:
        return DescriptorSet()
    size = cfg.patch_size
    gray = resample_nearest(patch, size).astype(float).mean(axis=2)
    gy, gx = np.gradient(gray)
    mag = np.hypot(gx, gy)
    angle = np.mod(np.arctan2(gy, gx), 2 * np.pi)
    nb = cfg.orient_bins
    obin = np.minimum((angle / (2 * np.pi) * nb).astype(int), nb - 1)

    g, sub = cfg.grid_cells, cfg.sub_cells
    cell = size // g
    block = cell // sub
    positions, descs, flat = [], [], []
    for i in range(g):
        for j in range(g):
            parts = []
            for a in range(sub):
                for b in range(sub):
                    r0, c0 = i * cell + a * block, j * cell + b * block
                    sl = (slice(r0, r0 + block), slice(c0, c0 + block))
                    parts.append(np.bincount(obin[sl].ravel(), weights=mag[sl].ravel(), minlength=nb))
            d = np.concatenate(parts)
            norm = np.linalg.norm(d)
            if norm > 1e-9:
                d = d / norm
                flat.append(False)
            else:
                d = np.zeros_like(d)
                flat.append(True)
            positions.append(((j + 0.5) * cell, (i + 0.5) * cell))
            descs.append(d)
    return DescriptorSet(np.array(positions), np.array(descs), np.array(flat))


def descriptor_match(a: DescriptorSet, b: DescriptorSet, ratio: float = 0.8) -> float:
    """Fraction of ``a``'s keypoints whose nearest neighbour in ``b`` passes the ratio test."""
    if len(a) == 0 or len(b) == 0:
        return 0.0
    dist = np.linalg.norm(a.descriptors[:, None, :] - b.descriptors[None, :, :], axis=2)
    if dist.shape[1] == 1:
        return 1.0
    two = np.partition(dist, 1, axis=1)[:, :2]
    d1, d2 = two[:, 0], two[:, 1]
    passed = d1 < ratio * d2
    return float(passed.sum()) / len(a)


PatchMatcher = Callable[[ImagePatch, ImagePatch], float]


class DescriptorMatcher:
    """Default patch matcher: grid descriptors plus ratio-test matching."""

    def __init__(self, cfg: AppearanceConfig | None = None):
        self.cfg = cfg or AppearanceConfig()

    def __call__(self, reference: ImagePatch, candidate: ImagePatch) -> float:
        a = extract_descriptors(reference, self.cfg)
        b = extract_descriptors(candidate, self.cfg)
        return descriptor_match(a, b, self.cfg.ratio_threshold)
