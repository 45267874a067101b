"""Independent reference implementations used only by the tests.

They are written to be obviously correct rather than fast.
"""
import itertools

import numpy as np


def grid_area(box):
    """Set of unit cells covered by an integer-coordinate box."""
    x, y, w, h = (int(v) for v in box)
    return {(c, r) for c in range(x, x + w) for r in range(y, y + h)}


def grid_iou(a, b):
    ca, cb = grid_area(a), grid_area(b)
    return len(ca & cb) / len(ca | cb)


def enumerate_assignments(m, n):
    """Every feasible partial one-to-one matching, as sorted pair lists."""
    for k in range(min(m, n) + 1):
        for rows in itertools.combinations(range(m), k):
            for cols in itertools.permutations(range(n), k):
                yield sorted(zip(rows, cols))


def brute_force_assignment(values):
    """Best matching by full enumeration.

    Only strictly positive entries may be used.  The value of a matching is
    summed in row order; ties go to the lexicographically smallest pair list.
    """
    values = np.asarray(values, dtype=float)
    m, n = values.shape
    best, best_value = [], 0.0
    for pairs in enumerate_assignments(m, n):
        if any(values[i, j] <= 0 for i, j in pairs):
            continue
        total = 0.0
        for i, j in pairs:
            total += float(values[i, j])
        if total > best_value or (total == best_value and pairs < best):
            best, best_value = pairs, total
    return best, best_value


def weighted_histogram(pixels, weights, bins):
    """Histogram accumulated pixel by pixel in plain Python."""
    h = np.zeros(bins ** 3)
    for (r, g, b), w in zip(pixels, weights):
        u = (int(r) * bins // 256 * bins + int(g) * bins // 256) * bins + int(b) * bins // 256
        h[u] += w
    return h / h.sum()


def brute_force_frame_match(overlap, threshold):
    """Most pairs at or above ``threshold``; among those, largest IoU sum."""
    overlap = np.asarray(overlap, dtype=float)
    m, n = overlap.shape
    best_key, best = (-1, -1.0), []
    for pairs in enumerate_assignments(m, n):
        if any(overlap[i, j] < threshold for i, j in pairs):
            continue
        key = (len(pairs), sum(overlap[i, j] for i, j in pairs))
        if key > best_key:
            best_key, best = key, pairs
    return best, best_key
