"""Shared hand-built fixtures."""
import numpy as np

# Four tracked windows (labels 3, 4, 5, 6) against three detections a, b, c.
# Windows 4 and 5 compete for a and b, windows 3 and 6 for c.  Taking the
# single largest entry first (5-b) leads to a worse total, so only a true
# optimum gives a-5, b-4, c-3 with 6 left over.
CONFLICT_ROWS = [3, 4, 5, 6]
CONFLICT_COLS = ["a", "b", "c"]
CONFLICT_MATRIX = np.array([
    [0.00, 0.20, 0.70],
    [0.45, 0.62, 0.00],
    [0.65, 0.72, 0.00],
    [0.00, 0.00, 0.50],
])
CONFLICT_EXPECTED = {"a": 5, "b": 4, "c": 3}
