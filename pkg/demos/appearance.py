"""
Colour histograms, mean-shift and patch descriptors
===================================================
"""

import numpy as np

from occlusia import BoundingBox, DescriptorMatcher, bhattacharyya, extract_histogram, mean_shift_localize

# A red 20x40 rectangle on a green background
frame = np.zeros((120, 160, 3), dtype=np.uint8)
frame[:] = (30, 90, 30)
frame[40:80, 70:90] = (230, 20, 20)
truth = BoundingBox(70, 40, 20, 40)
target = extract_histogram(frame, truth)

# Start six pixels off and let mean-shift climb back
history = []
found, similarity = mean_shift_localize(frame, truth.translate(6, 0), target, history=history)
print("found", found.as_tuple(), "similarity", round(similarity, 4))
print("similarity along the way", np.round(history, 4))

# Bhattacharyya coefficient between the target and a half-covered window
half = extract_histogram(frame, truth.translate(10, 0))
print("BC(target, shifted window) =", round(bhattacharyya(target, half), 4))

# Descriptor matching: same texture vs an unrelated one
rng = np.random.default_rng(1)


def blocky(rng):
    mask = rng.integers(0, 2, (12, 6)).repeat(4, axis=0).repeat(4, axis=1)
    return np.where(mask[..., None] == 1, 120, 200).astype(np.uint8).repeat(3, axis=2)


a, b = blocky(rng), blocky(rng)
match = DescriptorMatcher()
print("same pattern", match(a, a), " other pattern", match(a, b))
