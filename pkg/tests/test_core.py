import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from occlusia.core import BoundingBox, Detection, intersection_area, iou

from oracles import grid_iou


def test_identical_boxes_have_iou_one():
    a = BoundingBox(0, 0, 10, 10)
    assert iou(a, a) == 1.0


def test_disjoint_boxes():
    assert iou(BoundingBox(0, 0, 10, 10), BoundingBox(20, 20, 5, 5)) == 0.0


def test_half_shift_is_one_third():
    # intersection 50, union 150
    assert iou(BoundingBox(0, 0, 10, 10), BoundingBox(5, 0, 10, 10)) == pytest.approx(1 / 3, abs=1e-12)
    assert grid_iou((0, 0, 10, 10), (5, 0, 10, 10)) == pytest.approx(1 / 3)


def test_intersection_examples():
    a = BoundingBox(0, 0, 4, 5)
    assert intersection_area(a, a) == 20
    assert intersection_area(BoundingBox(0, 0, 10, 10), BoundingBox(10, 0, 10, 10)) == 0
    assert intersection_area(BoundingBox(0, 0, 10, 10), BoundingBox(5, 5, 10, 10)) == 25


@pytest.mark.parametrize("w,h", [(0, 5), (5, 0), (-1, 3)])
def test_box_rejects_non_positive_size(w, h):
    with pytest.raises(ValueError):
        BoundingBox(0, 0, w, h)


def test_detection_score_range():
    Detection(1, BoundingBox(0, 0, 1, 1), 0.0)
    with pytest.raises(ValueError):
        Detection(1, BoundingBox(0, 0, 1, 1), 1.5)
    with pytest.raises(ValueError):
        Detection(0, BoundingBox(0, 0, 1, 1))


def test_center_round_trip():
    b = BoundingBox.from_center(5, 10, 10, 20)
    assert b.as_tuple() == (0, 0, 10, 20)
    assert b.center == (5, 10)


def test_iou_matches_pixel_grid_on_random_integer_boxes():
    rng = np.random.default_rng(7)
    for _ in range(1000):
        a = tuple(int(v) for v in (*rng.integers(0, 20, 2), *rng.integers(1, 15, 2)))
        b = tuple(int(v) for v in (*rng.integers(0, 20, 2), *rng.integers(1, 15, 2)))
        assert iou(BoundingBox(*a), BoundingBox(*b)) == pytest.approx(grid_iou(a, b), abs=1e-12)


boxes = st.builds(
    BoundingBox,
    st.floats(-50, 50),
    st.floats(-50, 50),
    st.floats(0.1, 40),
    st.floats(0.1, 40),
)


@settings(max_examples=200, deadline=None)
@given(boxes, boxes)
def test_iou_symmetric_and_bounded(a, b):
    v = iou(a, b)
    assert v == iou(b, a)
    assert 0.0 <= v <= 1.0
    assert intersection_area(a, b) == intersection_area(b, a)
