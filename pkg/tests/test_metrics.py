import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from occlusia.core import BoundingBox, iou
from occlusia.errors import EmptyGroundTruth
from occlusia.metrics import TABLE_COLUMNS, TrajectorySet, evaluate, match_frame

from oracles import brute_force_frame_match


def track(frames, x0=0.0, vx=2.0, y=0.0):
    return {f: BoundingBox(x0 + vx * f, y, 10, 20) for f in frames}


def one_track_fixture():
    """One GT track over 10 frames; hyp 7 on frames 1-4, hyp 9 on frames 6-10."""
    gt = TrajectorySet({1: track(range(1, 11))})
    hyp = TrajectorySet({7: track(range(1, 5)), 9: track(range(6, 11))})
    return gt, hyp


def crossing_fixture():
    """Two GT tracks cross at frame 6; the hypothesis ids swap there."""
    a = {f: BoundingBox(10 * f, 0, 10, 20) for f in range(1, 11)}
    b = {f: BoundingBox(100 - 10 * f, 40, 10, 20) for f in range(1, 11)}
    gt = TrajectorySet({1: a, 2: b})
    hyp = TrajectorySet({
        5: {f: (a if f < 6 else b)[f] for f in range(1, 11)},
        6: {f: (b if f < 6 else a)[f] for f in range(1, 11)},
    })
    return gt, hyp


def test_identity():
    gt, _ = one_track_fixture()
    rep = evaluate(gt, gt)
    assert (rep.recall, rep.precision, rep.faf, rep.mt, rep.frag, rep.ids) == (1.0, 1.0, 0.0, 1.0, 0, 0)


def test_one_track_fixture():
    gt, hyp = one_track_fixture()
    rep = evaluate(gt, hyp)
    assert rep.recall == 0.9
    assert rep.precision == 1.0
    assert rep.frag == 1
    assert rep.ids == 1
    assert rep.mt == 1.0 and rep.pt == 0.0 and rep.ml == 0.0


def test_crossing_fixture():
    gt, hyp = crossing_fixture()
    rep = evaluate(gt, hyp)
    assert rep.ids == 2
    assert rep.frag == 0 and rep.recall == 1.0


def test_coverage_classes_and_false_alarms():
    gt = TrajectorySet({
        1: track(range(1, 11)),
        2: track(range(1, 11), y=100),
        3: track(range(1, 11), y=200),
    })
    hyp = TrajectorySet({
        1: track(range(1, 9)),            # 8/10 -> mostly tracked
        2: track(range(1, 3), y=100),      # 2/10 -> partially tracked (not < 20%)
        3: track(range(1, 2), y=200),      # 1/10 -> mostly lost
        4: track(range(1, 11), y=400),     # pure false alarm
    })
    rep = evaluate(gt, hyp)
    assert (rep.mt, rep.pt, rep.ml) == pytest.approx((1 / 3, 1 / 3, 1 / 3))
    assert rep.mt + rep.pt + rep.ml == pytest.approx(1.0, abs=1e-9)
    assert rep.false_positives == 10
    assert rep.faf == 1.0
    assert rep.ft == 1
    assert rep.recall == pytest.approx(11 / 30)
    assert rep.precision == pytest.approx(11 / 21)


def test_empty_ground_truth():
    with pytest.raises(EmptyGroundTruth):
        evaluate({}, {1: {1: BoundingBox(0, 0, 1, 1)}})


def test_duplicate_frame_rejected():
    t = TrajectorySet()
    t.add(1, 1, BoundingBox(0, 0, 1, 1))
    with pytest.raises(ValueError):
        t.add(1, 1, BoundingBox(0, 0, 1, 1))


def test_match_frame_simple_cases():
    boxes = [BoundingBox(0, 0, 10, 10), BoundingBox(50, 0, 10, 10)]
    assert match_frame(boxes, boxes) == ([(0, 0), (1, 1)], [], [])
    assert match_frame(boxes, []) == ([], [0, 1], [])


def test_match_frame_crossed_overlaps():
    g = [BoundingBox(0, 0, 10, 10), BoundingBox(4, 0, 10, 10)]
    h = [BoundingBox(3, 0, 10, 10), BoundingBox(1, 0, 10, 10)]
    pairs, _, _ = match_frame(g, h, 0.3)
    overlap = [[iou(a, b) for b in h] for a in g]
    assert pairs == brute_force_frame_match(overlap, 0.3)[0]
    assert pairs == [(0, 1), (1, 0)]


def test_match_frame_against_enumeration():
    rng = np.random.default_rng(12)
    for _ in range(300):
        m, n = rng.integers(0, 5, size=2)
        g = [BoundingBox(*rng.integers(0, 20, 2), *rng.integers(5, 15, 2)) for _ in range(m)]
        h = [BoundingBox(*rng.integers(0, 20, 2), *rng.integers(5, 15, 2)) for _ in range(n)]
        pairs, missed, fps = match_frame(g, h, 0.3)
        overlap = np.array([[iou(a, b) for b in h] for a in g]).reshape(m, n)
        _, (count, total) = brute_force_frame_match(overlap, 0.3)
        assert len(pairs) == count
        assert sum(overlap[i, j] for i, j in pairs) == pytest.approx(total, abs=1e-9)
        assert len(pairs) + len(missed) == m and len(pairs) + len(fps) == n


def random_gt(seed, n_tracks=4, n_frames=20):
    rng = np.random.default_rng(seed)
    gt = TrajectorySet()
    for tid in range(1, n_tracks + 1):
        start = int(rng.integers(1, n_frames))
        stop = int(rng.integers(start, n_frames + 1))
        x, y = rng.uniform(0, 300, 2)
        vx, vy = rng.uniform(-4, 4, 2)
        for f in range(start, stop + 1):
            gt.add(tid, f, BoundingBox(x + vx * f, y + vy * f, 12, 30))
    return gt


@pytest.mark.parametrize("seed", range(50))
def test_identity_on_random_sets(seed):
    gt = random_gt(seed)
    rep = evaluate(gt, gt)
    assert rep.recall == 1.0 and rep.precision == 1.0 and rep.faf == 0.0
    assert rep.mt == 1.0 and rep.frag == 0 and rep.ids == 0


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000), st.permutations(range(1, 5)))
def test_hypothesis_id_permutation_invariant(seed, perm):
    gt = random_gt(seed)
    hyp = random_gt(seed + 1)
    for tid, boxes in random_gt(seed).items():
        for f, b in list(boxes.items())[::2]:
            hyp.setdefault(10 + tid, {})[f] = b.translate(1, 0)
    renamed = TrajectorySet({perm[(tid - 1) % 4] * 100 + tid: boxes for tid, boxes in hyp.items()})
    a, b = evaluate(gt, hyp), evaluate(gt, renamed)
    assert a.row() == b.row()


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000), st.data())
def test_deleting_a_box(seed, data):
    gt = random_gt(seed)
    hyp = TrajectorySet({tid + 20: dict(boxes) for tid, boxes in gt.items()})
    for tid, boxes in random_gt(seed + 7).items():
        hyp[tid + 40] = boxes
    tid = data.draw(st.sampled_from(sorted(hyp)))
    frame = data.draw(st.sampled_from(sorted(hyp[tid])))
    smaller = TrajectorySet({t: dict(b) for t, b in hyp.items()})
    del smaller[tid][frame]
    if not smaller[tid]:
        del smaller[tid]
    before, after = evaluate(gt, hyp), evaluate(gt, smaller)
    assert after.recall <= before.recall
    for g in gt:
        assert after.per_track[g]["frag"] <= before.per_track[g]["frag"] + 1


def test_row_columns():
    gt, hyp = one_track_fixture()
    row = evaluate(gt, hyp).row(percent=True)
    assert tuple(row) == TABLE_COLUMNS
    assert row["Recall"] == pytest.approx(90.0)
