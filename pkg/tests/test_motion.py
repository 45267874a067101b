import numpy as np
import pytest

from occlusia.config import KalmanConfig
from occlusia.core import BoundingBox
from occlusia.motion import MotionState, kf_init, kf_predict, kf_update

NOISELESS = KalmanConfig(sigma_process_pos=0, sigma_process_size=0, sigma_measure=0)


def test_init_center_form():
    cfg = KalmanConfig()
    s = kf_init(BoundingBox(0, 0, 10, 20), cfg)
    np.testing.assert_array_equal(s.mean, [5, 10, 10, 20, 0, 0, 0, 0])
    np.testing.assert_array_equal(np.diag(s.covariance), [cfg.init_var_pos] * 4 + [cfg.init_var_vel] * 4)
    np.testing.assert_array_equal(kf_init(BoundingBox(3, 4, 2, 2)).mean, [4, 5, 2, 2, 0, 0, 0, 0])


def test_predict_moves_by_velocity():
    s = MotionState(np.array([5.0, 10, 10, 20, 0, 0, 0, 0]), np.eye(8))
    np.testing.assert_array_equal(kf_predict(s).mean[:4], [5, 10, 10, 20])
    s = MotionState(np.array([0.0, 0, 10, 10, 2, 3, 0, 0]), np.eye(8))
    np.testing.assert_array_equal(kf_predict(s).mean[:4], [2, 3, 10, 10])


def test_predict_grows_trace():
    s = kf_init(BoundingBox(0, 0, 10, 10))
    assert np.trace(kf_predict(s).covariance) > np.trace(s.covariance)


def test_zero_measurement_noise_snaps_to_measurement():
    s = kf_predict(kf_init(BoundingBox(0, 0, 10, 10)))
    z = BoundingBox(3.3, -1.7, 12, 9)
    out = kf_update(s, z, KalmanConfig(sigma_measure=0))
    np.testing.assert_allclose(out.mean[:4], [9.3, 2.8, 12, 9], atol=1e-6)


def test_zero_innovation_keeps_mean():
    s = kf_predict(MotionState(np.array([20.0, 30, 8, 16, 1, -1, 0, 0]), np.eye(8) * 3))
    out = kf_update(s, s.box())
    np.testing.assert_allclose(out.mean, s.mean, atol=1e-9)


def test_posterior_shrinks_in_observed_subspace():
    s = kf_predict(kf_init(BoundingBox(0, 0, 10, 10)))
    out = kf_update(s, BoundingBox(1, 1, 10, 10))
    H = np.hstack([np.eye(4), np.zeros((4, 4))])
    diff = H @ s.covariance @ H.T - H @ out.covariance @ H.T
    assert np.linalg.eigvalsh(diff).min() > -1e-9


def _line(k, x0=10.0, y0=50.0, vx=3.0, vy=-1.5):
    return BoundingBox(x0 + vx * k, y0 + vy * k, 12, 30)


def test_converges_on_constant_velocity_track():
    s = kf_init(_line(0))
    for k in range(1, 11):
        s = kf_update(kf_predict(s), _line(k))
    pred = kf_predict(s).box()
    truth = _line(11)
    assert abs(pred.center[0] - truth.center[0]) < 0.5
    assert abs(pred.center[1] - truth.center[1]) < 0.5


def test_noiseless_track_is_exact_from_frame_three():
    # frame 1 initialises, frame 2 gives a partial velocity estimate, frame 3 pins it
    s = kf_init(_line(0), NOISELESS)
    for k in range(1, 30):
        pred = kf_predict(s, NOISELESS)
        if k >= 3:
            np.testing.assert_allclose(pred.box().as_tuple(), _line(k).as_tuple(), atol=1e-6)
        s = kf_update(pred, _line(k), NOISELESS)
        if k >= 2:
            np.testing.assert_allclose(s.box().as_tuple(), _line(k).as_tuple(), atol=1e-6)
            np.testing.assert_allclose(s.velocity[:2], [3.0, -1.5], atol=1e-6)


def test_covariance_stays_symmetric():
    rng = np.random.default_rng(3)
    s = kf_init(BoundingBox(50, 50, 20, 40))
    for _ in range(10_000):
        s = kf_predict(s)
        cx, cy = s.mean[:2] + rng.normal(0, 3, 2)
        s = kf_update(s, BoundingBox.from_center(cx, cy, 20 + rng.normal(), 40 + rng.normal()))
        P = s.covariance
        assert np.abs(P - P.T).max() < 1e-9
    assert np.diag(s.covariance).min() >= 0


def test_size_is_clamped():
    s = MotionState(np.array([0.0, 0, 2, 2, 0, 0, -5, -5]), np.eye(8))
    out = kf_predict(s)
    assert out.mean[2] >= 1 and out.mean[3] >= 1
    out.box()  # still a valid box
