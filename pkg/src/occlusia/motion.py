"""Constant-velocity Kalman filter over box center and size.

State layout is ``(cx, cy, w, h, vcx, vcy, vw, vh)``; the measurement is the
first four components.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import KalmanConfig
from .core import BoundingBox

MIN_SIZE = 1.0

_F = np.eye(8)
_F[:4, 4:] = np.eye(4)
_H = np.zeros((4, 8))
_H[:, :4] = np.eye(4)


@dataclass(frozen=True)
class MotionState:
    mean: np.ndarray
    covariance: np.ndarray

    def box(self) -> BoundingBox:
        cx, cy, w, h = self.mean[:4]
        return BoundingBox.from_center(cx, cy, max(w, MIN_SIZE), max(h, MIN_SIZE))

    @property
    def velocity(self) -> np.ndarray:
        return self.mean[4:6]


def _box_to_measurement(box: BoundingBox) -> np.ndarray:
    cx, cy = box.center
    return np.array([cx, cy, box.w, box.h], dtype=float)


def process_noise(cfg: KalmanConfig) -> np.ndarray:
    sp, ss = cfg.sigma_process_pos ** 2, cfg.sigma_process_size ** 2
    return np.diag([sp, sp, ss, ss, sp, sp, ss, ss])


def measurement_noise(cfg: KalmanConfig) -> np.ndarray:
    return np.eye(4) * cfg.sigma_measure ** 2


def kf_init(box: BoundingBox, cfg: KalmanConfig | None = None) -> MotionState:
    cfg = cfg or KalmanConfig()
    mean = np.zeros(8)
    mean[:4] = _box_to_measurement(box)
    cov = np.diag([cfg.init_var_pos] * 4 + [cfg.init_var_vel] * 4).astype(float)
    return MotionState(mean, cov)


def _clamp_size(mean: np.ndarray) -> np.ndarray:
    mean[2] = max(mean[2], MIN_SIZE)
    mean[3] = max(mean[3], MIN_SIZE)
    return mean


def _symmetrize(p: np.ndarray) -> np.ndarray:
    return 0.5 * (p + p.T)


def kf_predict(s: MotionState, cfg: KalmanConfig | None = None) -> MotionState:
    cfg = cfg or KalmanConfig()
    mean = _clamp_size(_F @ s.mean)
    cov = _symmetrize(_F @ s.covariance @ _F.T + process_noise(cfg))
    return MotionState(mean, cov)


def kf_update(s: MotionState, z: BoundingBox, cfg: KalmanConfig | None = None) -> MotionState:
    cfg = cfg or KalmanConfig()
    P = s.covariance
    R = measurement_noise(cfg)
    innovation = _box_to_measurement(z) - _H @ s.mean
    S = _symmetrize(_H @ P @ _H.T + R)
    # pinv keeps the zero-noise limit usable when S collapses to zero
    K = P @ _H.T @ np.linalg.pinv(S, hermitian=True)
    mean = _clamp_size(s.mean + K @ innovation)
    I_KH = np.eye(8) - K @ _H
    cov = I_KH @ P @ I_KH.T + K @ R @ K.T
    return MotionState(mean, _symmetrize(cov))
