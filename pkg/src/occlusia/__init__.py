"""Multi-pedestrian tracking with overlap-aware label verification."""
from .appearance import (
    DescriptorMatcher,
    DescriptorSet,
    Histogram,
    bhattacharyya,
    descriptor_match,
    extract_descriptors,
    extract_histogram,
    mean_shift_localize,
)
from .association import (
    AffinityMatrix,
    AffinityWeights,
    Assignment,
    build_affinity,
    solve_bip,
    solve_hungarian,
)
from .config import Config, load_config, parse_config
from .core import Agent, BoundingBox, Detection, iou
from .errors import OcclusiaError
from .metrics import MetricsReport, TrajectorySet, evaluate
from .motion import MotionState, kf_init, kf_predict, kf_update
from .occlusion import GroupPairSet, LabelingProposal, update_groups, verify_labels
from .pipeline import FrameResult, Tracker, TrackerState, run_sequence, step

__version__ = "0.1.0"
