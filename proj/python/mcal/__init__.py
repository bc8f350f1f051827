"""Manhattan-world focal length and rotation estimation."""

from ._core import (
    ReliabilityModel,
    calibrate,
    deviations,
    euler_to_rotation,
    focal_to_fov,
    fold_pan,
    fov_to_focal,
    rotation_to_euler,
    synth_scene,
)

__all__ = [
    "ReliabilityModel",
    "calibrate",
    "deviations",
    "euler_to_rotation",
    "focal_to_fov",
    "fold_pan",
    "fov_to_focal",
    "rotation_to_euler",
    "synth_scene",
]
