"""Visuotactile sensor simulator.

Analytic object scenes are pressed into a simulated elastomer by a per-pixel
spring model; the deformed surface is rendered under a four-LED Phong model
(tactile channel), the object is imaged through the semitransparent membrane
(visual channel), and the two mix according to the internal/external lighting
ratio (blended channel). A dataset CLI turns recipes into labeled image sets
with a reproducible manifest.
"""

from .compliance import ComplianceParams, LoadResult, smooth, solve_penetration
from .geometry import (
    GradientField,
    HeightField,
    clip_depth,
    gradients,
    normals_covariance,
    read_pgm16,
    read_stsd,
    write_stsd,
)
from .scene import Pose, PoseBounds, SceneObject, SensorGrid, lower_surface, render_visual, sample_pose
from .sensor import SensorConfig, SensorOutput, blend, capture
from .shading import LightSource, PhongParams, led_ring, reflect, shade

__all__ = [
    "ComplianceParams",
    "GradientField",
    "HeightField",
    "LightSource",
    "LoadResult",
    "PhongParams",
    "Pose",
    "PoseBounds",
    "SceneObject",
    "SensorConfig",
    "SensorGrid",
    "SensorOutput",
    "blend",
    "capture",
    "clip_depth",
    "gradients",
    "led_ring",
    "lower_surface",
    "normals_covariance",
    "read_pgm16",
    "read_stsd",
    "reflect",
    "render_visual",
    "sample_pose",
    "shade",
    "smooth",
    "solve_penetration",
    "write_stsd",
]

__version__ = "0.1.0"
