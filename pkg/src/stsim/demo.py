"""Canonical demo scene: a centered sphere press under the default config.

Used by the debug scripts and pinned by the golden-image regression test, so
the inputs here must stay stable.
"""

from __future__ import annotations

from .scene import ConstantAlbedo, Pose, SceneObject, Sphere
from .sensor import SensorConfig, SensorOutput, capture


def golden_sphere() -> SceneObject:
    return SceneObject(
        object_id="demo_ball",
        class_label="demo_ball",
        shape=Sphere(radius_m=0.033),
        albedo=ConstantAlbedo((0.75, 0.2, 0.15)),
        weight_g=400.0,
    )


def golden_capture() -> SensorOutput:
    return capture(golden_sphere(), Pose(0.0, 0.0, 0.0), SensorConfig())
