"""End-to-end sensor pipeline: contact solve, tactile shading, visual render, blend.

A capture is a pure function of (object, pose, config): the contact clearance
feeds the spring equilibrium, the (optionally smoothed) displacement field is
turned into covariance normals and Phong-shaded under the LED ring, the visual
channel is rendered through the membrane, and the two are mixed according to
the internal/external illumination ratio, mimicking the half-silvered skin
that acts as mirror or window depending on which side is brighter.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import compliance as cp
from . import geometry, scene, shading

DEFAULT_RESOLUTION = (224, 224)
DEFAULT_ACTIVE_AREA = (0.15, 0.15)
DEFAULT_GEL_THICKNESS = 0.005


@dataclass(frozen=True)
class SensorConfig:
    resolution: tuple[int, int] = DEFAULT_RESOLUTION  # (width, height) pixels
    active_area: tuple[float, float] = DEFAULT_ACTIVE_AREA  # (x, y) meters
    gel_thickness: float = DEFAULT_GEL_THICKNESS
    normal_radius: int = 1
    # Stock coefficients with a dimmed ambient term; full ambient would push
    # the four-LED sum past the clamp on flat regions.
    phong: shading.PhongParams = field(
        default_factory=lambda: shading.PhongParams(i_a=(0.3, 0.3, 0.3))
    )
    led_elevation_deg: float = shading.DEFAULT_LED_ELEVATION_DEG
    led_colors: tuple[shading.RGB, ...] = shading.DEFAULT_LED_COLORS
    compliance: cp.ComplianceParams = field(default_factory=cp.ComplianceParams)
    internal_intensity: float = 1.0
    external_intensity: float = 1.0
    background_rgb: shading.RGB = (0.5, 0.5, 0.5)
    pgm_meters_per_level: float = 1e-7

    def __post_init__(self):
        w, h = self.resolution
        if w < 3 or h < 3:
            raise ValueError(f"resolution must be at least 3x3, got {w}x{h}")
        ax, ay = self.active_area
        if ax <= 0 or ay <= 0:
            raise ValueError(f"active_area must be positive, got {self.active_area}")
        if abs(ax / w - ay / h) > 1e-9 * (ax / w):
            raise ValueError(
                f"pixels must be square: active_area {self.active_area} is "
                f"inconsistent with resolution {self.resolution}"
            )
        if self.gel_thickness <= 0:
            raise ValueError(f"gel_thickness must be positive, got {self.gel_thickness}")
        if self.internal_intensity < 0 or self.external_intensity < 0:
            raise ValueError("illumination intensities must be >= 0")
        if self.internal_intensity == 0 and self.external_intensity == 0:
            raise ValueError("internal and external intensities cannot both be zero")

    @property
    def pixel_pitch(self) -> float:
        return self.active_area[0] / self.resolution[0]

    def grid(self) -> scene.SensorGrid:
        return scene.SensorGrid(self.resolution[0], self.resolution[1], self.pixel_pitch)

    def lights(self) -> list[shading.LightSource]:
        return shading.led_ring(self.led_elevation_deg, self.led_colors)


@dataclass(frozen=True)
class SensorOutput:
    tactile: np.ndarray  # (H, W, 3) in [0, 1]
    visual: np.ndarray
    blended: np.ndarray
    load: cp.LoadResult


def blend(
    tactile: np.ndarray, visual: np.ndarray, internal: float, external: float
) -> np.ndarray:
    """Convex pixelwise mix of the modalities by illumination ratio.

    alpha = internal / (internal + external); all-internal light returns the
    tactile image exactly, all-external the visual image exactly.
    """
    if internal < 0 or external < 0:
        raise ValueError("intensities must be >= 0")
    if internal == 0 and external == 0:
        raise ValueError("internal and external intensities cannot both be zero")
    alpha = internal / (internal + external)
    if alpha == 1.0:
        return tactile.copy()
    if alpha == 0.0:
        return visual.copy()
    return alpha * tactile + (1.0 - alpha) * visual


@lru_cache(maxsize=8)
def flat_tactile(config: SensorConfig) -> np.ndarray:
    """Tactile image of the undeformed membrane (cached per config)."""
    w, h = config.resolution
    hf = geometry.HeightField.from_values(np.zeros((h, w)), config.pixel_pitch)
    normals = geometry.normals_covariance(hf, radius=config.normal_radius)
    image = shading.shade(normals, config.lights(), config.phong)
    image.setflags(write=False)
    return image


def tactile_from_displacement(displacement: geometry.HeightField, config: SensorConfig) -> np.ndarray:
    """Shade a displacement field: smooth -> covariance normals -> Phong."""
    smoothed = cp.smooth(displacement, config.compliance.smoothing_sigma)
    normals = geometry.normals_covariance(smoothed, radius=config.normal_radius)
    return shading.shade(normals, config.lights(), config.phong)


def capture(obj: scene.SceneObject, pose: scene.Pose, config: SensorConfig) -> SensorOutput:
    """Simulate one press: returns tactile, visual, and blended images plus the load."""
    if obj.texture_amplitude_m >= config.gel_thickness:
        raise ValueError(
            f"{obj.object_id}: texture amplitude {obj.texture_amplitude_m} must stay "
            f"below the gel thickness {config.gel_thickness}"
        )
    grid = config.grid()
    clearance = scene.lower_surface(obj, pose, grid)
    weight_n = obj.weight_g * cp.GRAVITY / 1000.0
    load = cp.solve_penetration(
        clearance, weight_n, config.compliance, config.gel_thickness, config.pixel_pitch
    )
    if load.contact_mask.any():
        tactile = tactile_from_displacement(load.displacement, config)
    else:
        tactile = flat_tactile(config)
    visual = scene.render_visual(obj, pose, grid, config.background_rgb)
    blended = blend(tactile, visual, config.internal_intensity, config.external_intensity)
    return SensorOutput(tactile=tactile, visual=visual, blended=blended, load=load)
