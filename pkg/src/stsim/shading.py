"""Phong reflectance of the deformed membrane under a four-LED ring.

Image intensity per pixel and RGB channel:

    I = ka*ia + sum_m [ kd*max(L_m.N, 0)*id_m + ks*max(R_m.V, 0)^alpha*is_m ]

with R_m = 2(L_m.N)N - L_m and the result clamped to [0, 1]. Negative dot
products clamp to zero before use. The camera looks along +z at the membrane
(view vector defaults to (0, 0, 1)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

RGB = tuple[float, float, float]

# Four-LED ring, one LED per sensor side, listed clockwise starting at -x.
LED_SIDES = ("-x", "+y", "+x", "-y")
DEFAULT_LED_COLORS: tuple[RGB, ...] = (
    (0.0, 0.0, 1.0),  # blue
    (1.0, 0.0, 0.0),  # red
    (1.0, 1.0, 1.0),  # white
    (0.0, 1.0, 0.0),  # green
)
# Low enough that the flat membrane stays unsaturated under all four LEDs
# (ambient + own-color + white diffuse must sum below 1), high enough to keep
# gentle imprint slopes visible.
DEFAULT_LED_ELEVATION_DEG = 15.0


@dataclass(frozen=True)
class PhongParams:
    """Ambient/diffuse/specular coefficients and shininess exponent."""

    k_a: float = 0.8
    k_d: float = 1.0
    k_s: float = 0.5
    alpha: float = 5.0
    i_a: RGB = (1.0, 1.0, 1.0)

    def __post_init__(self):
        if min(self.k_a, self.k_d, self.k_s) < 0:
            raise ValueError("Phong coefficients must be >= 0")
        if self.alpha < 1:
            raise ValueError(f"shininess alpha must be >= 1, got {self.alpha}")
        if min(self.i_a) < 0:
            raise ValueError("ambient intensity must be >= 0 per channel")


@dataclass(frozen=True)
class LightSource:
    """Directional colored light; direction is the unit surface-to-light vector."""

    direction: tuple[float, float, float]
    i_d: RGB
    i_s: RGB

    def __post_init__(self):
        d = np.asarray(self.direction, dtype=np.float64)
        if abs(np.linalg.norm(d) - 1.0) > 1e-6:
            raise ValueError(f"light direction must be unit length, got {self.direction}")
        for name, rgb in (("i_d", self.i_d), ("i_s", self.i_s)):
            if min(rgb) < 0 or max(rgb) > 1:
                raise ValueError(f"{name} channels must lie in [0, 1], got {rgb}")


def reflect(l: np.ndarray, n: np.ndarray) -> np.ndarray:
    """Mirror the surface-to-light vector l about the unit normal n."""
    l = np.asarray(l, dtype=np.float64)
    n = np.asarray(n, dtype=np.float64)
    return 2.0 * np.sum(l * n, axis=-1, keepdims=True) * n - l


def shade(
    normals: np.ndarray,
    lights: list[LightSource],
    params: PhongParams,
    view: tuple[float, float, float] = (0.0, 0.0, 1.0),
) -> np.ndarray:
    """Render an (H, W, 3) image in [0, 1] from per-pixel unit normals."""
    if not lights:
        raise ValueError("at least one light source is required")
    view_v = np.asarray(view, dtype=np.float64)
    if abs(np.linalg.norm(view_v) - 1.0) > 1e-6:
        raise ValueError(f"view vector must be unit length, got {view}")
    normals = np.asarray(normals, dtype=np.float64)

    image = np.empty(normals.shape[:-1] + (3,), dtype=np.float64)
    image[...] = params.k_a * np.asarray(params.i_a, dtype=np.float64)
    for light in lights:
        l = np.asarray(light.direction, dtype=np.float64)
        l_dot_n = np.sum(normals * l, axis=-1, keepdims=True)
        diffuse = np.maximum(l_dot_n, 0.0)
        r = 2.0 * l_dot_n * normals - l
        r_dot_v = np.maximum(np.sum(r * view_v, axis=-1, keepdims=True), 0.0)
        specular = r_dot_v**params.alpha
        image += params.k_d * diffuse * np.asarray(light.i_d, dtype=np.float64)
        image += params.k_s * specular * np.asarray(light.i_s, dtype=np.float64)
    return np.clip(image, 0.0, 1.0)


def led_ring(
    elevation_deg: float = DEFAULT_LED_ELEVATION_DEG,
    colors: tuple[RGB, ...] = DEFAULT_LED_COLORS,
) -> list[LightSource]:
    """Build the four side LEDs at the given elevation above the membrane plane.

    One LED per sensor side in the order -x, +y, +x, -y (defaults blue, red,
    white, green); each direction's azimuth points from its side toward the
    sensor center. Elevation 90 degenerates to four overhead lights.
    """
    if not 0.0 < elevation_deg <= 90.0:
        raise ValueError(f"elevation must lie in (0, 90] degrees, got {elevation_deg}")
    if len(colors) != 4:
        raise ValueError(f"exactly four LED colors required, got {len(colors)}")
    elev = math.radians(elevation_deg)
    cos_e, sin_e = math.cos(elev), math.sin(elev)
    azimuths = {
        "-x": (1.0, 0.0),
        "+y": (0.0, -1.0),
        "+x": (-1.0, 0.0),
        "-y": (0.0, 1.0),
    }
    lights = []
    for side, color in zip(LED_SIDES, colors):
        ax, ay = azimuths[side]
        direction = (ax * cos_e, ay * cos_e, sin_e)
        lights.append(LightSource(direction=direction, i_d=tuple(color), i_s=tuple(color)))
    return lights


def to_uint8(image: np.ndarray) -> np.ndarray:
    """Quantize a [0, 1] float image to 8-bit channels: round(channel*255)."""
    return np.round(np.asarray(image, dtype=np.float64) * 255.0).astype(np.uint8)
