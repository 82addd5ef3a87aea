"""Analytic object library, pose sampling, and the visual-channel render.

Objects are closed-form primitives described by their lower surface: the
height of the object above the rest membrane at each pixel (the clearance),
with +inf where the object is absent. Every object rests tangent to the
membrane (minimum clearance 0), matching a snapshot taken at the moment of
contact.

The sensor-plane frame has its origin at the grid center, x rightward,
y downward; a pose offsets the object's center by (x, y) meters and spins it
by theta about that center.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .shading import RGB

CATALOG_SCHEMA_VERSION = 1

ENGRAVING_PATTERNS = ("sine", "ridges", "checker")


@dataclass(frozen=True)
class Sphere:
    radius_m: float


@dataclass(frozen=True)
class Box:
    size_x_m: float
    size_y_m: float


@dataclass(frozen=True)
class Cylinder:
    radius_m: float
    # Spherical crown radius of the bottom face; None means a flat bottom.
    bottom_radius_m: float | None = None


@dataclass(frozen=True)
class TexturedPlate:
    """Flat plate whose visual texture lives in the albedo, not the geometry."""

    size_x_m: float
    size_y_m: float


@dataclass(frozen=True)
class EngravedPlate:
    """Flat plate with a raised bump pattern on its lower face."""

    size_x_m: float
    size_y_m: float
    pattern: str
    period_m: float
    amplitude_m: float


Shape = Sphere | Box | Cylinder | TexturedPlate | EngravedPlate


@dataclass(frozen=True)
class ConstantAlbedo:
    rgb: RGB


@dataclass(frozen=True)
class CheckerAlbedo:
    color_a: RGB
    color_b: RGB
    period_m: float


@dataclass(frozen=True)
class StripeAlbedo:
    color_a: RGB
    color_b: RGB
    period_m: float


Albedo = ConstantAlbedo | CheckerAlbedo | StripeAlbedo


@dataclass(frozen=True)
class SceneObject:
    object_id: str
    class_label: str
    shape: Shape
    albedo: Albedo
    weight_g: float

    def __post_init__(self):
        if self.weight_g < 0:
            raise ValueError(f"{self.object_id}: weight must be >= 0, got {self.weight_g}")

    @property
    def texture_amplitude_m(self) -> float:
        return self.shape.amplitude_m if isinstance(self.shape, EngravedPlate) else 0.0


@dataclass(frozen=True)
class Pose:
    x: float = 0.0
    y: float = 0.0
    theta: float = 0.0


@dataclass(frozen=True)
class PoseBounds:
    x_range: tuple[float, float] = (0.0, 0.0)
    y_range: tuple[float, float] = (0.0, 0.0)
    theta_range: tuple[float, float] = (0.0, 2.0 * math.pi)


@dataclass(frozen=True)
class SensorGrid:
    """Pixel lattice of the sensor plane; coordinates are pixel centers."""

    width: int
    height: int
    pixel_pitch: float

    def coords(self) -> tuple[np.ndarray, np.ndarray]:
        x = (np.arange(self.width, dtype=np.float64) - (self.width - 1) / 2.0) * self.pixel_pitch
        y = (np.arange(self.height, dtype=np.float64) - (self.height - 1) / 2.0) * self.pixel_pitch
        return np.meshgrid(x, y)


def _object_frame(grid: SensorGrid, pose: Pose) -> tuple[np.ndarray, np.ndarray]:
    gx, gy = grid.coords()
    dx = gx - pose.x
    dy = gy - pose.y
    cos_t, sin_t = math.cos(pose.theta), math.sin(pose.theta)
    return cos_t * dx + sin_t * dy, -sin_t * dx + cos_t * dy


def _crown_clearance(r2: np.ndarray, crown_radius: float) -> np.ndarray:
    return crown_radius - np.sqrt(np.maximum(crown_radius**2 - r2, 0.0))


def _engraving(shape: EngravedPlate, ox: np.ndarray, oy: np.ndarray) -> np.ndarray:
    a, p = shape.amplitude_m, shape.period_m
    if shape.pattern == "sine":
        return a * (1.0 + np.sin(2.0 * np.pi * ox / p)) / 2.0
    if shape.pattern == "ridges":
        r = np.sqrt(ox * ox + oy * oy)
        return a * (1.0 + np.sin(2.0 * np.pi * r / p)) / 2.0
    if shape.pattern == "checker":
        cell = np.floor(ox / p) + np.floor(oy / p)
        return a * np.mod(cell, 2.0)
    raise ValueError(f"unknown engraving pattern {shape.pattern!r}")


def lower_surface(obj: SceneObject, pose: Pose, grid: SensorGrid) -> np.ndarray:
    """Clearance grid: object height above the rest membrane, +inf where absent."""
    ox, oy = _object_frame(grid, pose)
    shape = obj.shape
    clearance = np.full((grid.height, grid.width), np.inf)

    if isinstance(shape, Sphere):
        r2 = ox * ox + oy * oy
        inside = r2 < shape.radius_m**2
        clearance[inside] = _crown_clearance(r2[inside], shape.radius_m)
    elif isinstance(shape, Cylinder):
        r2 = ox * ox + oy * oy
        inside = r2 <= shape.radius_m**2
        if shape.bottom_radius_m is None:
            clearance[inside] = 0.0
        else:
            clearance[inside] = _crown_clearance(r2[inside], shape.bottom_radius_m)
    elif isinstance(shape, (Box, TexturedPlate)):
        inside = (np.abs(ox) <= shape.size_x_m / 2.0) & (np.abs(oy) <= shape.size_y_m / 2.0)
        clearance[inside] = 0.0
    elif isinstance(shape, EngravedPlate):
        inside = (np.abs(ox) <= shape.size_x_m / 2.0) & (np.abs(oy) <= shape.size_y_m / 2.0)
        clearance[inside] = _engraving(shape, ox[inside], oy[inside])
    else:
        raise TypeError(f"unsupported shape {type(shape).__name__}")

    if not np.any(np.isfinite(clearance)):
        raise ValueError(
            f"{obj.object_id}: pose ({pose.x:.4f}, {pose.y:.4f}) leaves the footprint "
            "entirely outside the sensor"
        )
    return clearance


def albedo_at(albedo: Albedo, ox: np.ndarray, oy: np.ndarray) -> np.ndarray:
    """Evaluate the albedo pattern at object-frame coordinates, (N, 3)."""
    if isinstance(albedo, ConstantAlbedo):
        return np.broadcast_to(np.asarray(albedo.rgb, dtype=np.float64), ox.shape + (3,)).copy()
    if isinstance(albedo, CheckerAlbedo):
        cell = np.mod(np.floor(ox / albedo.period_m) + np.floor(oy / albedo.period_m), 2.0)
    elif isinstance(albedo, StripeAlbedo):
        cell = np.mod(np.floor(ox / albedo.period_m), 2.0)
    else:
        raise TypeError(f"unsupported albedo {type(albedo).__name__}")
    a = np.asarray(albedo.color_a, dtype=np.float64)
    b = np.asarray(albedo.color_b, dtype=np.float64)
    return np.where(cell[..., None] == 0.0, a, b)


def _visual_lambert(shape: Shape, r2: np.ndarray) -> np.ndarray:
    """Cosine factor of the smooth lower surface under overhead white light.

    Engravings are deliberately excluded: they are below visual resolution,
    so plates with identical albedo render identically.
    """
    if isinstance(shape, Sphere):
        return np.sqrt(np.maximum(shape.radius_m**2 - r2, 0.0)) / shape.radius_m
    if isinstance(shape, Cylinder) and shape.bottom_radius_m is not None:
        return np.sqrt(np.maximum(shape.bottom_radius_m**2 - r2, 0.0)) / shape.bottom_radius_m
    return np.ones_like(r2)


def render_visual(
    obj: SceneObject,
    pose: Pose,
    grid: SensorGrid,
    background_rgb: RGB = (0.5, 0.5, 0.5),
) -> np.ndarray:
    """Orthographic view of the object through the membrane, (H, W, 3) in [0, 1]."""
    ox, oy = _object_frame(grid, pose)
    r2 = ox * ox + oy * oy
    shape = obj.shape

    if isinstance(shape, Sphere):
        mask = r2 < shape.radius_m**2
    elif isinstance(shape, Cylinder):
        mask = r2 <= shape.radius_m**2
    else:
        mask = (np.abs(ox) <= shape.size_x_m / 2.0) & (np.abs(oy) <= shape.size_y_m / 2.0)

    image = np.empty((grid.height, grid.width, 3), dtype=np.float64)
    image[...] = np.asarray(background_rgb, dtype=np.float64)
    albedo = albedo_at(obj.albedo, ox[mask], oy[mask])
    image[mask] = albedo * _visual_lambert(shape, r2[mask])[..., None]
    return np.clip(image, 0.0, 1.0)


def sample_pose(rng: np.random.Generator, bounds: PoseBounds) -> Pose:
    """Uniform pose inside the bounds; deterministic for a given generator state."""
    x = rng.uniform(*bounds.x_range)
    y = rng.uniform(*bounds.y_range)
    theta = rng.uniform(*bounds.theta_range)
    return Pose(x=x, y=y, theta=theta)


def footprint_radius(shape: Shape) -> float:
    """Circumradius of the footprint, for keeping poses on the sensor."""
    if isinstance(shape, Sphere):
        return shape.radius_m
    if isinstance(shape, Cylinder):
        return shape.radius_m
    return math.hypot(shape.size_x_m, shape.size_y_m) / 2.0


# --- catalog (de)serialization ---------------------------------------------


def _rgb(value, where: str) -> RGB:
    if not (isinstance(value, (list, tuple)) and len(value) == 3):
        raise ValueError(f"{where}: expected an RGB triple, got {value!r}")
    rgb = tuple(float(c) for c in value)
    if min(rgb) < 0 or max(rgb) > 1:
        raise ValueError(f"{where}: RGB channels must lie in [0, 1], got {rgb}")
    return rgb


def shape_from_dict(spec: dict, where: str) -> Shape:
    kind = spec.get("kind")
    try:
        if kind == "sphere":
            return Sphere(radius_m=float(spec["radius_m"]))
        if kind == "box":
            return Box(size_x_m=float(spec["size_x_m"]), size_y_m=float(spec["size_y_m"]))
        if kind == "cylinder":
            bottom = spec.get("bottom_radius_m")
            return Cylinder(
                radius_m=float(spec["radius_m"]),
                bottom_radius_m=None if bottom is None else float(bottom),
            )
        if kind == "textured-plate":
            return TexturedPlate(size_x_m=float(spec["size_x_m"]), size_y_m=float(spec["size_y_m"]))
        if kind == "engraved-plate":
            pattern = spec["pattern"]
            if pattern not in ENGRAVING_PATTERNS:
                raise ValueError(
                    f"{where}: pattern must be one of {ENGRAVING_PATTERNS}, got {pattern!r}"
                )
            return EngravedPlate(
                size_x_m=float(spec["size_x_m"]),
                size_y_m=float(spec["size_y_m"]),
                pattern=pattern,
                period_m=float(spec["period_m"]),
                amplitude_m=float(spec["amplitude_m"]),
            )
    except KeyError as exc:
        raise ValueError(f"{where}: missing shape field {exc}") from None
    raise ValueError(f"{where}: unknown shape kind {kind!r}")


def albedo_from_value(value, where: str) -> Albedo:
    if isinstance(value, (list, tuple)):
        return ConstantAlbedo(rgb=_rgb(value, where))
    if isinstance(value, dict):
        kind = value.get("kind")
        try:
            if kind == "checker":
                return CheckerAlbedo(
                    color_a=_rgb(value["colors"][0], where),
                    color_b=_rgb(value["colors"][1], where),
                    period_m=float(value["period_m"]),
                )
            if kind == "stripes":
                return StripeAlbedo(
                    color_a=_rgb(value["colors"][0], where),
                    color_b=_rgb(value["colors"][1], where),
                    period_m=float(value["period_m"]),
                )
        except (KeyError, IndexError) as exc:
            raise ValueError(f"{where}: malformed albedo: {exc}") from None
        raise ValueError(f"{where}: unknown albedo kind {kind!r}")
    raise ValueError(f"{where}: albedo must be an RGB triple or a pattern object")


def shape_to_dict(shape: Shape) -> dict:
    if isinstance(shape, Sphere):
        return {"kind": "sphere", "radius_m": shape.radius_m}
    if isinstance(shape, Box):
        return {"kind": "box", "size_x_m": shape.size_x_m, "size_y_m": shape.size_y_m}
    if isinstance(shape, Cylinder):
        out = {"kind": "cylinder", "radius_m": shape.radius_m}
        if shape.bottom_radius_m is not None:
            out["bottom_radius_m"] = shape.bottom_radius_m
        return out
    if isinstance(shape, TexturedPlate):
        return {"kind": "textured-plate", "size_x_m": shape.size_x_m, "size_y_m": shape.size_y_m}
    return {
        "kind": "engraved-plate",
        "size_x_m": shape.size_x_m,
        "size_y_m": shape.size_y_m,
        "pattern": shape.pattern,
        "period_m": shape.period_m,
        "amplitude_m": shape.amplitude_m,
    }


def albedo_to_value(albedo: Albedo):
    if isinstance(albedo, ConstantAlbedo):
        return list(albedo.rgb)
    kind = "checker" if isinstance(albedo, CheckerAlbedo) else "stripes"
    return {
        "kind": kind,
        "colors": [list(albedo.color_a), list(albedo.color_b)],
        "period_m": albedo.period_m,
    }


def object_from_dict(spec: dict, where: str) -> SceneObject:
    for field in ("object_id", "class_label", "shape", "albedo", "weight_g"):
        if field not in spec:
            raise ValueError(f"{where}: missing field {field!r}")
    return SceneObject(
        object_id=str(spec["object_id"]),
        class_label=str(spec["class_label"]),
        shape=shape_from_dict(spec["shape"], f"{where}.shape"),
        albedo=albedo_from_value(spec["albedo"], f"{where}.albedo"),
        weight_g=float(spec["weight_g"]),
    )


def object_to_dict(obj: SceneObject) -> dict:
    return {
        "object_id": obj.object_id,
        "class_label": obj.class_label,
        "shape": shape_to_dict(obj.shape),
        "albedo": albedo_to_value(obj.albedo),
        "weight_g": obj.weight_g,
    }


def load_catalog(path: str | Path) -> list[SceneObject]:
    """Load and validate an object catalog JSON file."""
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ValueError(f"{path}: line {exc.lineno}: {exc.msg}") from None
    return parse_catalog(doc, str(path))


def parse_catalog(doc: dict, where: str) -> list[SceneObject]:
    if not isinstance(doc, dict) or doc.get("schema_version") != CATALOG_SCHEMA_VERSION:
        raise ValueError(f"{where}: expected schema_version {CATALOG_SCHEMA_VERSION}")
    entries = doc.get("objects")
    if not isinstance(entries, list) or not entries:
        raise ValueError(f"{where}: 'objects' must be a non-empty list")
    objects = [
        object_from_dict(spec, f"{where}: objects[{i}]") for i, spec in enumerate(entries)
    ]
    ids = [o.object_id for o in objects]
    if len(set(ids)) != len(ids):
        dupes = sorted({i for i in ids if ids.count(i) > 1})
        raise ValueError(f"{where}: duplicate object ids {dupes}")
    return objects


def dump_catalog(objects: list[SceneObject]) -> dict:
    return {
        "schema_version": CATALOG_SCHEMA_VERSION,
        "objects": [object_to_dict(o) for o in objects],
    }
