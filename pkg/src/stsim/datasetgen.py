"""Labeled visuotactile dataset generation with a versioned manifest.

Three built-in recipes cover the standard experiment designs:

* ``household``: 10 object classes, 600 samples per class, 70/30 split.
* ``texture``: 6 engraved plates, 100 imprints each, 80/20 split.
* ``fill``: one bottle at three masses (446/823/1133 g), 120 placements
  per fill level, 80/20 split.

Custom recipes are JSON files with the same fields plus an inline object
catalog. Every output byte is a pure function of (recipe, seed, config):
per-sample generators are derived from the master seed and the sample id with
a counter-based stream, so parallel workers cannot perturb the result.
"""

from __future__ import annotations

import hashlib
import json
import math
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path, PurePosixPath

import numpy as np
from PIL import Image

from . import scene
from .compliance import GRAVITY
from .config import config_to_dict
from .geometry import read_stsd, write_stsd
from .scene import PoseBounds, Pose, SceneObject, sample_pose
from .sensor import SensorConfig, capture
from .shading import to_uint8

MANIFEST_SCHEMA_VERSION = 1
RECIPE_SCHEMA_VERSION = 1
BUILTIN_RECIPES = ("household", "texture", "fill")

_ID_RE = re.compile(r"^[a-z0-9][a-z0-9_-]*$")
_POSE_MARGIN_M = 0.002


@dataclass(frozen=True)
class Recipe:
    name: str
    objects: tuple[SceneObject, ...]
    samples_per_class: int
    train_fraction: float
    pose_bounds: PoseBounds

    def __post_init__(self):
        if self.samples_per_class < 1:
            raise ValueError("samples_per_class must be >= 1")
        if not 0.0 < self.train_fraction < 1.0:
            raise ValueError(f"train_fraction must lie in (0, 1), got {self.train_fraction}")
        labels = [o.class_label for o in self.objects]
        if len(set(labels)) != len(labels):
            raise ValueError("one object per class: duplicate class labels in recipe")
        for label in labels:
            if not _ID_RE.match(label):
                raise ValueError(f"class label {label!r} is not filename-safe")


@dataclass
class SampleRecord:
    sample_id: str
    object_id: str
    class_label: str
    x_m: float
    y_m: float
    theta_rad: float
    weight_g: float
    penetration_m: float
    total_force_n: float
    split: str
    paths: dict[str, str]

    def to_dict(self) -> dict:
        return {
            "sample_id": self.sample_id,
            "object_id": self.object_id,
            "class_label": self.class_label,
            "pose": {"x_m": self.x_m, "y_m": self.y_m, "theta_rad": self.theta_rad},
            "weight_g": self.weight_g,
            "penetration_m": self.penetration_m,
            "total_force_n": self.total_force_n,
            "split": self.split,
            "paths": dict(self.paths),
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "SampleRecord":
        return cls(
            sample_id=doc["sample_id"],
            object_id=doc["object_id"],
            class_label=doc["class_label"],
            x_m=doc["pose"]["x_m"],
            y_m=doc["pose"]["y_m"],
            theta_rad=doc["pose"]["theta_rad"],
            weight_g=doc["weight_g"],
            penetration_m=doc["penetration_m"],
            total_force_n=doc["total_force_n"],
            split=doc["split"],
            paths=dict(doc["paths"]),
        )


@dataclass
class Manifest:
    recipe_name: str
    master_seed: int
    sensor_config: dict
    samples_per_class: int
    train_fraction: float
    catalog: dict
    samples: list[SampleRecord] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "schema_version": MANIFEST_SCHEMA_VERSION,
            "recipe": self.recipe_name,
            "master_seed": self.master_seed,
            "sensor_config": self.sensor_config,
            "samples_per_class": self.samples_per_class,
            "train_fraction": self.train_fraction,
            "catalog": self.catalog,
            "samples": [s.to_dict() for s in self.samples],
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "Manifest":
        if doc.get("schema_version") != MANIFEST_SCHEMA_VERSION:
            raise ValueError(
                f"unsupported manifest schema_version {doc.get('schema_version')!r}"
            )
        return cls(
            recipe_name=doc["recipe"],
            master_seed=doc["master_seed"],
            sensor_config=doc["sensor_config"],
            samples_per_class=doc["samples_per_class"],
            train_fraction=doc["train_fraction"],
            catalog=doc["catalog"],
            samples=[SampleRecord.from_dict(s) for s in doc["samples"]],
        )


def load_manifest(path: str | Path) -> Manifest:
    return Manifest.from_dict(json.loads(Path(path).read_text()))


# --- built-in catalogs ------------------------------------------------------


def _obj(object_id, class_label, shape, albedo, weight_g) -> SceneObject:
    return SceneObject(
        object_id=object_id,
        class_label=class_label,
        shape=scene.shape_from_dict(shape, object_id),
        albedo=scene.albedo_from_value(albedo, object_id),
        weight_g=weight_g,
    )


def household_objects() -> tuple[SceneObject, ...]:
    return (
        _obj("tennis_ball", "tennis_ball", {"kind": "sphere", "radius_m": 0.033},
             [0.75, 0.89, 0.25], 58.0),
        _obj("orange", "orange", {"kind": "sphere", "radius_m": 0.040},
             [0.95, 0.55, 0.10], 190.0),
        _obj("soup_can", "soup_can", {"kind": "cylinder", "radius_m": 0.034},
             [0.82, 0.20, 0.16], 350.0),
        _obj("soda_can", "soda_can", {"kind": "cylinder", "radius_m": 0.033},
             [0.72, 0.74, 0.78], 390.0),
        _obj("butter_box", "butter_box", {"kind": "box", "size_x_m": 0.065, "size_y_m": 0.115},
             [0.93, 0.80, 0.30], 260.0),
        _obj("sugar_box", "sugar_box", {"kind": "box", "size_x_m": 0.09, "size_y_m": 0.09},
             [0.85, 0.85, 0.88], 500.0),
        _obj("coaster", "coaster", {"kind": "textured-plate", "size_x_m": 0.09, "size_y_m": 0.09},
             {"kind": "checker", "colors": [[0.55, 0.27, 0.07], [0.85, 0.70, 0.45]],
              "period_m": 0.015}, 90.0),
        _obj("tile", "tile", {"kind": "engraved-plate", "size_x_m": 0.08, "size_y_m": 0.08,
                              "pattern": "sine", "period_m": 0.012, "amplitude_m": 0.0008},
             [0.35, 0.35, 0.38], 150.0),
        _obj("whisky_bottle", "whisky_bottle",
             {"kind": "cylinder", "radius_m": 0.035, "bottom_radius_m": 0.15},
             [0.25, 0.45, 0.20], 800.0),
        _obj("hockey_puck", "hockey_puck", {"kind": "cylinder", "radius_m": 0.0425},
             [0.08, 0.08, 0.08], 170.0),
    )


def texture_objects() -> tuple[SceneObject, ...]:
    matte = [0.12, 0.12, 0.12]
    plates = [
        ("texture_sine_coarse", "sine", 0.020),
        ("texture_sine_medium", "sine", 0.010),
        ("texture_sine_fine", "sine", 0.005),
        ("texture_ridges_coarse", "ridges", 0.016),
        ("texture_ridges_fine", "ridges", 0.006),
        ("texture_checker", "checker", 0.012),
    ]
    return tuple(
        _obj(name, name,
             {"kind": "engraved-plate", "size_x_m": 0.08, "size_y_m": 0.08,
              "pattern": pattern, "period_m": period, "amplitude_m": 0.0006},
             matte, 180.0)
        for name, pattern, period in plates
    )


def fill_objects() -> tuple[SceneObject, ...]:
    bottle = {"kind": "cylinder", "radius_m": 0.035, "bottom_radius_m": 0.15}
    green = [0.30, 0.50, 0.25]
    return (
        _obj("bottle_empty", "empty", bottle, green, 446.0),
        _obj("bottle_half", "half_full", bottle, green, 823.0),
        _obj("bottle_full", "full", bottle, green, 1133.0),
    )


def auto_pose_bounds(objects: tuple[SceneObject, ...], config: SensorConfig) -> PoseBounds:
    """Largest symmetric offset range that keeps every footprint on the sensor."""
    half_x = config.active_area[0] / 2.0
    half_y = config.active_area[1] / 2.0
    radius = max(scene.footprint_radius(o.shape) for o in objects)
    # Offsets draw independently in x and y, so shrink by sqrt(2) to keep the
    # worst-case diagonal displacement inside the active area.
    extent = max(0.0, min(half_x, half_y) - radius - _POSE_MARGIN_M) / math.sqrt(2.0)
    return PoseBounds(x_range=(-extent, extent), y_range=(-extent, extent))


def builtin_recipe(name: str, config: SensorConfig) -> Recipe:
    if name == "household":
        objects = household_objects()
        return Recipe("household", objects, samples_per_class=600, train_fraction=0.7,
                      pose_bounds=auto_pose_bounds(objects, config))
    if name == "texture":
        objects = texture_objects()
        return Recipe("texture", objects, samples_per_class=100, train_fraction=0.8,
                      pose_bounds=auto_pose_bounds(objects, config))
    if name == "fill":
        objects = fill_objects()
        return Recipe("fill", objects, samples_per_class=120, train_fraction=0.8,
                      pose_bounds=auto_pose_bounds(objects, config))
    raise ValueError(f"unknown built-in recipe {name!r}")


def load_recipe(path: str | Path, config: SensorConfig) -> Recipe:
    """Parse a custom recipe JSON file."""
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ValueError(f"{path}: line {exc.lineno}: {exc.msg}") from None
    where = str(path)
    if doc.get("schema_version") != RECIPE_SCHEMA_VERSION:
        raise ValueError(f"{where}: expected schema_version {RECIPE_SCHEMA_VERSION}")
    for fld in ("name", "samples_per_class", "train_fraction", "objects"):
        if fld not in doc:
            raise ValueError(f"{where}: missing field {fld!r}")
    objects = tuple(
        scene.object_from_dict(spec, f"{where}: objects[{i}]")
        for i, spec in enumerate(doc["objects"])
    )
    pose_doc = doc.get("pose")
    if pose_doc is None:
        bounds = auto_pose_bounds(objects, config)
    else:
        full_turn = (0.0, 2.0 * math.pi)
        bounds = PoseBounds(
            x_range=tuple(pose_doc.get("x_range_m", (0.0, 0.0))),
            y_range=tuple(pose_doc.get("y_range_m", (0.0, 0.0))),
            theta_range=tuple(pose_doc.get("theta_range_rad", full_turn)),
        )
    return Recipe(
        name=str(doc["name"]),
        objects=objects,
        samples_per_class=int(doc["samples_per_class"]),
        train_fraction=float(doc["train_fraction"]),
        pose_bounds=bounds,
    )


def resolve_recipe(spec: str, config: SensorConfig) -> Recipe:
    if spec in BUILTIN_RECIPES:
        return builtin_recipe(spec, config)
    return load_recipe(spec, config)


# --- generation -------------------------------------------------------------


def _sample_hash(sample_id: str) -> int:
    return int.from_bytes(hashlib.sha256(sample_id.encode()).digest()[:8], "big")


def sample_rng(master_seed: int, sample_id: str) -> np.random.Generator:
    """Counter-based per-sample stream, independent of generation order."""
    seq = np.random.SeedSequence((master_seed, _sample_hash(sample_id)))
    return np.random.Generator(np.random.Philox(seq))


def _render_one(args) -> dict:
    obj, pose, config, out_dir, sample_id, with_stsd = args
    out = capture(obj, pose, config)
    images_dir = Path(out_dir) / "images"
    paths = {}
    for modality, image in (("tactile", out.tactile), ("visual", out.visual),
                            ("blended", out.blended)):
        rel = PurePosixPath("images") / f"{sample_id}_{modality}.png"
        Image.fromarray(to_uint8(image)).save(images_dir / f"{sample_id}_{modality}.png",
                                              format="PNG")
        paths[modality] = str(rel)
    if with_stsd:
        rel = PurePosixPath("images") / f"{sample_id}_height.stsd"
        write_stsd(images_dir / f"{sample_id}_height.stsd",
                   out.load.displacement.values, config.pixel_pitch)
        paths["height_stsd"] = str(rel)
    return {
        "sample_id": sample_id,
        "object_id": obj.object_id,
        "pose": pose,
        "penetration_m": out.load.penetration,
        "total_force_n": out.load.total_force,
        "paths": paths,
    }


def generate(
    recipe: Recipe,
    seed: int,
    out_dir: str | Path,
    config: SensorConfig | None = None,
    with_stsd: bool = False,
    workers: int = 1,
) -> Manifest:
    """Render the full dataset into ``out_dir`` and write ``manifest.json``."""
    config = config or SensorConfig()
    out_dir = Path(out_dir)
    images_dir = out_dir / "images"
    try:
        images_dir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OSError(f"cannot create output directory {out_dir}: {exc}") from None

    tasks = []
    for obj in recipe.objects:
        for idx in range(recipe.samples_per_class):
            sample_id = f"{recipe.name}-{obj.class_label}-{idx:04d}"
            rng = sample_rng(seed, sample_id)
            pose = sample_pose(rng, recipe.pose_bounds)
            tasks.append((obj, pose, config, out_dir, sample_id, with_stsd))

    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rendered = list(pool.map(_render_one, tasks, chunksize=8))
    else:
        rendered = [_render_one(t) for t in tasks]

    records = []
    by_class: dict[str, list[SampleRecord]] = {}
    for obj, item in zip((t[0] for t in tasks), rendered):
        record = SampleRecord(
            sample_id=item["sample_id"],
            object_id=item["object_id"],
            class_label=obj.class_label,
            x_m=item["pose"].x,
            y_m=item["pose"].y,
            theta_rad=item["pose"].theta,
            weight_g=obj.weight_g,
            penetration_m=item["penetration_m"],
            total_force_n=item["total_force_n"],
            split="",
            paths=item["paths"],
        )
        records.append(record)
        by_class.setdefault(obj.class_label, []).append(record)

    # Stratified split: seeded shuffle inside each class.
    for class_label, members in by_class.items():
        rng = sample_rng(seed, f"{recipe.name}-split-{class_label}")
        order = rng.permutation(len(members))
        n_train = int(round(recipe.train_fraction * len(members)))
        for rank, idx in enumerate(order):
            members[idx].split = "train" if rank < n_train else "val"

    manifest = Manifest(
        recipe_name=recipe.name,
        master_seed=seed,
        sensor_config=config_to_dict(config),
        samples_per_class=recipe.samples_per_class,
        train_fraction=recipe.train_fraction,
        catalog=scene.dump_catalog(list(recipe.objects)),
        samples=records,
    )
    manifest_path = out_dir / "manifest.json"
    manifest_path.write_text(json.dumps(manifest.to_dict(), indent=2, sort_keys=True) + "\n")
    return manifest


# --- validation -------------------------------------------------------------


@dataclass
class ValidationReport:
    issues: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.issues

    def add(self, message: str) -> None:
        self.issues.append(message)

    def __str__(self) -> str:
        if self.ok:
            return "manifest OK"
        return "\n".join(f"- {issue}" for issue in self.issues)


def validate(manifest_path: str | Path) -> ValidationReport:
    """Check every manifest and sample invariant; empty report means clean."""
    manifest_path = Path(manifest_path)
    report = ValidationReport()
    try:
        manifest = load_manifest(manifest_path)
    except (OSError, ValueError, KeyError) as exc:
        report.add(f"unreadable manifest: {exc}")
        return report

    base = manifest_path.parent
    width, height = manifest.sensor_config["resolution"]
    gel_thickness = manifest.sensor_config["gel_thickness_m"]

    seen: set[str] = set()
    per_class: dict[str, dict[str, int]] = {}
    for rec in manifest.samples:
        if rec.sample_id in seen:
            report.add(f"{rec.sample_id}: duplicate sample_id")
        seen.add(rec.sample_id)

        stats = per_class.setdefault(rec.class_label, {"train": 0, "val": 0})
        if rec.split not in ("train", "val"):
            report.add(f"{rec.sample_id}: bad split {rec.split!r}")
        else:
            stats[rec.split] += 1

        if not 0.0 <= rec.penetration_m <= gel_thickness + 1e-12:
            report.add(
                f"{rec.sample_id}: penetration_m {rec.penetration_m} outside "
                f"[0, gel_thickness={gel_thickness}]"
            )
        if rec.total_force_n < 0:
            report.add(f"{rec.sample_id}: negative total_force_n {rec.total_force_n}")

        for modality in ("tactile", "visual", "blended"):
            rel = rec.paths.get(modality)
            if rel is None:
                report.add(f"{rec.sample_id}: missing {modality} path")
                continue
            path = base / rel
            if not path.is_file():
                report.add(f"{rec.sample_id}: missing file {rel}")
                continue
            try:
                with Image.open(path) as img:
                    if img.size != (width, height):
                        report.add(
                            f"{rec.sample_id}: {rel} is {img.size[0]}x{img.size[1]}, "
                            f"expected {width}x{height}"
                        )
            except OSError as exc:
                report.add(f"{rec.sample_id}: undecodable image {rel}: {exc}")
        if "height_stsd" in rec.paths:
            path = base / rec.paths["height_stsd"]
            try:
                grid, _ = read_stsd(path)
                if grid.shape != (height, width):
                    report.add(f"{rec.sample_id}: sidecar {rec.paths['height_stsd']} "
                               f"has shape {grid.shape}, expected {(height, width)}")
            except (OSError, ValueError) as exc:
                report.add(f"{rec.sample_id}: bad sidecar: {exc}")

    for class_label, stats in sorted(per_class.items()):
        total = stats["train"] + stats["val"]
        if total != manifest.samples_per_class:
            report.add(
                f"class {class_label}: {total} samples, expected {manifest.samples_per_class}"
            )
        expected_train = round(manifest.train_fraction * total)
        if abs(stats["train"] - expected_train) > 1:
            report.add(
                f"class {class_label}: train count {stats['train']} drifts from "
                f"fraction {manifest.train_fraction} of {total}"
            )
    return report
