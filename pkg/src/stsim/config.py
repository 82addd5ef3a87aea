"""JSON config file for the sensor: every experiment is a config, not code.

All keys are optional and fall back to the defaults baked into the dataclasses;
unknown keys are rejected so typos fail loudly.
"""

from __future__ import annotations

import json
import os
from pathlib import Path

from .compliance import ComplianceParams
from .sensor import SensorConfig
from .shading import PhongParams

ENV_CONFIG_VAR = "STSIM_CONFIG"

_PHONG_KEYS = {"ka", "kd", "ks", "alpha", "ia"}
_LED_KEYS = {"elevation_deg", "colors"}
_COMPLIANCE_KEYS = {"k_pixel", "smoothing_sigma"}
_TOP_KEYS = {
    "resolution",
    "active_area_m",
    "gel_thickness_m",
    "normal_radius",
    "phong",
    "leds",
    "compliance",
    "internal_intensity",
    "external_intensity",
    "background_rgb",
    "depth_import",
}


def _check_keys(section: dict, allowed: set[str], where: str) -> None:
    unknown = set(section) - allowed
    if unknown:
        raise ValueError(f"{where}: unknown config keys {sorted(unknown)}")


def config_from_dict(doc: dict, where: str = "config") -> SensorConfig:
    _check_keys(doc, _TOP_KEYS, where)
    defaults = SensorConfig()
    kwargs = {}

    if "resolution" in doc:
        w, h = doc["resolution"]
        kwargs["resolution"] = (int(w), int(h))
    if "active_area_m" in doc:
        ax, ay = doc["active_area_m"]
        kwargs["active_area"] = (float(ax), float(ay))
    if "gel_thickness_m" in doc:
        kwargs["gel_thickness"] = float(doc["gel_thickness_m"])
    if "normal_radius" in doc:
        kwargs["normal_radius"] = int(doc["normal_radius"])

    phong_doc = doc.get("phong", {})
    _check_keys(phong_doc, _PHONG_KEYS, f"{where}.phong")
    phong_defaults = PhongParams()
    kwargs["phong"] = PhongParams(
        k_a=float(phong_doc.get("ka", phong_defaults.k_a)),
        k_d=float(phong_doc.get("kd", phong_defaults.k_d)),
        k_s=float(phong_doc.get("ks", phong_defaults.k_s)),
        alpha=float(phong_doc.get("alpha", phong_defaults.alpha)),
        i_a=tuple(float(c) for c in phong_doc.get("ia", phong_defaults.i_a)),
    )

    led_doc = doc.get("leds", {})
    _check_keys(led_doc, _LED_KEYS, f"{where}.leds")
    if "elevation_deg" in led_doc:
        kwargs["led_elevation_deg"] = float(led_doc["elevation_deg"])
    if "colors" in led_doc:
        colors = tuple(tuple(float(c) for c in rgb) for rgb in led_doc["colors"])
        if len(colors) != 4:
            raise ValueError(f"{where}.leds.colors: exactly four RGB triples required")
        kwargs["led_colors"] = colors

    comp_doc = doc.get("compliance", {})
    _check_keys(comp_doc, _COMPLIANCE_KEYS, f"{where}.compliance")
    comp_defaults = ComplianceParams()
    kwargs["compliance"] = ComplianceParams(
        k_pixel=float(comp_doc.get("k_pixel", comp_defaults.k_pixel)),
        smoothing_sigma=float(comp_doc.get("smoothing_sigma", comp_defaults.smoothing_sigma)),
    )

    if "internal_intensity" in doc:
        kwargs["internal_intensity"] = float(doc["internal_intensity"])
    if "external_intensity" in doc:
        kwargs["external_intensity"] = float(doc["external_intensity"])
    if "background_rgb" in doc:
        kwargs["background_rgb"] = tuple(float(c) for c in doc["background_rgb"])

    depth_doc = doc.get("depth_import", {})
    _check_keys(depth_doc, {"pgm_meters_per_level"}, f"{where}.depth_import")
    if "pgm_meters_per_level" in depth_doc:
        kwargs["pgm_meters_per_level"] = float(depth_doc["pgm_meters_per_level"])

    merged = {**_as_kwargs(defaults), **kwargs}
    return SensorConfig(**merged)


def _as_kwargs(config: SensorConfig) -> dict:
    return {
        "resolution": config.resolution,
        "active_area": config.active_area,
        "gel_thickness": config.gel_thickness,
        "normal_radius": config.normal_radius,
        "phong": config.phong,
        "led_elevation_deg": config.led_elevation_deg,
        "led_colors": config.led_colors,
        "compliance": config.compliance,
        "internal_intensity": config.internal_intensity,
        "external_intensity": config.external_intensity,
        "background_rgb": config.background_rgb,
        "pgm_meters_per_level": config.pgm_meters_per_level,
    }


def config_to_dict(config: SensorConfig) -> dict:
    """JSON-serializable snapshot, inverse of config_from_dict."""
    return {
        "resolution": list(config.resolution),
        "active_area_m": list(config.active_area),
        "gel_thickness_m": config.gel_thickness,
        "normal_radius": config.normal_radius,
        "phong": {
            "ka": config.phong.k_a,
            "kd": config.phong.k_d,
            "ks": config.phong.k_s,
            "alpha": config.phong.alpha,
            "ia": list(config.phong.i_a),
        },
        "leds": {
            "elevation_deg": config.led_elevation_deg,
            "colors": [list(rgb) for rgb in config.led_colors],
        },
        "compliance": {
            "k_pixel": config.compliance.k_pixel,
            "smoothing_sigma": config.compliance.smoothing_sigma,
        },
        "internal_intensity": config.internal_intensity,
        "external_intensity": config.external_intensity,
        "background_rgb": list(config.background_rgb),
        "depth_import": {"pgm_meters_per_level": config.pgm_meters_per_level},
    }


def load_config(path: str | Path) -> SensorConfig:
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ValueError(f"{path}: line {exc.lineno}: {exc.msg}") from None
    return config_from_dict(doc, where=str(path))


def resolve_config(path: str | None) -> SensorConfig:
    """Config from an explicit path, else $STSIM_CONFIG, else defaults."""
    if path is not None:
        return load_config(path)
    env_path = os.environ.get(ENV_CONFIG_VAR)
    if env_path:
        return load_config(env_path)
    return SensorConfig()
