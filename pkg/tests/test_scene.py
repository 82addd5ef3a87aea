import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stsim.scene import (
    Box,
    CheckerAlbedo,
    ConstantAlbedo,
    Cylinder,
    EngravedPlate,
    Pose,
    PoseBounds,
    SceneObject,
    SensorGrid,
    Sphere,
    dump_catalog,
    load_catalog,
    lower_surface,
    render_visual,
    sample_pose,
)

GRID = SensorGrid(width=64, height=64, pixel_pitch=1.5e-3)


def make_obj(shape, albedo=(0.8, 0.1, 0.1), weight=200.0, oid="obj"):
    return SceneObject(object_id=oid, class_label=oid, shape=shape,
                       albedo=ConstantAlbedo(tuple(albedo)), weight_g=weight)


class TestLowerSurface:
    def test_sphere_clearance_formula(self):
        radius = 0.02
        obj = make_obj(Sphere(radius_m=radius))
        clearance = lower_surface(obj, Pose(), GRID)
        gx, gy = GRID.coords()
        r2 = gx * gx + gy * gy
        inside = r2 < radius**2
        expected = radius - np.sqrt(radius**2 - r2[inside])
        np.testing.assert_allclose(clearance[inside], expected, atol=1e-12)
        assert np.isinf(clearance[~inside]).all()

    def test_flat_plate_zero_clearance(self):
        obj = make_obj(Box(size_x_m=0.03, size_y_m=0.02))
        clearance = lower_surface(obj, Pose(), GRID)
        footprint = np.isfinite(clearance)
        assert footprint.any()
        assert (clearance[footprint] == 0.0).all()

    def test_engraved_sinusoid_formula(self):
        amplitude, period = 8e-4, 0.01
        obj = make_obj(
            EngravedPlate(size_x_m=0.05, size_y_m=0.05, pattern="sine",
                          period_m=period, amplitude_m=amplitude)
        )
        clearance = lower_surface(obj, Pose(), GRID)
        gx, gy = GRID.coords()
        footprint = np.isfinite(clearance)
        expected = amplitude * (1.0 + np.sin(2.0 * np.pi * gx[footprint] / period)) / 2.0
        np.testing.assert_allclose(clearance[footprint], expected, atol=1e-12)

    def test_rejects_pose_fully_outside(self):
        obj = make_obj(Sphere(radius_m=0.01))
        with pytest.raises(ValueError, match="outside"):
            lower_surface(obj, Pose(x=1.0, y=1.0), GRID)

    def test_translation_equivariance(self):
        obj = make_obj(Sphere(radius_m=0.015))
        shift_px = 5
        shift_m = shift_px * GRID.pixel_pitch
        base = lower_surface(obj, Pose(x=0.0), GRID)
        moved = lower_surface(obj, Pose(x=shift_m), GRID)
        rolled = np.roll(base, shift_px, axis=1)
        both = np.isfinite(rolled) & np.isfinite(moved)
        np.testing.assert_array_equal(np.isfinite(rolled), np.isfinite(moved))
        np.testing.assert_allclose(moved[both], rolled[both], atol=1e-9)

    def test_rotation_moves_engraving_not_footprint(self):
        obj = make_obj(
            EngravedPlate(size_x_m=0.05, size_y_m=0.05, pattern="sine",
                          period_m=0.01, amplitude_m=5e-4)
        )
        c0 = lower_surface(obj, Pose(theta=0.0), GRID)
        c90 = lower_surface(obj, Pose(theta=math.pi / 2.0), GRID)
        assert not np.allclose(np.nan_to_num(c0, posinf=0), np.nan_to_num(c90, posinf=0))


class TestRenderVisual:
    def test_plate_covering_sensor_uniform_albedo(self):
        obj = make_obj(Box(size_x_m=0.3, size_y_m=0.3), albedo=(0.8, 0.1, 0.1))
        image = render_visual(obj, Pose(), GRID)
        np.testing.assert_array_equal(image, np.broadcast_to([0.8, 0.1, 0.1], (64, 64, 3)))

    def test_no_object_visible_uniform_background(self):
        obj = make_obj(Sphere(radius_m=0.005))
        image = render_visual(obj, Pose(x=10.0), GRID, background_rgb=(0.5, 0.5, 0.5))
        np.testing.assert_array_equal(image, np.broadcast_to([0.5, 0.5, 0.5], (64, 64, 3)))

    def test_albedo_changes_hue_not_mask(self):
        shape = Sphere(radius_m=0.02)
        red = render_visual(make_obj(shape, (0.9, 0.1, 0.1)), Pose(), GRID)
        blue = render_visual(make_obj(shape, (0.1, 0.1, 0.9)), Pose(), GRID)
        background = np.array([0.5, 0.5, 0.5])
        red_mask = ~np.all(red == background, axis=-1)
        blue_mask = ~np.all(blue == background, axis=-1)
        np.testing.assert_array_equal(red_mask, blue_mask)
        assert red_mask.any()
        assert not np.array_equal(red[red_mask], blue[blue_mask])

    def test_engraving_invisible_to_visual(self):
        base = dict(size_x_m=0.05, size_y_m=0.05, period_m=0.01, amplitude_m=6e-4)
        sine = make_obj(EngravedPlate(pattern="sine", **base), albedo=(0.2, 0.2, 0.2))
        checker = make_obj(EngravedPlate(pattern="checker", **base), albedo=(0.2, 0.2, 0.2))
        img_a = render_visual(sine, Pose(theta=0.3), GRID)
        img_b = render_visual(checker, Pose(theta=0.3), GRID)
        np.testing.assert_array_equal(img_a, img_b)

    def test_sphere_rim_darker_than_center(self):
        obj = make_obj(Sphere(radius_m=0.03), albedo=(1.0, 1.0, 1.0))
        image = render_visual(obj, Pose(), GRID)
        center = image[32, 32, 0]
        rim = image[32, 32 + int(0.029 / GRID.pixel_pitch), 0]
        assert rim < center

    def test_checker_albedo_pattern(self):
        obj = SceneObject(
            object_id="mat", class_label="mat",
            shape=Box(size_x_m=0.06, size_y_m=0.06),
            albedo=CheckerAlbedo((1.0, 0.0, 0.0), (0.0, 0.0, 1.0), period_m=0.015),
            weight_g=100.0,
        )
        image = render_visual(obj, Pose(), GRID)
        reds = np.all(image == [1.0, 0.0, 0.0], axis=-1).sum()
        blues = np.all(image == [0.0, 0.0, 1.0], axis=-1).sum()
        assert reds > 0 and blues > 0


class TestSamplePose:
    def test_degenerate_bounds(self):
        bounds = PoseBounds(x_range=(0.01, 0.01), y_range=(-0.02, -0.02),
                            theta_range=(1.5, 1.5))
        pose = sample_pose(np.random.default_rng(0), bounds)
        assert pose == Pose(x=0.01, y=-0.02, theta=1.5)

    def test_deterministic_for_fixed_seed(self):
        bounds = PoseBounds(x_range=(-0.02, 0.02), y_range=(-0.02, 0.02))
        a = [sample_pose(np.random.default_rng(42), bounds) for _ in range(5)]
        b = [sample_pose(np.random.default_rng(42), bounds) for _ in range(5)]
        assert a == b

    def test_uniform_mean_within_3_sigma(self):
        bounds = PoseBounds(x_range=(-0.03, 0.01), y_range=(0.0, 0.02))
        rng = np.random.default_rng(123)
        n = 10_000
        xs = np.array([sample_pose(rng, bounds).x for _ in range(n)])
        width = bounds.x_range[1] - bounds.x_range[0]
        sigma = width / math.sqrt(12.0) / math.sqrt(n)
        assert abs(xs.mean() - (-0.01)) < 3.0 * sigma


CATALOG_DOC = {
    "schema_version": 1,
    "objects": [
        {
            "object_id": "ball",
            "class_label": "ball",
            "shape": {"kind": "sphere", "radius_m": 0.02},
            "albedo": [0.1, 0.2, 0.3],
            "weight_g": 150.0,
        },
        {
            "object_id": "plate",
            "class_label": "plate",
            "shape": {"kind": "engraved-plate", "size_x_m": 0.05, "size_y_m": 0.05,
                      "pattern": "ridges", "period_m": 0.008, "amplitude_m": 5e-4},
            "albedo": {"kind": "checker", "colors": [[1, 0, 0], [0, 1, 0]],
                       "period_m": 0.01},
            "weight_g": 90.0,
        },
    ],
}


class TestCatalog:
    def test_load_roundtrip(self, tmp_path):
        path = tmp_path / "catalog.json"
        path.write_text(json.dumps(CATALOG_DOC))
        objects = load_catalog(path)
        assert [o.object_id for o in objects] == ["ball", "plate"]
        assert objects[0].shape == Sphere(radius_m=0.02)
        assert dump_catalog(objects)["objects"][1]["shape"]["pattern"] == "ridges"

    def test_rejects_unknown_shape(self, tmp_path):
        doc = json.loads(json.dumps(CATALOG_DOC))
        doc["objects"][0]["shape"]["kind"] = "torus"
        path = tmp_path / "catalog.json"
        path.write_text(json.dumps(doc))
        with pytest.raises(ValueError, match=r"objects\[0\].*torus"):
            load_catalog(path)

    def test_rejects_duplicate_ids(self, tmp_path):
        doc = json.loads(json.dumps(CATALOG_DOC))
        doc["objects"][1]["object_id"] = "ball"
        path = tmp_path / "catalog.json"
        path.write_text(json.dumps(doc))
        with pytest.raises(ValueError, match="duplicate"):
            load_catalog(path)

    def test_rejects_bad_schema_version(self, tmp_path):
        path = tmp_path / "catalog.json"
        path.write_text(json.dumps({"schema_version": 99, "objects": []}))
        with pytest.raises(ValueError, match="schema_version"):
            load_catalog(path)

    def test_json_syntax_error_reports_line(self, tmp_path):
        path = tmp_path / "catalog.json"
        path.write_text('{\n  "schema_version": 1,\n  "objects": [}\n')
        with pytest.raises(ValueError, match="line 3"):
            load_catalog(path)

    def test_rejects_negative_weight(self):
        with pytest.raises(ValueError, match="weight"):
            make_obj(Sphere(radius_m=0.01), weight=-5.0)
