import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stsim.shading import (
    DEFAULT_LED_COLORS,
    LightSource,
    PhongParams,
    led_ring,
    reflect,
    shade,
    to_uint8,
)

SQ2 = math.sqrt(2.0) / 2.0


def scalar_phong(normal, lights, params, view=(0.0, 0.0, 1.0)):
    """Independent single-pixel evaluation, plain Python floats."""
    out = []
    for c in range(3):
        value = params.k_a * params.i_a[c]
        for light in lights:
            l, n = light.direction, normal
            ldn = sum(l[i] * n[i] for i in range(3))
            r = tuple(2.0 * ldn * n[i] - l[i] for i in range(3))
            rdv = sum(r[i] * view[i] for i in range(3))
            value += params.k_d * max(ldn, 0.0) * light.i_d[c]
            value += params.k_s * max(rdv, 0.0) ** params.alpha * light.i_s[c]
        out.append(min(max(value, 0.0), 1.0))
    return np.asarray(out)


def unit(v):
    v = np.asarray(v, dtype=np.float64)
    return v / np.linalg.norm(v)


def field_of(normal, shape=(4, 4)):
    return np.broadcast_to(np.asarray(normal, dtype=np.float64), shape + (3,)).copy()


WHITE = LightSource(direction=(0.0, 0.0, 1.0), i_d=(1, 1, 1), i_s=(1, 1, 1))


class TestReflect:
    def test_aligned(self):
        np.testing.assert_allclose(reflect((0, 0, 1), (0, 0, 1)), (0, 0, 1), atol=1e-6)

    def test_grazing(self):
        np.testing.assert_allclose(reflect((1, 0, 0), (0, 0, 1)), (-1, 0, 0), atol=1e-6)

    def test_45_degree_normal(self):
        # 2(l.n)n - l with l=(0,0,1), n=(sq2,0,sq2): 2*sq2*n - l = (1,0,0)
        np.testing.assert_allclose(reflect((0, 0, 1), (SQ2, 0, SQ2)), (1, 0, 0), atol=1e-6)

    @settings(max_examples=100)
    @given(st.lists(st.floats(-1, 1), min_size=3, max_size=3),
           st.lists(st.floats(-1, 1), min_size=3, max_size=3))
    def test_unit_preserving(self, l, n):
        ln, nn = np.linalg.norm(l), np.linalg.norm(n)
        if ln < 1e-3 or nn < 1e-3:
            return
        r = reflect(unit(l), unit(n))
        assert abs(np.linalg.norm(r) - 1.0) < 1e-6


class TestShade:
    def test_aligned_white_light_clamps(self):
        # 0.8 + 1.0 + 0.5 = 2.3 raw, clamped to 1 per channel
        image = shade(field_of((0, 0, 1)), [WHITE], PhongParams())
        np.testing.assert_array_equal(image, np.ones((4, 4, 3)))

    def test_grazing_light_leaves_ambient(self):
        grazing = LightSource(direction=(1.0, 0.0, 0.0), i_d=(1, 1, 1), i_s=(1, 1, 1))
        image = shade(field_of((0, 0, 1)), [grazing], PhongParams())
        np.testing.assert_allclose(image, 0.8, atol=1e-12)

    def test_red_light_45deg_matches_scalar_oracle(self):
        red = LightSource(direction=(-SQ2, 0.0, SQ2), i_d=(1, 0, 0), i_s=(1, 0, 0))
        params = PhongParams()
        image = shade(field_of((0, 0, 1)), [red], params)
        expected = scalar_phong((0.0, 0.0, 1.0), [red], params)
        # red clamps at 1 (raw 0.8 + 0.7071 + 0.0884), green/blue stay ambient
        np.testing.assert_allclose(expected, [1.0, 0.8, 0.8], atol=1e-6)
        np.testing.assert_allclose(image[2, 2], expected, atol=1e-6)

    def test_unclamped_value_matches_scalar_oracle(self):
        red = LightSource(direction=(-SQ2, 0.0, SQ2), i_d=(1, 0, 0), i_s=(1, 0, 0))
        params = PhongParams(k_a=0.2)
        image = shade(field_of((0, 0, 1)), [red], params)
        # 0.2 + sq2 + 0.5*sq2^5 evaluated by hand
        np.testing.assert_allclose(image[0, 0, 0], 0.9954951288348661, atol=1e-6)
        np.testing.assert_allclose(
            image[0, 0], scalar_phong((0, 0, 1), [red], params), atol=1e-12
        )

    def test_rejects_empty_lights(self):
        with pytest.raises(ValueError, match="light"):
            shade(field_of((0, 0, 1)), [], PhongParams())

    def test_flat_field_is_uniform(self):
        image = shade(field_of((0, 0, 1), (6, 5)), led_ring(), PhongParams())
        assert (image == image[0, 0]).all()

    def test_zero_coefficients_black_image(self):
        params = PhongParams(k_a=0, k_d=0, k_s=0)
        image = shade(field_of((0, 0, 1)), led_ring(), params)
        np.testing.assert_array_equal(image, np.zeros((4, 4, 3)))

    @settings(max_examples=30, deadline=None)
    @given(
        nx=st.floats(-0.8, 0.8), ny=st.floats(-0.8, 0.8),
        ka=st.floats(0, 2), kd=st.floats(0, 2), ks=st.floats(0, 2),
        alpha=st.floats(1, 20),
    )
    def test_output_always_clamped(self, nx, ny, ka, kd, ks, alpha):
        n = unit((nx, ny, 1.0))
        image = shade(field_of(n), led_ring(), PhongParams(k_a=ka, k_d=kd, k_s=ks, alpha=alpha))
        assert (image >= 0.0).all() and (image <= 1.0).all()

    @settings(max_examples=30, deadline=None)
    @given(nx=st.floats(-0.8, 0.8), ny=st.floats(-0.8, 0.8),
           kd=st.floats(0, 1.5), bump=st.floats(0.01, 1.0))
    def test_diffuse_gain_never_darkens(self, nx, ny, kd, bump):
        normals = field_of(unit((nx, ny, 1.0)))
        lo = shade(normals, led_ring(), PhongParams(k_d=kd))
        hi = shade(normals, led_ring(), PhongParams(k_d=kd + bump))
        assert (hi >= lo - 1e-12).all()

    def test_mirror_symmetry_about_x_axis(self):
        rng = np.random.default_rng(7)
        raw = rng.normal(size=(6, 6, 3))
        raw[..., 2] = np.abs(raw[..., 2]) + 0.5
        normals = raw / np.linalg.norm(raw, axis=-1, keepdims=True)
        blue, red, white, green = led_ring()
        image = shade(normals, [blue, red, white, green], PhongParams())

        flipped = normals[::-1].copy()
        flipped[..., 1] *= -1  # mirror about the x axis
        # the +y and -y LEDs trade places (directions swap, colors stay)
        swapped = [
            blue,
            LightSource(direction=green.direction, i_d=red.i_d, i_s=red.i_s),
            white,
            LightSource(direction=red.direction, i_d=green.i_d, i_s=green.i_s),
        ]
        mirrored = shade(flipped, swapped, PhongParams())
        np.testing.assert_array_equal(mirrored, image[::-1])


class TestLedRing:
    def test_overhead_limit(self):
        for light in led_ring(90.0):
            np.testing.assert_allclose(light.direction, (0, 0, 1), atol=1e-12)

    def test_elevation_45_plus_x_side(self):
        lights = led_ring(45.0)
        white = lights[2]  # +x side
        np.testing.assert_allclose(white.direction, (-SQ2, 0.0, SQ2), atol=1e-6)

    def test_side_order_and_colors(self):
        lights = led_ring(30.0)
        assert [l.i_d for l in lights] == list(DEFAULT_LED_COLORS)
        c = math.cos(math.radians(30.0))
        s = math.sin(math.radians(30.0))
        expected = [(c, 0, s), (0, -c, s), (-c, 0, s), (0, c, s)]
        for light, direction in zip(lights, expected):
            np.testing.assert_allclose(light.direction, direction, atol=1e-12)

    @pytest.mark.parametrize("elevation", [0.0, -5.0, 90.5])
    def test_rejects_out_of_range_elevation(self, elevation):
        with pytest.raises(ValueError, match="elevation"):
            led_ring(elevation)


class TestQuantization:
    def test_round_to_255(self):
        image = np.array([[[0.0, 0.5, 1.0]]])
        np.testing.assert_array_equal(to_uint8(image), [[[0, 128, 255]]])


class TestValidation:
    def test_light_requires_unit_direction(self):
        with pytest.raises(ValueError, match="unit"):
            LightSource(direction=(0, 0, 2.0), i_d=(1, 1, 1), i_s=(1, 1, 1))

    def test_params_reject_negative_coefficients(self):
        with pytest.raises(ValueError):
            PhongParams(k_d=-0.1)
        with pytest.raises(ValueError, match="alpha"):
            PhongParams(alpha=0.5)
