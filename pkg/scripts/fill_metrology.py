#!/usr/bin/env python3
"""Print the penetration/contact-area ladder for the three bottle fill levels.

The three masses must map to strictly increasing penetration depths and
imprint areas; this is the physical signal the fill-level classifier rides on.
"""

import numpy as np

from stsim.compliance import GRAVITY, solve_penetration
from stsim.datasetgen import builtin_recipe, sample_rng
from stsim.scene import lower_surface, sample_pose
from stsim.sensor import SensorConfig


def main() -> None:
    config = SensorConfig()
    recipe = builtin_recipe("fill", config)
    grid = config.grid()
    rng = sample_rng(0, "fill-metrology-demo")
    pose = sample_pose(rng, recipe.pose_bounds)
    print(f"pose x={pose.x * 1000:.1f} mm y={pose.y * 1000:.1f} mm")
    print(f"{'class':>10} {'mass g':>8} {'penetration mm':>15} {'contact px':>11}")
    for obj in recipe.objects:
        clearance = lower_surface(obj, pose, grid)
        load = solve_penetration(clearance, obj.weight_g * GRAVITY / 1000.0,
                                 config.compliance, config.gel_thickness,
                                 config.pixel_pitch)
        area = int(np.sum(load.contact_mask))
        print(f"{obj.class_label:>10} {obj.weight_g:>8.0f} "
              f"{load.penetration * 1000:>15.3f} {area:>11d}")


if __name__ == "__main__":
    main()
