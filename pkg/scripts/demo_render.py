#!/usr/bin/env python3
"""Render the demo sphere press and a few catalog objects to PNG files.

Usage: python scripts/demo_render.py [OUT_DIR]
"""

import sys
from pathlib import Path

from PIL import Image

from stsim import datasetgen
from stsim.demo import golden_capture
from stsim.scene import Pose
from stsim.sensor import SensorConfig, capture
from stsim.shading import to_uint8


def save(out, prefix: Path) -> None:
    for modality, image in (("tactile", out.tactile), ("visual", out.visual),
                            ("blended", out.blended)):
        path = prefix.parent / f"{prefix.name}_{modality}.png"
        Image.fromarray(to_uint8(image)).save(path, format="PNG")
        print(f"wrote {path}")


def main() -> None:
    out_dir = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("demo_renders")
    out_dir.mkdir(parents=True, exist_ok=True)
    save(golden_capture(), out_dir / "sphere")
    config = SensorConfig()
    for obj in (datasetgen.texture_objects()[0], datasetgen.fill_objects()[2],
                datasetgen.household_objects()[6]):
        save(capture(obj, Pose(0.0, 0.0, 0.35), config), out_dir / obj.object_id)


if __name__ == "__main__":
    main()
