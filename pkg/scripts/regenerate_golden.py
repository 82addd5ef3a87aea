#!/usr/bin/env python3
"""Re-pin the golden sphere-imprint image used by the regression test.

Only run this deliberately: the test suite compares against the pinned pixels
bit-for-bit, so regenerating after a rendering change re-baselines the test.
"""

from pathlib import Path

from PIL import Image

from stsim.demo import golden_capture
from stsim.shading import to_uint8

GOLDEN_PATH = Path(__file__).resolve().parent.parent / "tests" / "golden" / "sphere_imprint.png"


def main() -> None:
    out = golden_capture()
    GOLDEN_PATH.parent.mkdir(parents=True, exist_ok=True)
    Image.fromarray(to_uint8(out.tactile)).save(GOLDEN_PATH, format="PNG")
    print(f"pinned {GOLDEN_PATH}")
    print(f"penetration {out.load.penetration * 1000:.3f} mm, force {out.load.total_force:.3f} N")


if __name__ == "__main__":
    main()
