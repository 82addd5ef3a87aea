"""Command-line interface.

Exit codes: 0 success, 1 usage error, 2 validation failure.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from PIL import Image

from . import datasetgen
from .config import resolve_config
from .scene import Pose
from .sensor import capture
from .shading import to_uint8

USAGE_ERROR = 1
VALIDATION_ERROR = 2


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="stsim", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="render a labeled dataset")
    gen.add_argument("--recipe", required=True,
                     help="household | texture | fill | path to a custom recipe JSON")
    gen.add_argument("--seed", type=int, required=True)
    gen.add_argument("--out", required=True)
    gen.add_argument("--resolution", type=int, nargs=2, metavar=("W", "H"),
                     help="override the sensor resolution")
    gen.add_argument("--config", help="sensor config JSON (default: $STSIM_CONFIG or built-ins)")
    gen.add_argument("--stsd", action="store_true",
                     help="also write float32 height-field sidecars")
    gen.add_argument("--workers", type=int, default=1)

    val = sub.add_parser("validate", help="check a manifest and its files")
    val.add_argument("manifest")

    ren = sub.add_parser("render", help="render one object pose for debugging")
    ren.add_argument("--object", required=True, dest="object_id")
    ren.add_argument("--pose", required=True, help="x,y,theta (meters, meters, radians)")
    ren.add_argument("--out", required=True, help="output file prefix")
    ren.add_argument("--config")
    return parser


def _cmd_generate(args) -> int:
    config = resolve_config(args.config)
    if args.resolution:
        w, h = args.resolution
        pitch_x = config.active_area[0] / w
        config = replace(config, resolution=(w, h), active_area=(pitch_x * w, pitch_x * h))
    recipe = datasetgen.resolve_recipe(args.recipe, config)
    manifest = datasetgen.generate(
        recipe, seed=args.seed, out_dir=args.out, config=config,
        with_stsd=args.stsd, workers=args.workers,
    )
    print(f"wrote {len(manifest.samples)} samples to {args.out}")
    return 0


def _cmd_validate(args) -> int:
    report = datasetgen.validate(args.manifest)
    print(report)
    return 0 if report.ok else VALIDATION_ERROR


def _builtin_object(object_id: str):
    for objects in (datasetgen.household_objects(), datasetgen.texture_objects(),
                    datasetgen.fill_objects()):
        for obj in objects:
            if obj.object_id == object_id:
                return obj
    known = sorted(
        o.object_id
        for group in (datasetgen.household_objects(), datasetgen.texture_objects(),
                      datasetgen.fill_objects())
        for o in group
    )
    raise ValueError(f"unknown object {object_id!r}; known: {', '.join(known)}")


def _cmd_render(args) -> int:
    config = resolve_config(args.config)
    obj = _builtin_object(args.object_id)
    try:
        x, y, theta = (float(v) for v in args.pose.split(","))
    except ValueError:
        raise ValueError(f"--pose expects 'x,y,theta', got {args.pose!r}") from None
    out = capture(obj, Pose(x=x, y=y, theta=theta), config)
    prefix = Path(args.out)
    prefix.parent.mkdir(parents=True, exist_ok=True)
    for modality, image in (("tactile", out.tactile), ("visual", out.visual),
                            ("blended", out.blended)):
        path = prefix.parent / f"{prefix.name}_{modality}.png"
        Image.fromarray(to_uint8(image)).save(path, format="PNG")
        print(f"wrote {path}")
    print(f"penetration {out.load.penetration * 1000:.3f} mm, "
          f"force {out.load.total_force:.3f} N"
          + (" (saturated)" if out.load.saturated else ""))
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE_ERROR if exc.code else 0
    try:
        if args.command == "generate":
            return _cmd_generate(args)
        if args.command == "validate":
            return _cmd_validate(args)
        return _cmd_render(args)
    except (ValueError, OSError) as exc:
        print(f"stsim: error: {exc}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
