"""stsfuse command line: train and evaluate visuotactile classifiers."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .data import MODALITIES, ModalitySpec
from .train import DEFAULT_BATCH, DEFAULT_LR, evaluate_manifest, train


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="stsfuse", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    tr = sub.add_parser("train", help="train a classifier on a dataset manifest")
    tr.add_argument("--manifest", required=True)
    tr.add_argument("--modality", choices=MODALITIES, default="both")
    tr.add_argument("--epochs", type=int, default=20)
    tr.add_argument("--lr", type=float, default=DEFAULT_LR)
    tr.add_argument("--batch", type=int, default=DEFAULT_BATCH)
    tr.add_argument("--seed", type=int, default=0)
    tr.add_argument("--out", required=True, help="directory for weights and reports")

    ev = sub.add_parser("eval", help="evaluate a saved model on a manifest split")
    ev.add_argument("--model", required=True)
    ev.add_argument("--manifest", required=True)
    ev.add_argument("--split", choices=("train", "val"), default="val")
    ev.add_argument("--out", help="directory for the report (default: model dir)")
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code else 0
    try:
        if args.command == "train":
            _, report = train(
                manifest_path=args.manifest,
                modality=ModalitySpec(args.modality),
                epochs=args.epochs,
                lr=args.lr,
                batch_size=args.batch,
                seed=args.seed,
                out_dir=args.out,
            )
            print(f"val accuracy {report.accuracy:.4f} "
                  f"({args.modality}, {args.epochs} epochs, seed {args.seed})")
            return 0
        report = evaluate_manifest(args.model, args.manifest, args.split)
        out_dir = Path(args.out) if args.out else Path(args.model)
        report.save(out_dir, stem=f"eval_{args.split}")
        print(f"{args.split} accuracy {report.accuracy:.4f}")
        return 0
    except (ValueError, OSError) as exc:
        print(f"stsfuse: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
