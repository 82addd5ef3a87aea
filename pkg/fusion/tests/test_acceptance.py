"""Secondary acceptance: fusion dominance and fill-level confusion structure.

Datasets are produced through the generator's command-line interface and read
back through its manifest schema; nothing else of the simulator is touched.
"""

import subprocess
import time
from pathlib import Path

import numpy as np
import pytest

from stsfuse.data import ModalitySpec
from stsfuse.train import train

REPO_ROOT = Path(__file__).resolve().parents[2]
CONFOUND_RECIPE = REPO_ROOT / "recipes" / "confound.json"

# One shared training budget for every modality and seed.
CONFOUND_EPOCHS = 8
FILL_EPOCHS = 30
LR = 1e-3
SEEDS = (0, 1, 2)

TACTILE_CONFOUND_PAIR = ("plate_red", "plate_green")
VISUAL_CONFOUND_PAIR = ("engraved_sine", "engraved_checker")


def _generate(args, out_dir: Path) -> Path:
    cmd = ["stsim", "generate", *args, "--out", str(out_dir), "--workers", "2"]
    subprocess.run(cmd, check=True, capture_output=True, text=True)
    return out_dir / "manifest.json"


@pytest.fixture(scope="session")
def confound_manifest(tmp_path_factory):
    out = tmp_path_factory.mktemp("confound")
    return _generate(["--recipe", str(CONFOUND_RECIPE), "--seed", "11"], out)


@pytest.fixture(scope="session")
def fill_manifest(tmp_path_factory):
    out = tmp_path_factory.mktemp("fill")
    return _generate(["--recipe", "fill", "--seed", "7"], out)


@pytest.mark.acceptance("Fusion ordering: both >= max(single), both >= 90%, pairs <= 60%")
def test_fusion_ordering_across_seeds(confound_manifest):
    start = time.perf_counter()
    for seed in SEEDS:
        reports = {
            mode: train(confound_manifest, ModalitySpec(mode),
                        epochs=CONFOUND_EPOCHS, lr=LR, seed=seed)[1]
            for mode in ("both", "visual", "tactile")
        }
        both = reports["both"].accuracy
        singles = {m: reports[m].accuracy for m in ("visual", "tactile")}
        tactile_pair = reports["tactile"].pair_accuracy(*TACTILE_CONFOUND_PAIR)
        visual_pair = reports["visual"].pair_accuracy(*VISUAL_CONFOUND_PAIR)

        assert both >= max(singles.values()), (
            f"seed {seed}: fusion {both:.3f} below best single {singles}"
        )
        assert both >= 0.90, f"seed {seed}: fusion accuracy {both:.3f} < 0.90"
        assert tactile_pair <= 0.60, (
            f"seed {seed}: tactile scores {tactile_pair:.3f} on its confounded pair"
        )
        assert visual_pair <= 0.60, (
            f"seed {seed}: visual scores {visual_pair:.3f} on its confounded pair"
        )
    assert time.perf_counter() - start < 15 * 60


@pytest.mark.acceptance("Fill confusion: errors concentrate on adjacent levels")
def test_fill_confusion_structure(fill_manifest):
    _, report = train(fill_manifest, ModalitySpec("both"),
                      epochs=FILL_EPOCHS, lr=LR, seed=0)
    order = [report.classes.index(c) for c in ("empty", "half_full", "full")]
    conf = np.asarray(report.confusion)[np.ix_(order, order)]

    # sanity: rows are the true classes, one row per fill level of the val split
    assert conf.shape == (3, 3)
    assert (conf.sum(axis=1) == conf.sum(axis=1)[0]).all()

    errors = int(conf.sum() - np.trace(conf))
    if errors:
        off_by_one = int(sum(conf[i, j] for i in range(3) for j in range(3)
                             if abs(i - j) == 1))
        assert off_by_one / errors >= 0.80, (
            f"only {off_by_one}/{errors} errors fall on adjacent fill levels\n{conf}"
        )
