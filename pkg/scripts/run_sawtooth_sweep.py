"""Sample, score and TSTR-evaluate DDIM-K1/K2/K5/K10 from one trained model file.

Usage:
python3 bin/tss_main.py --config configs/gen_cyclic.ini
python3 bin/tss_main.py --config configs/gen_cyclic_test.ini
python3 bin/tss_main.py --config configs/train.ini
python3 scripts/run_sawtooth_sweep.py --passes 1 2 5 10 --out out/sweep.txt
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Dict, List

sys.path.insert(0, str(Path(__file__).resolve().parents[1]))

from tss.cli import main as tss_main  # noqa: E402
from tss.evaluation import StepCurve  # noqa: E402
from tss.utils.io import atomic_write_text  # noqa: E402


# eval_curve runs without a config file; these mirror configs/ddim_k*.ini
SCHEDULE = ["--set", "schedule.T=200", "--set", "schedule.beta_start=1e-4", "--set", "schedule.beta_end=0.05",
            "--set", "schedule.total_steps=100", "--set", "sample.count=4"]


def final_score(curve_csv: Path) -> float:
    return float(StepCurve.loads(curve_csv.read_text()).scores[-1])


def read_report(path: Path) -> Dict[str, str]:
    lines = path.read_text().splitlines()[1:]
    return dict(line.split("=", 1) for line in lines if "=" in line)


def run(argv: List[str]) -> None:
    code = tss_main(argv)
    if code != 0:
        raise SystemExit(f"tss {argv[0]} failed with exit code {code}")


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--passes", type=int, nargs="+", default=[1, 2, 5, 10])
    p.add_argument("--model", default="out/cyclic_models.txt")
    p.add_argument("--real", default="out/cyclic_real.csv")
    p.add_argument("--test", default="out/cyclic_test.csv")
    p.add_argument("--count", type=int, default=None, help="override sample.count of the ddim_k configs")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", dest="outfile", default="out/sweep.txt")
    args = p.parse_args()

    common = ["-q", "--set", f"paths.model={args.model}"]
    if args.seed is not None:
        common += ["--seed", str(args.seed)]

    rows = []
    for n in args.passes:
        config = Path("configs") / f"ddim_k{n}.ini"
        base = Path("out") / f"ddim_k{n}"
        overrides = ["--set", f"schedule.sawtooth_n={n}"]
        if args.count is not None:
            overrides += ["--set", f"sample.count={args.count}"]

        print(f"DDIM-K{n}: sampling with {config}")
        run(["sample", "--config", str(config)] + common + overrides)

        print(f"DDIM-K{n}: per-step similarity curves")
        curve_dir = base / "curves"
        run(["eval_curve"] + SCHEDULE + ["--set", f"paths.real_dataset={args.real}",
             "--set", f"paths.curve_dir={curve_dir}"] + common + overrides)

        print(f"DDIM-K{n}: train on synthetic, test on {args.test}")
        report = base / "tstr.txt"
        run(["tstr", "-q", "--set", f"paths.synthetic_dataset={base / 'samples.csv'}",
             "--set", f"paths.real_dataset={args.test}", "--set", f"paths.report={report}"])

        tstr = read_report(report)
        finals = [final_score(path) for path in sorted(curve_dir.glob("*_mean.csv"))]
        rows.append((n, tstr["macro_f1"], tstr["gmean"], sum(finals) / len(finals) if finals else float("nan")))

    lines = ["# tss-sweep v1", "sawtooth_n,macro_f1,gmean,final_similarity"]
    lines += [f"{n},{f1},{gm},{sim!r}" for n, f1, gm, sim in rows]
    atomic_write_text(args.outfile, "\n".join(lines) + "\n")
    print(f"Saved sweep to {args.outfile}")
    for n, f1, _, sim in rows:
        print(f"DDIM-K{n} : macro_f1={f1} final_similarity={sim:.4f}")


if __name__ == "__main__":
    main()
