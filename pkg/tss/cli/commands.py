"""Pipeline stages behind the command line; each returns the paths it wrote."""
from __future__ import annotations

import logging
from datetime import datetime, timezone
from pathlib import Path
from typing import Dict, List, Tuple

from tss.bench.benchmark import run_benchmark
from tss.data.csv_io import DatasetParser
from tss.data.generators import gen_cyclic_classes, gen_gaussian, gen_imbalanced
from tss.diffusion.batch import SamplerSettings, sample_batch
from tss.diffusion.trajectory import Trajectory, dump_trajectories
from tss.errors import DatasetError, TssError
from tss.evaluation.curve import mean_curve, per_step_curve
from tss.evaluation.spectrum import SpectralIndex
from tss.evaluation.tstr import tstr_run
from tss.model.dataset import LabeledDataset
from tss.predictor.base import EpsilonPredictor
from tss.predictor.denoiser import DenoiserModel, describe
from tss.predictor.gradcheck import run_gradcheck
from tss.predictor.oracle import GaussianDataSpec, GaussianOracle
from tss.predictor.storage import load_models, save_models
from tss.predictor.training import train
from tss.schedule.noise import NoiseSchedule, build_schedule
from tss.schedule.plan import SamplingPlan, build_sawtooth_plan, single_pass_plan
from tss.cli.config import RunConfig
from tss.utils.io import atomic_write_text

logger = logging.getLogger(__name__)


def write_report(path: Path, kind: str, summary: Dict[str, str]) -> Path:
    lines = [f"# tss-{kind}-report v1", f"generated_at={datetime.now(timezone.utc).isoformat(timespec='seconds')}"]
    lines += [f"{key}={summary[key]}" for key in sorted(summary)]
    return atomic_write_text(path, "\n".join(lines) + "\n")


def schedule_and_plan(cfg: RunConfig) -> Tuple[NoiseSchedule, SamplingPlan]:
    s = cfg.section("schedule")
    return build_sawtooth_plan(s["total_steps"], s["sawtooth_n"], s["T"], s["beta_start"], s["beta_end"])


def sampler_settings(cfg: RunConfig, record_states: bool) -> SamplerSettings:
    schedule, plan = schedule_and_plan(cfg)
    method = cfg.get("sample", "method")
    if method == "ddim":
        # plain DDIM spends the whole budget in one pass
        plan = single_pass_plan(schedule.T, plan.total_steps)
    return SamplerSettings(method, schedule, plan, cfg.get("sample", "eta"), record_states)


def gaussian_spec(cfg: RunConfig) -> GaussianDataSpec:
    d = cfg.section("data")
    return GaussianDataSpec.ar1(d["channels"], d["length"], d["rho"], d["scale"])


def load_predictors(cfg: RunConfig, schedule: NoiseSchedule) -> Dict[str, EpsilonPredictor]:
    if cfg.get("sample", "predictor") == "oracle":
        return {"gaussian": GaussianOracle(gaussian_spec(cfg))}
    return dict(load_models(cfg.path("model"), expected_T=schedule.T))


def cmd_gen_data(cfg: RunConfig) -> List[Path]:
    d = cfg.section("data")
    seed = cfg.stage_seed("gen_data")
    if d["kind"] == "gaussian":
        dataset = gen_gaussian(gaussian_spec(cfg), d["n"], seed)
    elif d["kind"] == "cyclic":
        dataset = gen_cyclic_classes(d["n_classes"], d["channels"], d["length"], d["per_class"],
                                     d["noise_level"], seed, d["phase_jitter"])
    else:
        dataset = gen_imbalanced(d["minority_fraction"], d["total"], d["channels"], d["length"],
                                 d["noise_level"], seed, d["phase_jitter"], d["imbalanced_classes"])
    out = DatasetParser.save_csv(dataset, cfg.path("dataset"))
    logger.info("generated %s dataset: %d samples of shape %s", d["kind"], len(dataset), dataset.shape)
    return [out]


def _loss_log_text(logs: List[Tuple[str, List[float]]]) -> str:
    lines = ["# tss-losslog v1", "label,step,loss"]
    for label, losses in logs:
        lines += [f"{label},{i},{loss!r}" for i, loss in enumerate(losses)]
    return "\n".join(lines) + "\n"


def cmd_train(cfg: RunConfig) -> List[Path]:
    dataset = DatasetParser.load_csv(cfg.path("dataset"))
    schedule = build_schedule(cfg.get("schedule", "T"), cfg.get("schedule", "beta_start"), cfg.get("schedule", "beta_end"))
    t, m = cfg.section("train"), cfg.section("model")
    channels, length = dataset.shape

    if t["per_class"]:
        groups = [(dataset.class_names[c], dataset.of_class(c)) for c in dataset.class_ids]
    else:
        groups = [("all", list(dataset.samples))]

    models: Dict[str, DenoiserModel] = {}
    logs = []
    for label, samples in groups:
        model = DenoiserModel.create(channels, length, schedule.T, m["hidden"],
                                     seed=cfg.stage_seed(f"train:init:{label}"), init_scale=m["init_scale"])
        logger.info("training %s on %d samples", describe(model, label), len(samples))
        log = train(model, samples, schedule, t["steps"], t["learning_rate"], cfg.stage_seed(f"train:{label}"),
                    batch_size=t["batch_size"], log_every=t["log_every"],
                    progress=logger.isEnabledFor(logging.INFO), label=label)
        models[label] = model
        logs.append((label, log.losses))
    return [save_models(cfg.path("model"), models), atomic_write_text(cfg.path("loss_log"), _loss_log_text(logs))]


def _sample_all(cfg: RunConfig, settings: SamplerSettings, predictors: Dict[str, EpsilonPredictor],
                stage: str) -> List[Tuple[str, Trajectory]]:
    count = cfg.get("sample", "count")
    seed = cfg.stage_seed(stage)
    rows = []
    for group, (label, predictor) in enumerate(predictors.items()):
        trajectories = sample_batch(settings, predictor, predictor.shape, count, seed, group, cfg.workers)
        rows += [(label, traj) for traj in trajectories]
    return rows


def cmd_sample(cfg: RunConfig) -> List[Path]:
    settings = sampler_settings(cfg, cfg.get("sample", "record_states"))
    predictors = load_predictors(cfg, settings.schedule)
    rows = _sample_all(cfg, settings, predictors, "sample")

    names = list(predictors)
    dataset = LabeledDataset(
        samples=[traj.final for _, traj in rows],
        labels=[names.index(label) for label, _ in rows],
        class_names=dict(enumerate(names)),
    )
    logger.info("sampled %d series with %s (N=%d, %d steps per pass)", len(rows), settings.method,
                settings.plan.N, settings.plan.steps_per_iteration)
    return [
        DatasetParser.save_csv(dataset, cfg.path("samples")),
        atomic_write_text(cfg.path("trajectory"), dump_trajectories(rows)),
    ]


def cmd_eval_curve(cfg: RunConfig) -> List[Path]:
    settings = sampler_settings(cfg, record_states=True)
    predictors = load_predictors(cfg, settings.schedule)
    real = DatasetParser.load_csv(cfg.path("real_dataset"))
    by_name = {name: cid for cid, name in real.class_names.items()}
    missing = [label for label in predictors if label not in by_name]
    if missing:
        raise DatasetError(f"real dataset has no class named {', '.join(missing)}")

    indices = {label: SpectralIndex(real.of_class(by_name[label])) for label in predictors}
    out_dir = cfg.path("curve_dir")
    written = []
    curves: Dict[str, list] = {label: [] for label in predictors}
    for i, (label, traj) in enumerate(_sample_all(cfg, settings, predictors, "eval_curve")):
        curve = per_step_curve(traj, indices[label])
        curves[label].append(curve)
        n = len(curves[label]) - 1
        written.append(atomic_write_text(out_dir / f"{label}_{n:03d}.csv", curve.dump()))
    for label, group in curves.items():
        written.append(atomic_write_text(out_dir / f"{label}_mean.csv", mean_curve(group).dump()))
    return written


def cmd_tstr(cfg: RunConfig) -> List[Path]:
    synthetic = DatasetParser.load_csv(cfg.path("synthetic_dataset"))
    real = DatasetParser.load_csv(cfg.path("real_dataset"))
    result = tstr_run(synthetic, real)
    summary = result.summary()
    metric = cfg.get("tstr", "metric")
    summary["metric"] = metric
    if metric != "both":
        summary["value"] = summary[metric]
    summary["n_train"] = str(len(synthetic))
    summary["n_test"] = str(len(real))
    return [write_report(cfg.path("report"), "tstr", summary)]


def cmd_bench(cfg: RunConfig) -> List[Path]:
    schedule, plan = schedule_and_plan(cfg)
    if cfg.path("model"):
        predictor: EpsilonPredictor = next(iter(load_models(cfg.path("model"), expected_T=schedule.T).values()))
    else:
        d = cfg.section("data")
        predictor = DenoiserModel.create(d["channels"], d["length"], schedule.T, cfg.get("model", "hidden"),
                                         seed=cfg.stage_seed("bench:model"))
    result = run_benchmark(predictor, predictor.shape, schedule, plan, cfg.get("bench", "count"),
                           cfg.stage_seed("bench"), cfg.workers, cfg.get("bench", "repeats"))
    return [write_report(cfg.path("report"), "bench", result.summary())]


def cmd_gradcheck(cfg: RunConfig) -> List[Path]:
    g = cfg.section("gradcheck")
    report = run_gradcheck(g["models"], g["probes"], cfg.stage_seed("gradcheck"), g["channels"], g["length"],
                           g["T"], g["hidden"], g["step"])
    passed = report.max_rel_err < g["tolerance"]
    summary = {
        "max_rel_err": f"{report.max_rel_err:.3e}",
        "per_model_max_rel_err": ";".join(f"{e:.3e}" for e in report.errors),
        "parameter_counts": ";".join(str(c) for c in report.parameter_counts),
        "models": str(g["models"]),
        "probes": str(g["probes"]),
        "step": repr(g["step"]),
        "tolerance": repr(g["tolerance"]),
        "passed": str(passed).lower(),
    }
    out = write_report(cfg.path("report"), "gradcheck", summary)
    if not passed:
        raise TssError(f"max relative gradient error {report.max_rel_err:.3e} exceeds {g['tolerance']:.1e}")
    return [out]


COMMAND_TABLE = {
    "gen_data": cmd_gen_data,
    "train": cmd_train,
    "sample": cmd_sample,
    "eval_curve": cmd_eval_curve,
    "tstr": cmd_tstr,
    "bench": cmd_bench,
    "gradcheck": cmd_gradcheck,
}
