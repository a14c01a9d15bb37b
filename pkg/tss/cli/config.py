"""Run configuration: INI sections, typed fields, one-pass validation.

Every key is declared in SCHEMA. Unknown sections or keys, unparsable
values, range violations, cross-field rules and missing input files are
all collected and reported together in a single ConfigError.
"""
from __future__ import annotations

import configparser
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from tss.errors import ConfigError
from tss.utils.rng import stage_seed

logger = logging.getLogger(__name__)

COMMANDS = ("gen_data", "train", "sample", "eval_curve", "tstr", "bench", "gradcheck")


def _bool(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _int_list(text: str) -> Tuple[int, ...]:
    text = text.strip()
    if not text:
        return ()
    return tuple(int(part) for part in text.split(","))


def _choice(*options: str) -> Callable[[str], str]:
    def parse(text: str) -> str:
        value = text.strip()
        if value not in options:
            raise ValueError(f"{value!r} is not one of {', '.join(options)}")
        return value
    return parse


@dataclass(frozen=True)
class Field:
    parse: Callable[[str], Any]
    default: Any
    check: Optional[Callable[[Any], bool]] = None
    rule: str = ""


def _positive(x) -> bool:
    return x >= 1


def _non_negative(x) -> bool:
    return x >= 0


def _open_unit(x) -> bool:
    return 0.0 < x < 1.0


SCHEMA: Dict[str, Dict[str, Field]] = {
    "run": {
        "command": Field(_choice(*COMMANDS), None),
        "seed": Field(int, 0, _non_negative, ">= 0"),
        "workers": Field(int, 1, _positive, ">= 1"),
    },
    "schedule": {
        "T": Field(int, 1000, _positive, ">= 1"),
        "beta_start": Field(float, 1e-4, _open_unit, "in (0, 1)"),
        "beta_end": Field(float, 0.02, _open_unit, "in (0, 1)"),
        "total_steps": Field(int, 100, _positive, ">= 1"),
        "sawtooth_n": Field(int, 1, _positive, ">= 1"),
    },
    "data": {
        "kind": Field(_choice("gaussian", "cyclic", "imbalanced"), "cyclic"),
        "n_classes": Field(int, 4, lambda x: x >= 2, ">= 2"),
        "channels": Field(int, 1, _positive, ">= 1"),
        "length": Field(int, 64, lambda x: x >= 2, ">= 2"),
        "per_class": Field(int, 32, _positive, ">= 1"),
        "noise_level": Field(float, 0.1, _non_negative, ">= 0"),
        "phase_jitter": Field(float, 0.0, _non_negative, ">= 0"),
        "minority_fraction": Field(float, 0.1, lambda x: 0.0 < x < 0.5, "in (0, 0.5)"),
        "total": Field(int, 100, lambda x: x >= 2, ">= 2"),
        "imbalanced_classes": Field(int, 2, lambda x: x in (2, 3), "2 or 3"),
        "rho": Field(float, 0.9, lambda x: -1.0 < x < 1.0, "in (-1, 1)"),
        "scale": Field(float, 1.0, lambda x: x > 0, "> 0"),
        "n": Field(int, 100, _positive, ">= 1"),
    },
    "model": {
        "hidden": Field(_int_list, (64, 64), lambda xs: all(h >= 1 for h in xs), "positive widths"),
        "init_scale": Field(float, 1.0, lambda x: x > 0, "> 0"),
    },
    "train": {
        "steps": Field(int, 3000, _non_negative, ">= 0"),
        "learning_rate": Field(float, 0.05, lambda x: x > 0, "> 0"),
        "batch_size": Field(int, 16, _positive, ">= 1"),
        "per_class": Field(_bool, True),
        "log_every": Field(int, 500, _non_negative, ">= 0"),
    },
    "sample": {
        "method": Field(_choice("ddpm", "ddim", "sawtooth"), "sawtooth"),
        "eta": Field(float, 0.0, _non_negative, ">= 0"),
        "count": Field(int, 16, _positive, ">= 1"),
        "predictor": Field(_choice("model", "oracle"), "model"),
        "record_states": Field(_bool, False),
    },
    "bench": {
        "count": Field(int, 4, _positive, ">= 1"),
        "repeats": Field(int, 1, _positive, ">= 1"),
    },
    "gradcheck": {
        "models": Field(int, 5, _positive, ">= 1"),
        "probes": Field(int, 10, _positive, ">= 1"),
        "step": Field(float, 1e-5, lambda x: x > 0, "> 0"),
        "tolerance": Field(float, 1e-4, lambda x: x > 0, "> 0"),
        "channels": Field(int, 2, _positive, ">= 1"),
        "length": Field(int, 4, _positive, ">= 1"),
        "T": Field(int, 10, _positive, ">= 1"),
        "hidden": Field(_int_list, (6, 5), lambda xs: all(h >= 1 for h in xs), "positive widths"),
    },
    "tstr": {
        "metric": Field(_choice("macro_f1", "gmean", "both"), "both"),
    },
    "paths": {
        "dataset": Field(str, None),
        "real_dataset": Field(str, None),
        "synthetic_dataset": Field(str, None),
        "model": Field(str, None),
        "loss_log": Field(str, None),
        "samples": Field(str, None),
        "trajectory": Field(str, None),
        "curve_dir": Field(str, None),
        "report": Field(str, None),
    },
}

# (inputs that must exist, outputs that must be named) per command
REQUIRED_PATHS: Dict[str, Tuple[Sequence[str], Sequence[str]]] = {
    "gen_data": ((), ("dataset",)),
    "train": (("dataset",), ("model", "loss_log")),
    "sample": (("model",), ("samples", "trajectory")),
    "eval_curve": (("model", "real_dataset"), ("curve_dir",)),
    "tstr": (("synthetic_dataset", "real_dataset"), ("report",)),
    "bench": ((), ("report",)),
    "gradcheck": ((), ("report",)),
}


@dataclass
class RunConfig:
    command: str
    seed: int
    values: Dict[str, Dict[str, Any]] = field(default_factory=dict)
    source: Optional[str] = None

    def section(self, name: str) -> Dict[str, Any]:
        return self.values[name]

    def get(self, section: str, key: str) -> Any:
        return self.values[section][key]

    def path(self, key: str) -> Optional[Path]:
        value = self.values["paths"][key]
        return Path(value) if value else None

    @property
    def workers(self) -> int:
        return self.values["run"]["workers"]

    def stage_seed(self, stage: str) -> int:
        return stage_seed(self.seed, stage)


def _read_ini(path: Optional[str], violations: List[str]) -> configparser.ConfigParser:
    parser = configparser.ConfigParser(interpolation=None)
    parser.optionxform = str
    if path is None:
        return parser
    if not Path(path).exists():
        violations.append(f"config: file {path} does not exist")
        return parser
    try:
        parser.read(path)
    except configparser.Error as e:
        violations.append(f"config: {e.__class__.__name__}: {str(e).splitlines()[0]}")
    return parser


def _apply_overrides(parser: configparser.ConfigParser, overrides: Sequence[str], violations: List[str]) -> None:
    for item in overrides:
        key, sep, value = item.partition("=")
        section, dot, option = key.strip().partition(".")
        if not sep or not dot or not section or not option:
            violations.append(f"override {item!r}: expected section.key=value")
            continue
        if not parser.has_section(section):
            parser.add_section(section)
        parser.set(section, option, value.strip())


def _cross_checks(values: Dict[str, Dict[str, Any]], violations: List[str]) -> None:
    data = values["data"]
    if data["kind"] == "imbalanced" and None not in (data["minority_fraction"], data["imbalanced_classes"]):
        if data["minority_fraction"] >= 1.0 / data["imbalanced_classes"]:
            violations.append(
                f"data.minority_fraction: {data['minority_fraction']} leaves no majority among "
                f"{data['imbalanced_classes']} classes, must be below 1/{data['imbalanced_classes']}"
            )
    sched = values["schedule"]
    if None in sched.values():
        return
    if sched["beta_start"] > sched["beta_end"]:
        violations.append(f"schedule.beta_start: {sched['beta_start']} exceeds schedule.beta_end {sched['beta_end']}")
    if sched["total_steps"] % sched["sawtooth_n"]:
        violations.append(
            f"schedule.total_steps: total_steps={sched['total_steps']} is not divisible by sawtooth_n={sched['sawtooth_n']}"
        )
    elif sched["total_steps"] // sched["sawtooth_n"] > sched["T"]:
        violations.append(
            f"schedule.total_steps: {sched['total_steps'] // sched['sawtooth_n']} steps per iteration exceed T={sched['T']}"
        )


def _path_checks(command: str, values: Dict[str, Dict[str, Any]], violations: List[str]) -> None:
    inputs, outputs = REQUIRED_PATHS[command]
    paths = values["paths"]
    if command in ("sample", "eval_curve") and values["sample"]["predictor"] == "oracle":
        inputs = tuple(key for key in inputs if key != "model")
        if values["data"]["kind"] != "gaussian":
            violations.append("sample.predictor: the oracle predictor needs data.kind = gaussian")
    for key in inputs:
        if not paths.get(key):
            violations.append(f"paths.{key}: required by command {command}")
        elif not Path(paths[key]).exists():
            violations.append(f"paths.{key}: input file {paths[key]} does not exist")
    for key in outputs:
        if not paths.get(key):
            violations.append(f"paths.{key}: required by command {command}")
    if command == "bench" and paths.get("model") and not Path(paths["model"]).exists():
        violations.append(f"paths.model: input file {paths['model']} does not exist")


def load_config(path: Optional[str], command: Optional[str] = None, overrides: Sequence[str] = (),
                seed: Optional[int] = None) -> RunConfig:
    violations: List[str] = []
    parser = _read_ini(path, violations)
    _apply_overrides(parser, overrides, violations)
    if seed is not None:
        if not parser.has_section("run"):
            parser.add_section("run")
        parser.set("run", "seed", str(seed))

    for section in parser.sections():
        if section not in SCHEMA:
            violations.append(f"{section}: unknown section")
            continue
        for key in parser.options(section):
            if key not in SCHEMA[section]:
                violations.append(f"{section}.{key}: unknown key")

    values: Dict[str, Dict[str, Any]] = {}
    for section, fields in SCHEMA.items():
        values[section] = {}
        for key, spec in fields.items():
            if parser.has_option(section, key):
                raw = parser.get(section, key)
                try:
                    value = spec.parse(raw)
                except ValueError as e:
                    violations.append(f"{section}.{key}: cannot parse {raw!r}: {e}")
                    values[section][key] = None
                    continue
                if spec.check is not None and not spec.check(value):
                    violations.append(f"{section}.{key}: {value!r} violates rule {spec.rule}")
                    values[section][key] = None
                    continue
                values[section][key] = value
            else:
                values[section][key] = spec.default

    file_command = values["run"]["command"]
    if command is not None and file_command is not None and command != file_command:
        violations.append(f"run.command: config is for {file_command!r} but {command!r} was requested")
    command = command or file_command
    if command is None:
        violations.append("run.command: no command given")
    elif command not in COMMANDS:
        violations.append(f"run.command: unknown command {command!r}")
    else:
        _path_checks(command, values, violations)
    _cross_checks(values, violations)

    if violations:
        raise ConfigError(violations)
    values["run"]["command"] = command
    logger.debug("loaded config %s for command %s", path, command)
    return RunConfig(command=command, seed=values["run"]["seed"], values=values, source=path)
