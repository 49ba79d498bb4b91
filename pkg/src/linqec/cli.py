"""Command-line front end.

    linqec <experiment> [--config FILE] [--seed N] [--trials N] [--json PATH] [--csv PATH] ...

Every run writes a JSON summary (``<experiment>.json`` unless ``--json`` is
given) and prints one human-readable line.  ``--check`` turns the
experiment's built-in self-checks into the exit status.

Exit codes: 0 success, 2 configuration error, 3 I/O error, 4 failed check.
"""
from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import math
import os
import sys
from dataclasses import dataclass

from . import __version__
from .channel import ChannelDistribution
from .experiments import EXPERIMENTS, ExperimentResult, parse_grid

SEED_ENV = "LINQEC_SEED"

EXIT_OK, EXIT_CONFIG, EXIT_IO, EXIT_CHECK = 0, 2, 3, 4

DEFAULT_TRIALS = {
    "correct-single": 1000,
    "compare-setups": 1000,
    "bb84": 100_000,
}


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    experiment: str
    seed: int = 0
    trials: int | None = None
    phi: str = "uniform"
    lambda_: str = "uniform"
    xi: str = "uniform"
    pe: float | None = None
    pe_grid: str = "0:0.5:0.025"
    both_ports: bool = False
    key_port: str = "1"
    workers: int = 1
    alpha: float = 2.0
    m_bases: str = "3,5,7"
    grid_points: int = 50
    theta_grid: str = "0:3.141592653589793:0.0314159265358979"
    json: str | None = None
    csv: str | None = None
    check: bool = False

    # excluded from the echo: they never change results
    _NOT_ECHOED = ("json", "csv", "workers", "check")

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise ConfigError(f"unknown experiment {self.experiment!r}; choose from {sorted(EXPERIMENTS)}")
        if not 0 <= self.seed < 2**64:
            raise ConfigError(f"seed must be a non-negative 64-bit integer, got {self.seed}")
        if self.trials is None:
            self.trials = DEFAULT_TRIALS.get(self.experiment, 1)
        if self.trials < 1:
            raise ConfigError(f"trials must be >= 1, got {self.trials}")
        if self.pe is not None and not 0 <= self.pe <= 0.5:
            raise ConfigError(f"pe = {self.pe} outside the valid range [0, 0.5]")
        if self.grid_points < 2:
            raise ConfigError("grid_points must be >= 2")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        if self.key_port not in ("1", "2"):
            raise ConfigError(f"key_port must be 1 or 2, got {self.key_port!r}")
        try:
            self.channel()
            for m in self.m_values():
                if m < 1 or m % 2 == 0:
                    raise ConfigError(f"m_bases entries must be odd positive integers, got {m}")
            parse_grid(self.pe_grid)
            parse_grid(self.theta_grid)
        except (KeyError, ValueError) as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(str(exc)) from None

    def channel(self) -> ChannelDistribution:
        return ChannelDistribution.from_mapping({"phi": self.phi, "lambda": self.lambda_, "xi": self.xi})

    def m_values(self) -> list[int]:
        return [int(x) for x in str(self.m_bases).split(",") if x.strip()]

    def echo(self) -> dict:
        d = dataclasses.asdict(self)
        d["lambda"] = d.pop("lambda_")
        for key in self._NOT_ECHOED:
            d.pop(key, None)
        return d


FIELD_TYPES = {f.name: f.type for f in dataclasses.fields(RunConfig)}
OPTION_NAMES = {name.rstrip("_"): name for name in FIELD_TYPES if name != "experiment"}


def _coerce(name: str, raw: str):
    kind = FIELD_TYPES[name]
    if "bool" in kind:
        low = str(raw).strip().lower()
        if low in ("1", "true", "yes", "on"):
            return True
        if low in ("0", "false", "no", "off"):
            return False
        raise ValueError(f"expected a boolean, got {raw!r}")
    if "int" in kind:
        return int(raw)
    if "float" in kind:
        return None if str(raw).strip().lower() in ("", "none") else float(raw)
    return str(raw).strip()


def read_config_file(path: str) -> dict:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    values = {}
    try:
        with open(path) as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from None
    for lineno, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {line!r}")
        key, raw = (x.strip() for x in line.split("=", 1))
        norm = key.replace("-", "_")
        if norm not in OPTION_NAMES and norm != "experiment":
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        field_name = "experiment" if norm == "experiment" else OPTION_NAMES[norm]
        try:
            values[field_name] = raw if field_name == "experiment" else _coerce(field_name, raw)
        except ValueError as exc:
            raise ConfigError(f"{path}:{lineno}: bad value for {key!r}: {exc}") from None
    return values


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="linqec", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"linqec {__version__}")
    parser.add_argument("experiment", choices=sorted(EXPERIMENTS))
    S = argparse.SUPPRESS
    parser.add_argument("--config", help="key = value file; flags override it")
    parser.add_argument("--seed", type=int, default=S)
    parser.add_argument("--trials", type=int, default=S)
    parser.add_argument("--phi", default=S, help="fixed mixing angle or 'uniform'")
    parser.add_argument("--lambda", dest="lambda_", default=S, help="fixed phase or 'uniform'")
    parser.add_argument("--xi", default=S, help="fixed phase or 'uniform'")
    parser.add_argument("--pe", type=float, default=S, help="FPB attack strength in [0, 0.5]")
    parser.add_argument("--pe-grid", dest="pe_grid", default=S, help="start:stop:step")
    parser.add_argument("--both-ports", dest="both_ports", action="store_const", const=True, default=S)
    parser.add_argument("--key-port", dest="key_port", default=S)
    parser.add_argument("--workers", type=int, default=S)
    parser.add_argument("--alpha", type=float, default=S, help="coherent amplitude")
    parser.add_argument("--m-bases", dest="m_bases", default=S, help="comma-separated odd basis counts")
    parser.add_argument("--grid-points", dest="grid_points", type=int, default=S)
    parser.add_argument("--theta-grid", dest="theta_grid", default=S)
    parser.add_argument("--json", default=S, help="summary path ('-' for stdout)")
    parser.add_argument("--csv", default=S, help="per-trial CSV path")
    parser.add_argument("--check", action="store_const", const=True, default=S)
    return parser


def load_config(argv: list[str] | None = None) -> RunConfig:
    """Merge defaults, the environment seed, a config file and flags (in that order)."""
    parser = build_parser()
    args = vars(parser.parse_args(argv))
    values: dict = {}
    if os.environ.get(SEED_ENV):
        try:
            values["seed"] = int(os.environ[SEED_ENV])
        except ValueError:
            raise ConfigError(f"{SEED_ENV} must be an integer") from None
    config_path = args.pop("config", None)
    if config_path:
        values.update(read_config_file(config_path))
    values.update(args)
    try:
        return RunConfig(**values)
    except TypeError as exc:
        raise ConfigError(str(exc)) from None


def execute(cfg: RunConfig) -> ExperimentResult:
    channel = cfg.channel()
    name = cfg.experiment
    if name == "correct-single":
        return EXPERIMENTS[name](cfg.trials, cfg.seed, channel)
    if name == "compare-setups":
        return EXPERIMENTS[name](cfg.trials, cfg.seed, channel)
    if name == "fpb-sweep":
        return EXPERIMENTS[name](parse_grid(cfg.pe_grid), cfg.seed, channel)
    if name == "bb84":
        return EXPERIMENTS[name](
            cfg.trials, cfg.seed, channel, pe=cfg.pe, both_ports=cfg.both_ports,
            key_port=cfg.key_port, workers=cfg.workers,
        )
    if name == "passive-coherent":
        return EXPERIMENTS[name](cfg.grid_points, cfg.seed, channel)
    if name == "mesoscopic":
        return EXPERIMENTS[name](cfg.m_values(), cfg.alpha, cfg.grid_points, cfg.seed, channel)
    return EXPERIMENTS[name](cfg.alpha, parse_grid(cfg.theta_grid))


def _clean(value):
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, dict):
        return {k: _clean(v) for k, v in value.items()}
    if isinstance(value, list):
        return [_clean(v) for v in value]
    return value


def summary_json(cfg: RunConfig, result: ExperimentResult) -> str:
    doc = {
        "experiment": cfg.experiment,
        "config_echo": cfg.echo(),
        "seed": cfg.seed,
        "metrics": result.metrics,
        "checks": {c.name: c.passed for c in result.checks},
        "version": __version__,
    }
    return json.dumps(_clean(doc), indent=2, sort_keys=True) + "\n"


def write_csv(path: str, columns: list[str], rows: list[dict]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=columns, quoting=csv.QUOTE_MINIMAL)
        writer.writeheader()
        writer.writerows(rows)


def one_line(cfg: RunConfig, result: ExperimentResult) -> str:
    parts = []
    for k, v in result.metrics.items():
        parts.append(f"{k}={v:.6g}" if isinstance(v, float) else f"{k}={v}")
    status = "" if not result.checks else (" [checks ok]" if result.passed else " [CHECK FAILED]")
    return f"{cfg.experiment}: " + " ".join(parts) + status


def main(argv: list[str] | None = None) -> int:
    try:
        cfg = load_config(argv)
    except ConfigError as exc:
        print(f"linqec: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SystemExit as exc:  # argparse
        return EXIT_OK if exc.code in (0, None) else EXIT_CONFIG

    result = execute(cfg)
    text = summary_json(cfg, result)
    try:
        json_path = cfg.json or f"{cfg.experiment}.json"
        if json_path == "-":
            sys.stdout.write(text)
        else:
            with open(json_path, "w") as fh:
                fh.write(text)
        if cfg.csv:
            write_csv(cfg.csv, result.csv_columns, result.csv_rows)
    except OSError as exc:
        print(f"linqec: cannot write output: {exc}", file=sys.stderr)
        return EXIT_IO

    print(one_line(cfg, result), file=sys.stderr if cfg.json == "-" else sys.stdout)
    if cfg.check:
        for c in result.checks:
            print(f"  {'PASS' if c.passed else 'FAIL'} {c.name}: {c.detail}", file=sys.stderr)
        if not result.passed:
            return EXIT_CHECK
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
