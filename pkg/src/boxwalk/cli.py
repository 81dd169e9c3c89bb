"""Command-line front end.

    boxwalk --engine compare --n-sweep 100,10000,1000000 --trials 20 --out-dir out/

Exit codes: 0 success, 2 configuration error, 3 I/O error, 4 internal
invariant violation (e.g. a ball-count breach).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import activespin, boxball
from .analysis import (
    aggregate_trials,
    binomial_stderr,
    convergence_sweep,
    oracle_distribution,
    spreading_moments,
    total_variation,
)
from .errors import ConservationError, ParameterError
from .export import write_box_snapshot, write_csv, write_json, write_spin_snapshot, write_trajectory
from .quantum_reference import CoinParams, QubitSpec
from .streams import trial_rng

EXIT_OK, EXIT_CONFIG, EXIT_IO, EXIT_INTERNAL = 0, 2, 3, 4
ENGINES = ("exact", "boxball", "activespin", "compare")


class ConfigError(ParameterError):
    pass


@dataclass
class ExperimentConfig:
    engine: str = "exact"
    xi: float = 0.0
    theta: float = math.pi / 4
    zeta: float = 0.0
    chi: float = math.pi
    r0: float = 1 / math.sqrt(2)
    phi0: float = 0.0
    r1: float = 1 / math.sqrt(2)
    phi1: float = -math.pi / 2
    N: int = 1_000_000
    steps: int = 100
    trials: int = 1
    seed: int = 0
    n_sweep: list[int] = field(default_factory=lambda: [100, 10_000, 1_000_000])
    hop_rate: float = 0.5
    bias: float = 1.0
    out_dir: str = "boxwalk-out"
    save_trajectories: bool = False
    snapshot: bool = False
    fpt_target: int | None = None

    def coin(self) -> CoinParams:
        return CoinParams(self.xi, self.theta, self.zeta, self.chi)

    def initial(self) -> QubitSpec:
        norm = math.hypot(self.r0, self.r1)
        return QubitSpec(self.r0 / norm, self.phi0, self.r1 / norm, self.phi1)

    def run_config(self, total: int | None = None) -> boxball.RunConfig:
        return boxball.RunConfig(
            self.coin(), self.initial(), self.N if total is None else total, self.steps, self.seed, self.trials
        )

    def spin(self) -> activespin.SpinParams:
        return activespin.SpinParams(self.hop_rate, self.bias)

    def echo(self) -> dict:
        d = asdict(self)
        d.pop("out_dir")
        return d


def _validate(cfg: ExperimentConfig) -> ExperimentConfig:
    def need(ok: bool, name: str, msg: str) -> None:
        if not ok:
            raise ConfigError(f"{name}: {msg}")

    need(cfg.engine in ENGINES, "engine", f"must be one of {', '.join(ENGINES)}")
    for name in ("xi", "theta", "zeta", "chi", "r0", "phi0", "r1", "phi1", "hop_rate", "bias"):
        need(math.isfinite(getattr(cfg, name)), name, "must be a finite number")
    need(0.0 <= cfg.theta <= math.pi / 2, "theta", f"got {cfg.theta!r}, accepted range [0, pi/2] radians")
    need(cfg.r0 >= 0 and cfg.r1 >= 0, "r0/r1", "moduli must be nonnegative")
    norm2 = cfg.r0**2 + cfg.r1**2
    need(abs(norm2 - 1) <= 1e-9, "r0/r1", f"r0^2 + r1^2 = {norm2!r}, must equal 1 within 1e-9")
    need(cfg.N >= 1, "N", f"got {cfg.N}, must be >= 1")
    need(cfg.steps >= 0, "steps", f"got {cfg.steps}, must be >= 0")
    need(cfg.trials >= 1, "trials", f"got {cfg.trials}, must be >= 1")
    need(0 <= cfg.seed < 2**64, "seed", "must lie in [0, 2^64)")
    need(len(cfg.n_sweep) > 0 and all(n >= 1 for n in cfg.n_sweep), "n_sweep", "needs positive ball counts")
    need(cfg.hop_rate >= 0, "hop_rate", f"got {cfg.hop_rate!r}, accepted range [0, 0.5]")
    need(2 * cfg.hop_rate <= 1, "hop_rate", f"got {cfg.hop_rate!r}, accepted range [0, 0.5] (2D <= 1)")
    need(0.0 <= cfg.bias <= 1.0, "bias", f"got {cfg.bias!r}, accepted range [0, 1]")
    return cfg


def _int_list(text: str) -> list[int]:
    try:
        return [int(float(v)) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="boxwalk", description="Classical box-ball emulation of discrete-time quantum walks.")
    S = argparse.SUPPRESS
    p.add_argument("--config", type=Path, help="JSON file with any of the options below; flags win")
    p.add_argument("--engine", choices=ENGINES, default=S)
    for name in ("xi", "theta", "zeta", "chi", "r0", "phi0", "r1", "phi1"):
        p.add_argument(f"--{name}", type=float, default=S, help=None if name.startswith("r") else "radians")
    p.add_argument("-N", type=int, default=S, dest="N", help="number of balls/particles")
    p.add_argument("--steps", type=int, default=S)
    p.add_argument("--trials", type=int, default=S)
    p.add_argument("--seed", type=int, default=S)
    p.add_argument("--n-sweep", type=_int_list, default=S, dest="n_sweep", help="e.g. 100,10000,1000000")
    p.add_argument("--hop-rate", type=float, default=S, dest="hop_rate", help="D, active spin engine")
    p.add_argument("--bias", type=float, default=S, help="epsilon, active spin engine")
    p.add_argument("--out-dir", default=S, dest="out_dir")
    p.add_argument("--save-trajectories", action="store_true", default=S, dest="save_trajectories")
    p.add_argument("--snapshot", action="store_true", default=S, help="write trial 0's final state")
    p.add_argument("--fpt-target", type=int, default=S, dest="fpt_target")
    return p


def parse_config(argv: list[str] | None = None) -> ExperimentConfig:
    """Merge defaults, an optional JSON config file and command-line flags."""
    ns = vars(build_parser().parse_args(argv))
    values: dict = {}
    path = ns.pop("config", None)
    if path is not None:
        try:
            values.update(json.loads(Path(path).read_text()))
        except OSError as exc:
            raise ConfigError(f"config: cannot read {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config: {path} is not valid JSON: {exc}") from exc
    values.update(ns)
    known = set(ExperimentConfig.__dataclass_fields__)
    unknown = sorted(set(values) - known)
    if unknown:
        raise ConfigError(f"config: unknown keys {unknown}")
    try:
        cfg = ExperimentConfig(**values)
        cfg.xi, cfg.theta, cfg.zeta, cfg.chi = float(cfg.xi), float(cfg.theta), float(cfg.zeta), float(cfg.chi)
        cfg.r0, cfg.phi0, cfg.r1, cfg.phi1 = float(cfg.r0), float(cfg.phi0), float(cfg.r1), float(cfg.phi1)
        cfg.hop_rate, cfg.bias = float(cfg.hop_rate), float(cfg.bias)
        cfg.N, cfg.steps, cfg.trials, cfg.seed = int(cfg.N), int(cfg.steps), int(cfg.trials), int(cfg.seed)
        cfg.n_sweep = [int(n) for n in cfg.n_sweep]
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"config: {exc}") from exc
    return _validate(cfg)


def _moments(dist) -> dict:
    mean, std = spreading_moments(dist)
    return {"mean": mean, "std_dev": std}


def _classical(cfg: ExperimentConfig, out: Path, metrics: dict) -> None:
    run = cfg.run_config()
    oracle = oracle_distribution(run)
    spin = cfg.spin() if cfg.engine == "activespin" else None
    agg = aggregate_trials(
        run,
        spin=spin,
        keep_trajectories=cfg.save_trajectories,
        fpt_target=cfg.fpt_target,
        oracle=oracle,
    )
    occ = agg.mean_occupation.trimmed()
    ends = agg.endpoint_frequencies()
    sites = np.union1d(occ.sites, ends.sites)
    write_csv(
        out / "distribution.csv",
        ("x", "fraction", "endpoint_frequency"),
        ((int(x), occ[int(x)], ends[int(x)]) for x in sites),
    )
    metrics["tv_occupation_to_oracle"] = total_variation(occ, oracle)
    metrics["tv_endpoint_to_oracle"] = total_variation(ends, oracle)
    metrics["tv_per_trial_mean"] = float(np.mean(agg.per_trial_tv))
    metrics["endpoint_max_binomial_stderr"] = float(binomial_stderr(oracle.mass, cfg.trials).max())
    metrics["occupation_moments"] = _moments(occ)
    metrics["endpoint_moments"] = _moments(ends)
    metrics["oracle_moments"] = _moments(oracle)
    if agg.first_passage is not None:
        hit = [t for t in agg.first_passage if t is not None]
        metrics["first_passage"] = {
            "target": cfg.fpt_target,
            "reached": len(hit),
            "trials": cfg.trials,
            "mean_time": float(np.mean(hit)) if hit else None,
        }
    if agg.trajectories is not None:
        for k, tr in enumerate(agg.trajectories):
            write_trajectory(out / "trajectories" / f"trial_{k:05d}.csv", tr)
    if cfg.snapshot:
        rng = trial_rng(cfg.seed, 0)
        if spin is None:
            final, _ = boxball.run_lattice(run, rng)
            write_box_snapshot(out / "snapshot.csv", boxball.snapshot_rows(final))
        else:
            final = activespin.run_active(run, spin, rng)
            write_spin_snapshot(out / "snapshot.csv", activespin.snapshot_rows(final))


def run_experiment(cfg: ExperimentConfig) -> int:
    """Run the configured engine and write its result files into ``cfg.out_dir``."""
    out = Path(cfg.out_dir)
    started = time.perf_counter()
    metrics: dict = {"engine": cfg.engine, "seed": cfg.seed, "config": cfg.echo()}
    try:
        out.mkdir(parents=True, exist_ok=True)
        if cfg.engine == "exact":
            dist = oracle_distribution(cfg.run_config())
            write_csv(out / "distribution.csv", ("x", "probability"), zip(dist.sites.tolist(), dist.mass.tolist()))
            metrics["total_probability"] = dist.total()
            metrics["moments"] = _moments(dist)
        elif cfg.engine == "compare":
            run = cfg.run_config()
            dist = oracle_distribution(run)
            write_csv(out / "distribution.csv", ("x", "probability"), zip(dist.sites.tolist(), dist.mass.tolist()))
            rows = convergence_sweep(run, cfg.n_sweep)
            write_csv(out / "sweep.csv", ("N", "tv_mean", "tv_stderr"), ((r.N, r.tv_mean, r.tv_stderr) for r in rows))
            tvs = [r.tv_mean for r in rows]
            metrics["sweep"] = [asdict(r) for r in rows]
            metrics["tv_decreasing"] = all(a > b for a, b in zip(tvs, tvs[1:]))
            metrics["moments"] = _moments(dist)
        else:
            _classical(cfg, out, metrics)
        write_json(out / "metrics.json", metrics)
        write_json(out / "runtime.json", {"runtime_seconds": time.perf_counter() - started})
    except OSError as exc:
        print(f"boxwalk: I/O error at {getattr(exc, 'filename', None) or out}: {exc.strerror or exc}", file=sys.stderr)
        return EXIT_IO
    except ConservationError as exc:
        print(f"boxwalk: invariant violation: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except ParameterError as exc:
        print(f"boxwalk: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception as exc:  # noqa: BLE001 - surfaced as a diagnostic, never a traceback
        print(f"boxwalk: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    try:
        cfg = parse_config(argv)
    except ConfigError as exc:
        print(f"boxwalk: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SystemExit as exc:  # argparse already printed its message
        return EXIT_OK if exc.code == 0 else EXIT_CONFIG
    return run_experiment(cfg)


if __name__ == "__main__":
    sys.exit(main())
