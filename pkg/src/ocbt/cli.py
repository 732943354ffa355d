"""Experiment runner: binds JSON configs to the metrics suite and emits CSVs.

Subcommands: window, timeeff, complexity, psd, ber, analyze.  Every
experiment is deterministic given the seed; reruns produce byte-identical
CSV files for any worker count.  Exit codes: 0 success, 2 config error
(message names the offending field), 1 runtime failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from ocbt.core import (ConfigError, DimensionError, SystemParams, derive_stream,
                       params_from_dict, validate_params)
from ocbt.channel import veha_realization, vehicular_a_profile
from ocbt.equalizer import EqualizerSpec
from ocbt.metrics import (BerConfig, UnknownSystem, canonical_system,
                          complexity_cm, generate_stream,
                          interference_decomposition, psd_welch,
                          run_ber_experiment, time_efficiency)
from ocbt.modems import block_len, make_scheme
from ocbt.windows import build_ocbt_window

EXPERIMENTS = ("ber", "psd", "timeeff", "complexity", "window", "analyze")

_DEFAULT_SYSTEMS = {
    "ber": ("OCBT", "CP-OFDM", "W-OFDM"),
    "psd": ("OCBT", "CP-OFDM", "W-OFDM"),
    "timeeff": ("OCBT", "CP-OFDM", "FBMC", "W-OFDM"),
    "complexity": ("OFDM", "FBMC", "W-OFDM", "OCBT"),
    "analyze": ("OCBT",),
    "window": ("OCBT",),
}


@dataclass
class ExperimentConfig:
    experiment: str
    params: SystemParams
    systems: tuple
    snr_grid_db: tuple = (0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0)
    channel: str = "veha"
    fir_taps: tuple | None = None
    equalizer: str = "mmse"
    output_dir: str = "out"
    # ber
    target_errors: int = 200
    max_bits: int = 10_000_000
    blocks_per_trial: int = 16
    batch_trials: int = 8
    workers: int = 1
    # psd
    segment: int = 1024
    overlap: int | None = None
    n_blocks: int | None = None
    active_subcarriers: int | None = None
    # timeeff
    n_values: tuple = tuple(range(1, 65))
    # analyze
    noise_draws: int = 128
    ibi_draws: int = 64


_CONFIG_KEYS = {f.name for f in dataclasses.fields(ExperimentConfig)} - {"fir_taps"}


def _default_params(experiment: str) -> SystemParams:
    if experiment == "psd":
        return SystemParams.with_derived_guards(M=64, L=20)
    return SystemParams.with_derived_guards()


def _parse_channel(value) -> tuple[str, tuple | None]:
    if isinstance(value, str):
        if value not in ("awgn", "veha"):
            raise ConfigError(f"channel must be 'awgn', 'veha' or a fir object, got {value!r}")
        return value, None
    if isinstance(value, dict):
        unknown = set(value) - {"type", "taps"}
        if unknown:
            raise ConfigError(f"unknown channel field(s): {sorted(unknown)}")
        if value.get("type") != "fir" or "taps" not in value:
            raise ConfigError("channel object must be {'type': 'fir', 'taps': [...]}")
        taps = []
        for t in value["taps"]:
            if isinstance(t, (list, tuple)):
                if len(t) != 2:
                    raise ConfigError("channel taps entries must be numbers or [re, im] pairs")
                taps.append(complex(t[0], t[1]))
            else:
                taps.append(complex(t))
        if not taps:
            raise ConfigError("channel taps must be nonempty")
        return "fir", tuple(taps)
    raise ConfigError("channel must be a string or a fir object")


def load_experiment_config(experiment: str, config_path: str | None,
                           seed: int | None, out_dir: str | None) -> ExperimentConfig:
    data: dict = {}
    if config_path is not None:
        try:
            with open(config_path, "r", encoding="utf-8") as fh:
                data = json.load(fh)
        except OSError as exc:
            raise ConfigError(f"config: cannot read {config_path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config: invalid JSON in {config_path}: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError("config: top level must be a JSON object")
    unknown = set(data) - _CONFIG_KEYS
    if unknown:
        raise ConfigError(f"config: unknown field(s): {sorted(unknown)}")
    if "experiment" in data and data["experiment"] != experiment:
        raise ConfigError(
            f"experiment: config says {data['experiment']!r} but subcommand is {experiment!r}")

    params = _default_params(experiment)
    if "params" in data:
        if not isinstance(data["params"], dict):
            raise ConfigError("params: must be a JSON object")
        merged = {**dataclasses.asdict(params), **data["params"]}
        params = params_from_dict(merged)
    if seed is not None:
        params = validate_params(dataclasses.replace(params, seed=seed))

    cfg = ExperimentConfig(experiment=experiment, params=params,
                           systems=_DEFAULT_SYSTEMS[experiment])
    if "systems" in data:
        systems = data["systems"]
        if not isinstance(systems, list) or not systems:
            raise ConfigError("systems: must be a nonempty list")
        try:
            for s in systems:
                canonical_system(s)
        except UnknownSystem as exc:
            raise ConfigError(f"systems: {exc}") from exc
        cfg.systems = tuple(systems)
    if "channel" in data:
        cfg.channel, cfg.fir_taps = _parse_channel(data["channel"])
    if "equalizer" in data:
        eq = data["equalizer"]
        if not isinstance(eq, dict) or set(eq) - {"kind"}:
            raise ConfigError("equalizer: must be an object with a 'kind' field")
        if eq.get("kind") not in ("zf", "mmse"):
            raise ConfigError(f"equalizer.kind: must be 'zf' or 'mmse', got {eq.get('kind')!r}")
        cfg.equalizer = eq["kind"]
    for name in ("snr_grid_db", "n_values"):
        if name in data:
            vals = data[name]
            if not isinstance(vals, list) or not vals:
                raise ConfigError(f"{name}: must be a nonempty list")
            setattr(cfg, name, tuple(vals))
    for name in ("output_dir",):
        if name in data:
            cfg.output_dir = str(data[name])
    for name in ("target_errors", "max_bits", "blocks_per_trial", "batch_trials",
                 "workers", "segment", "overlap", "n_blocks",
                 "active_subcarriers", "noise_draws", "ibi_draws"):
        if name in data:
            value = data[name]
            if not isinstance(value, int) or value < 0:
                raise ConfigError(f"{name}: must be a nonnegative integer")
            setattr(cfg, name, value)
    if out_dir is not None:
        cfg.output_dir = out_dir
    return cfg


def _fmt(x) -> str:
    if isinstance(x, float):
        return repr(x)
    return str(x)


def _write_csv(path: str, header: list[str], rows: list[tuple]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def _out_path(cfg: ExperimentConfig, name: str) -> str:
    os.makedirs(cfg.output_dir, exist_ok=True)
    return os.path.join(cfg.output_dir, name)


def _cmd_window(cfg: ExperimentConfig) -> int:
    p = cfg.params
    profile = build_ocbt_window(p.M, p.L, p.beta)
    rows = [(i, float(v)) for i, v in enumerate(profile.per_symbol)]
    path = _out_path(cfg, "window.csv")
    _write_csv(path, ["index", "value"], rows)
    print(f"window: M={p.M} L={p.L} beta={p.beta} mean={profile.mean:.6f} -> {path}")
    return 0


def _cmd_timeeff(cfg: ExperimentConfig) -> int:
    p = cfg.params
    rows = []
    for system in cfg.systems:
        reports = [time_efficiency(system, p.M, int(n), p.K, p.cp_len,
                                   p.cpw_len, p.cs_len, p.w_len)
                   for n in cfg.n_values]
        rows.extend((r.system, r.N, float(r.r_T)) for r in reports)
        span = f"{float(reports[0].r_T):.4f}..{float(reports[-1].r_T):.4f}"
        print(f"timeeff: {canonical_system(system)} r_T {span} over N={cfg.n_values[0]}..{cfg.n_values[-1]}")
    path = _out_path(cfg, "timeeff.csv")
    _write_csv(path, ["system", "N", "r_T"], rows)
    return 0


def _cmd_complexity(cfg: ExperimentConfig) -> int:
    p = cfg.params
    rows = []
    for system in cfg.systems:
        rep = complexity_cm(system, p.M, p.K, p.cp_len, p.cpw_len, p.cs_len)
        rows.append((rep.system, rep.cm_per_symbol))
        print(f"complexity: {rep.system} {rep.cm_per_symbol} CM/symbol")
    path = _out_path(cfg, "complexity.csv")
    _write_csv(path, ["system", "cm"], rows)
    return 0


def _cmd_psd(cfg: ExperimentConfig) -> int:
    p = cfg.params
    overlap = cfg.segment // 2 if cfg.overlap is None else cfg.overlap
    n_active = p.M // 2 if cfg.active_subcarriers is None else cfg.active_subcarriers
    rows = []
    for system in cfg.systems:
        name = canonical_system(system)
        scheme = make_scheme(name, p)
        n_blocks = cfg.n_blocks
        if n_blocks is None:
            n_blocks = max(1, (1 << 17) // block_len(scheme))
        rng = derive_stream(p.seed, f"psd/{name}")
        stream = generate_stream(scheme, n_blocks, n_active, rng)
        est = psd_welch(stream, cfg.segment, overlap)
        rows.extend((name, float(f), float(db))
                    for f, db in zip(est.freqs, est.power_db))
        print(f"psd: {name} {stream.size} samples, segment={cfg.segment}, "
              f"active={n_active}/{p.M}")
    path = _out_path(cfg, "psd.csv")
    _write_csv(path, ["system", "freq", "power_db"], rows)
    return 0


def _cmd_ber(cfg: ExperimentConfig) -> int:
    ber_cfg = BerConfig(params=cfg.params, systems=cfg.systems,
                        snr_grid_db=cfg.snr_grid_db, channel=cfg.channel,
                        fir_taps=cfg.fir_taps, eq_kind=cfg.equalizer,
                        target_errors=cfg.target_errors, max_bits=cfg.max_bits,
                        blocks_per_trial=cfg.blocks_per_trial,
                        batch_trials=cfg.batch_trials, workers=cfg.workers)
    points = run_ber_experiment(ber_cfg)
    rows = [(pt.system, pt.snr_db, pt.bits, pt.errors, pt.ber) for pt in points]
    path = _out_path(cfg, "ber.csv")
    _write_csv(path, ["system", "snr_db", "bits", "errors", "ber"], rows)
    for system in dict.fromkeys(pt.system for pt in points):
        pts = [pt for pt in points if pt.system == system]
        lo, hi = pts[0], pts[-1]
        print(f"ber: {system} {lo.ber:.3e} @ {lo.snr_db:g} dB -> "
              f"{hi.ber:.3e} @ {hi.snr_db:g} dB ({cfg.channel}, {cfg.equalizer})")
    return 0


def _cmd_analyze(cfg: ExperimentConfig) -> int:
    p = cfg.params
    scheme = make_scheme("OCBT", p)
    if cfg.channel == "awgn":
        taps = None
    elif cfg.channel == "fir":
        taps = np.asarray(cfg.fir_taps, dtype=complex)
    else:
        taps = veha_realization(vehicular_a_profile(p.sample_rate),
                                derive_stream(p.seed, "analyze/channel"))
    rows = []
    for snr_db in cfg.snr_grid_db:
        noise_var = 10.0 ** (-float(snr_db) / 10.0)
        eq = EqualizerSpec(cfg.equalizer, noise_var)
        rng = derive_stream(p.seed, f"analyze/{snr_db:.6g}")
        br = interference_decomposition(scheme, taps, eq, noise_var, rng,
                                        noise_draws=cfg.noise_draws,
                                        ibi_draws=cfg.ibi_draws)
        rows.append((float(snr_db), br.desired_power, br.ici_power,
                     br.ibi_power, br.noise_power, br.sinr_db))
        print(f"analyze: snr={snr_db:g} dB desired={br.desired_power:.6f} "
              f"ici={br.ici_power:.3e} ibi={br.ibi_power:.3e} "
              f"noise={br.noise_power:.3e} sinr={br.sinr_db:.2f} dB")
    path = _out_path(cfg, "analyze.csv")
    _write_csv(path, ["snr_db", "desired_power", "ici_power", "ibi_power",
                      "noise_power", "sinr_db"], rows)
    return 0


_HANDLERS = {
    "window": _cmd_window,
    "timeeff": _cmd_timeeff,
    "complexity": _cmd_complexity,
    "psd": _cmd_psd,
    "ber": _cmd_ber,
    "analyze": _cmd_analyze,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ocbt",
                                     description="OCBT baseband experiment runner")
    sub = parser.add_subparsers(dest="experiment", required=True)
    for name in EXPERIMENTS:
        p = sub.add_parser(name, help=f"run the {name} experiment")
        p.add_argument("--config", default=None, help="JSON experiment config")
        p.add_argument("--seed", type=int, default=None, help="override the master seed")
        p.add_argument("--out", default=None, help="override the output directory")
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = load_experiment_config(args.experiment, args.config, args.seed, args.out)
    except (ConfigError, DimensionError, UnknownSystem) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    try:
        return _HANDLERS[cfg.experiment](cfg)
    except (ConfigError, DimensionError, UnknownSystem) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:    # runtime failure
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
