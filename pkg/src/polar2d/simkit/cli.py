"""Command-line entry point: ``p2d {construct,simulate,spectrum,csialign}``."""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from ..exceptions import ConfigError, DimensionError
from ..mimo import eigenvalues
from ..reliability import construct, construction_csv, per_stream_snr
from .config import WORKERS_ENV, SimConfig, load_config
from .engine import db_to_linear, draw_trials
from .experiments import csi_alignment_csv, csi_alignment_experiment, spectrum_experiment
from .sweep import run_sweep

EXIT_INVALID = 2


def _pair(text: str) -> tuple[int, int]:
    try:
        s, l = text.lower().split("x")
        return int(s), int(l)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected SxL such as 4x8, got {text!r}") from None


def _add_sim_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON experiment description")
    p.add_argument("--s-streams", type=int)
    p.add_argument("--l-rx", type=int)
    p.add_argument("--t-slots", type=int)
    p.add_argument("--rate", type=float)
    p.add_argument("--modulation")
    p.add_argument("--construction")
    p.add_argument("--csi")
    p.add_argument("--pilot-len", type=int)
    p.add_argument("--esn0-db", type=float, nargs="+", help="sweep points in dB, e.g. 0 2 4")
    p.add_argument("--max-frames", type=int)
    p.add_argument("--target-frame-errors", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--workers", type=int)
    p.add_argument("-o", "--out", help="output CSV (default: stdout)")


def _sim_config(args) -> SimConfig:
    keys = ("s_streams", "l_rx", "t_slots", "rate", "modulation", "construction", "csi",
            "pilot_len", "esn0_db", "max_frames", "target_frame_errors", "seed", "workers")
    overrides = {k: getattr(args, k, None) for k in keys}
    if args.config:
        return load_config(args.config, overrides)
    data = {k: v for k, v in overrides.items() if v is not None}
    if "workers" not in data and os.environ.get(WORKERS_ENV):
        try:
            data["workers"] = int(os.environ[WORKERS_ENV])
        except ValueError:
            raise ConfigError(f"{WORKERS_ENV} must be an integer") from None
    return SimConfig(**data)


def _emit(text: str, out) -> None:
    if out:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_construct(args) -> None:
    cfg = _sim_config(args)
    if args.snr_db is not None:
        gammas = 10.0 ** (np.asarray(args.snr_db) / 10.0)
        if gammas.size != cfg.s_streams:
            raise ConfigError(f"--snr-db needs {cfg.s_streams} values, got {gammas.size}")
    else:
        if args.lambdas is not None:
            lam = np.asarray(args.lambdas)
            if lam.size != cfg.s_streams:
                raise ConfigError(f"--lambdas needs {cfg.s_streams} values, got {lam.size}")
        else:
            lam = eigenvalues(draw_trials(cfg, args.trial, args.trial + 1).h)[0]
        gammas = per_stream_snr(lam, db_to_linear(cfg.esn0_db[0]))
    result = construct(gammas, cfg.t_slots, cfg.k_info, cfg.construction)
    _emit(construction_csv(result, cfg.s_streams, cfg.t_slots), args.out)


def cmd_simulate(args) -> None:
    cfg = _sim_config(args)
    result = run_sweep(cfg)
    if args.out:
        result.write(args.out)
    else:
        sys.stdout.write(result.to_csv())
        print(json.dumps(result.metadata()), file=sys.stderr)


def cmd_spectrum(args) -> None:
    res = spectrum_experiment(args.configs, args.realizations, args.seed)
    _emit(res.to_csv(), args.out)
    for (s, l), v in res.spread().items():
        print(f"{s}x{l}: mean lambda_1/lambda_S = {v:.3f}", file=sys.stderr)


def cmd_csialign(args) -> None:
    cfg = _sim_config(args)
    pts = csi_alignment_experiment(cfg, args.trials, args.pilot_esn0_db)
    _emit(csi_alignment_csv(pts), args.out)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="p2d", description="Spatiotemporal 2-D polar code toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", help="frozen set for one SNR profile")
    _add_sim_flags(p)
    src = p.add_mutually_exclusive_group()
    src.add_argument("--snr-db", type=float, nargs="+", help="per-stream SNRs in dB")
    src.add_argument("--lambdas", type=float, nargs="+", help="eigenvalues, scaled by the first esn0_db point")
    p.add_argument("--trial", type=int, default=0, help="channel draw used when no profile is given")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("simulate", help="BER/FER sweep over esn0_db")
    _add_sim_flags(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("spectrum", help="eigenvalue spectra of i.i.d. Rayleigh channels")
    p.add_argument("--configs", type=_pair, nargs="+", default=[(4, 8), (8, 16)], metavar="SxL")
    p.add_argument("--realizations", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("csialign", help="transmitter/receiver frozen-set agreement")
    _add_sim_flags(p)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--pilot-esn0-db", type=float, nargs="+", help="pilot SNR points (default: tied to data)")
    p.set_defaults(func=cmd_csialign)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except (ConfigError, DimensionError, ValueError, OSError, TypeError) as exc:
        print(f"p2d {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    return 0


if __name__ == "__main__":
    sys.exit(main())
