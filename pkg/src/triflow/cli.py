"""Command-line interface.

Subcommands mirror the library surface: dephase (time series), nm and
nm-surface (witness values and the temperature/size sweep), appendix and
scenario (reference data sets), report (correlation report for a state
file), verify (the invariant suite).
"""

from __future__ import annotations

import argparse
import sys

from .config import (
    RunConfig,
    SCENARIO_NAMES,
    config_from_mapping,
    load_config,
    parse_overrides,
)
from .output import json_bytes, read_state_file
from .scenarios import (
    ScenarioConfig,
    appendix_payload,
    dephase_payload,
    nm_payload,
    run_scenario,
    surface_payload,
)


def _emit(payload: bytes, out: str) -> None:
    if out == "-":
        sys.stdout.buffer.write(payload)
    else:
        with open(out, "wb") as fh:
            fh.write(payload)


def _run_config(args) -> RunConfig:
    cfg = RunConfig()
    if args.config:
        cfg = load_config(args.config, cfg)
    if args.set:
        cfg = config_from_mapping(parse_overrides(args.set), cfg)
    return cfg


def _cmd_dephase(args) -> int:
    payload = dephase_payload(_run_config(args), metadata_head={"command": "dephase"})
    _emit(payload, args.out)
    return 0


def _cmd_nm(args) -> int:
    _emit(nm_payload(_run_config(args), args.t), args.out)
    return 0


def _cmd_nm_surface(args) -> int:
    overrides = parse_overrides(args.set) if args.set else {}
    if args.beta:
        lo, hi, count = args.beta.split(":")
        overrides.update(betaMin=lo, betaMax=hi, betaPoints=count)
    if args.modes:
        lo, hi = args.modes.split(":")
        overrides.update(modesMin=lo, modesMax=hi)
    if args.t is not None:
        overrides["t"] = args.t
    from .config import surface_params

    _emit(surface_payload(surface_params(overrides)), args.out)
    return 0


def _cmd_appendix(args) -> int:
    _emit(appendix_payload({"gridPoints": args.grid}), args.out)
    return 0


def _cmd_report(args) -> int:
    from .correlations import correlation_report

    state = read_state_file(args.state)
    report = correlation_report(state)
    _emit(json_bytes(report.to_dict()), args.out)
    return 0


def _cmd_verify(args) -> int:
    from .verify import run_all

    base = None
    if args.config:
        base = load_config(args.config)
    report = run_all(
        seed=args.seed,
        eps_trunc=args.eps_trunc,
        modes_cap=args.modes_cap,
        base=base,
    )
    _emit(json_bytes(report.to_payload()), args.out)
    return 0 if report.passed else 1


def _cmd_scenario(args) -> int:
    overrides = parse_overrides(args.set) if args.set else {}
    cfg = ScenarioConfig(
        name=args.name,
        overrides=overrides,
        out_path=args.out,
        fmt=args.format,
        seed=args.seed,
    )
    return run_scenario(cfg)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="triflow",
        description="Tripartite information measures and finite-bath dephasing.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, with_config=True):
        if with_config:
            p.add_argument("--config", help="flat TOML config file")
            p.add_argument(
                "--set", action="append", metavar="KEY=VALUE",
                help="override one config key (repeatable; wins over --config)",
            )
        p.add_argument("--out", default="-", help="output path, '-' for stdout")

    p = sub.add_parser("dephase", help="evolved coefficients and information time series")
    add_common(p)
    p.set_defaults(func=_cmd_dephase)

    p = sub.add_parser("nm", help="non-Markovianity witness values")
    add_common(p)
    p.add_argument("--t", type=float, default=1e4, help="averaging horizon")
    p.set_defaults(func=_cmd_nm)

    p = sub.add_parser("nm-surface", help="witness over a (modes, temperature) grid")
    p.add_argument("--beta", metavar="LO:HI:COUNT", help="inverse temperature grid")
    p.add_argument("--modes", metavar="LO:HI", help="mode count range, inclusive")
    p.add_argument("--t", type=float, default=None, help="averaging horizon")
    p.add_argument(
        "--set", action="append", metavar="KEY=VALUE",
        help="override a surface key (omega0, g0, gA, gB, deltaMultiplier, ...)",
    )
    p.add_argument("--out", default="-", help="output path, '-' for stdout")
    p.set_defaults(func=_cmd_nm_surface)

    p = sub.add_parser("appendix", help="closed forms vs numerics on the noisy family")
    p.add_argument("--grid", type=int, default=101, help="number of x samples")
    p.add_argument("--out", default="-", help="output path, '-' for stdout")
    p.set_defaults(func=_cmd_appendix)

    p = sub.add_parser("report", help="correlation report for a JSON state file")
    p.add_argument("state", help="state file (dims + row-major [re, im] entries)")
    p.add_argument("--out", default="-", help="output path, '-' for stdout")
    p.set_defaults(func=_cmd_report)

    p = sub.add_parser("verify", help="run the full invariant suite")
    p.add_argument("--config", help="flat TOML config for the oracle bath")
    p.add_argument("--eps-trunc", type=float, default=1e-12, help="bath truncation weight")
    p.add_argument("--modes-cap", type=int, default=3, help="max oracle mode count")
    p.add_argument("--seed", type=int, default=1234)
    p.add_argument("--out", default="-", help="output path, '-' for stdout")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("scenario", help="run a named reference scenario")
    p.add_argument("name", choices=SCENARIO_NAMES)
    p.add_argument(
        "--set", action="append", metavar="KEY=VALUE", help="override one key"
    )
    p.add_argument("--out", default=None, help="output path (default: <name>.<ext>)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--seed", type=int, default=1234)
    p.set_defaults(func=_cmd_scenario)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"triflow: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
