#!/usr/bin/env python3
"""Emit every named scenario into a data directory, one file per scenario.

fig1a, fig1c, fig1e  dephasing time series in the three bath regimes
fig2a, fig2b         conservation relation and pointer-basis runs
fig3                 witness surface over (mode count, inverse temperature)
fig4                 monogamy sweep of the noisy three-qubit family
verify               invariant suite verdict (always JSON)

Exit status is nonzero when the verify scenario reports a failed check.
"""

import argparse
import os
import sys
import time

from triflow.config import SCENARIO_NAMES
from triflow.scenarios import ScenarioConfig, run_scenario


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out-dir", default="data", help="target directory")
    parser.add_argument("--format", choices=("csv", "json"), default="csv")
    parser.add_argument(
        "--only", action="append", choices=SCENARIO_NAMES, metavar="NAME",
        help="restrict to one scenario (repeatable)",
    )
    args = parser.parse_args(argv)

    os.makedirs(args.out_dir, exist_ok=True)
    names = args.only or SCENARIO_NAMES
    worst = 0
    for name in names:
        ext = "json" if (name == "verify" or args.format == "json") else "csv"
        path = os.path.join(args.out_dir, f"{name}.{ext}")
        started = time.monotonic()
        rc = run_scenario(ScenarioConfig(name=name, out_path=path, fmt=args.format))
        status = "ok" if rc == 0 else f"exit {rc}"
        print(f"{name:7s} -> {path}  ({time.monotonic() - started:.2f}s, {status})")
        worst = max(worst, rc)
    return worst


if __name__ == "__main__":
    sys.exit(main())
