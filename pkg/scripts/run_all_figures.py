#!/usr/bin/env python3
"""Reproduce every built-in result figure as a CSV under results/.

At the default 500 trials the full set takes tens of minutes, dominated
by the n = 512 points of fig3/fig4/fig10; pass --trials 50 for a quick
look or --workers N to fan trials out over processes.
"""

import argparse
import sys

from beamsim.cli import main as beamsim
from beamsim.experiments import FIGURE_IDS


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--trials", type=int, default=500)
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--out", default="results")
    parser.add_argument("--workers", type=int, default=1)
    args = parser.parse_args()

    for fig_id in FIGURE_IDS:
        argv = [
            "figure", fig_id,
            "--trials", str(args.trials),
            "--out", args.out,
            "--workers", str(args.workers),
        ]
        if args.seed is not None:
            argv += ["--seed", str(args.seed)]
        code = beamsim(argv)
        if code != 0:
            return code
    return 0


if __name__ == "__main__":
    sys.exit(main())
