"""Command-line entry point: ``dmimo-sim run`` and ``dmimo-sim sweep``."""
from __future__ import annotations

import argparse
import json
import logging
import platform
import sys
from pathlib import Path
from typing import List, Sequence

import numpy as np

from . import __version__
from .config import ConfigError, ScenarioConfig, default_sweep, load_scenario, load_sweep
from .metrics import cdf_table, summary_json
from .simulator import RunReport, make_topology, run_scenario
from .topology import dump_segments

log = logging.getLogger("dmimo_routing")


def write_report(report: RunReport, out_dir: Path) -> Path:
    d = out_dir / report.scenario_id
    d.mkdir(parents=True, exist_ok=True)
    (d / "metrics.csv").write_text(cdf_table(report.batch))
    (d / "summary.json").write_text(summary_json(report.batch))
    dump_segments(make_topology(report.config), d / "segments.csv")
    manifest = {
        "scenario_id": report.scenario_id,
        "config": report.config.to_dict(),
        "master_seed": report.config.master_seed,
        "versions": {
            "dmimo_routing": __version__,
            "python": platform.python_version(),
            "numpy": np.__version__,
        },
        "diagnostics": report.diagnostics,
        "wall_clock_s": report.wall_clock_s,
    }
    (d / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return d


def _apply_overrides(cfgs: Sequence[ScenarioConfig], args) -> List[ScenarioConfig]:
    changes = {}
    if args.seed is not None:
        changes["master_seed"] = args.seed
    if args.realizations is not None:
        changes["realizations"] = args.realizations
    return [c.replace(**changes) for c in cfgs] if changes else list(cfgs)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dmimo-sim", description=__doc__)
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)
    for name, help_ in (("run", "run a single scenario"), ("sweep", "run a scenario sweep")):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("-c", "--config", type=Path, help="TOML config (defaults: K=8 cap-10 scenario / K x capacity sweep)")
        sp.add_argument("-o", "--out", type=Path, default=Path("results"), help="output directory")
        sp.add_argument("--seed", type=int, help="override the master seed")
        sp.add_argument("--realizations", type=int, help="override the realization count")
        sp.add_argument("-j", "--jobs", type=int, default=1, help="worker processes per scenario")
        sp.add_argument("-v", "--verbose", action="store_true")
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "run":
            cfgs = [load_scenario(args.config) if args.config else ScenarioConfig()]
        else:
            cfgs = load_sweep(args.config) if args.config else default_sweep()
        cfgs = _apply_overrides(cfgs, args)
    except (ConfigError, OSError, TypeError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2

    for cfg in cfgs:
        report = run_scenario(cfg, jobs=args.jobs)
        d = write_report(report, args.out)
        s = json.loads((d / "summary.json").read_text())
        log.info("%s done in %.1fs", cfg.name, report.wall_clock_s)
        median = s["sinr_db_median"]
        print(f"{cfg.name}: drop_rate={s['drop_rate']:.3f} "
              f"median_sinr_db={'n/a' if median is None else f'{median:.2f}'} "
              f"mean_util={s['segment_utilization_mean']:.3f} -> {d}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
