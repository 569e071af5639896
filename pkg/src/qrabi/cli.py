"""Command-line front end.

    qrabi simulate SCENARIO.json [SCENARIO.json ...] --out DIR [--oracle] [--jobs N]
    qrabi preset NAME [NAME ...] --out DIR [--oracle] [--jobs N]
    qrabi list-presets

Exit codes: 0 success, 2 configuration error, 3 oracle mismatch, 4 I/O error.
"""
from __future__ import annotations

import argparse
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .scenario import (
    RunIOError,
    Scenario,
    ScenarioError,
    parse_scenario,
    preset,
    preset_names,
    run,
    with_oracle,
)
from .squeezed_state import SqueezeDomainError, TruncationError

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_ORACLE = 3
EXIT_IO = 4

log = logging.getLogger("qrabi")


def _run_one(job: tuple[Scenario, str]) -> dict:
    scenario, out = job
    return run(scenario, out)


def _execute(jobs: list[tuple[Scenario, str]], workers: int) -> int:
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            manifests = list(pool.map(_run_one, jobs))
    else:
        manifests = [_run_one(j) for j in jobs]
    status = EXIT_OK
    for (scenario, out), manifest in zip(jobs, manifests):
        print(f"{out}: {len(manifest['files'])} files, n_max={manifest['n_max']}")
        report = manifest.get("oracle")
        if report is not None:
            for rep in report["reports"]:
                verdict = "PASS" if rep["passed"] else "FAIL"
                print(
                    f"  {verdict} {rep['model']:<3} {rep['observable']:<10} "
                    f"max|diff|={rep['max_abs_diff']:.3e} at tau={rep['argmax_tau']:.6g}"
                )
            if not report["passed"]:
                status = EXIT_ORACLE
    return status


def _targets(names: list[str], out: str) -> list[str]:
    if len(names) == 1:
        return [out]
    return [str(Path(out) / name) for name in names]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qrabi", description="JC / anti-JC dynamics with a squeezed coherent field"
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run scenario documents")
    sim.add_argument("scenarios", nargs="+", help="scenario JSON file(s)")
    pre = sub.add_parser("preset", help="run a built-in figure preset")
    pre.add_argument("names", nargs="+", help="preset name(s), or 'all'")
    for p in (sim, pre):
        p.add_argument("--out", required=True, help="output directory")
        p.add_argument("--oracle", action="store_true", help="cross-check against the matrix oracle")
        p.add_argument("--jobs", type=int, default=1, help="parallel scenario runs")
    sub.add_parser("list-presets", help="print preset names")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)

    if args.command == "list-presets":
        for name in preset_names():
            s = preset(name)
            print(f"{name}\t{s.model}\tr={s.r:g}\t{','.join(s.outputs)}")
        return EXIT_OK

    try:
        if args.command == "simulate":
            scenarios = []
            for path in args.scenarios:
                try:
                    text = Path(path).read_text()
                except OSError as exc:
                    print(f"error: cannot read {path}: {exc.strerror}", file=sys.stderr)
                    return EXIT_IO
                scenarios.append(parse_scenario(text))
            names = [Path(p).stem for p in args.scenarios]
        else:
            names = preset_names() if args.names == ["all"] else args.names
            scenarios = [preset(n) for n in names]
        if args.oracle:
            scenarios = [with_oracle(s) for s in scenarios]
        jobs = list(zip(scenarios, _targets(names, args.out)))
        return _execute(jobs, max(1, args.jobs))
    except (ScenarioError, SqueezeDomainError, TruncationError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except RunIOError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
