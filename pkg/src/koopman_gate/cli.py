"""Batch command-line front door.

Subcommands:

* ``run JOBFILE``: execute one job (JSON object), print one report.
* ``batch JOBSFILE``: newline-delimited jobs in, one report per line out,
  order preserved, per-job failures isolated as error reports.
* ``schema {job,report}``: print the published JSON schema.

Exit codes: 0 the run completed (any verdict), 2 config error, 3 numerical
failure.  Set KOOPMAN_GATE_LOG to a level name (for example DEBUG) to get
diagnostics on stderr.  Reports carry no timestamps, so identical configs and
seeds produce byte-identical output.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import json
import logging
import os
import sys

import numpy as np

from . import jobs
from .schemas import JOB_SCHEMA, REPORT_SCHEMA

__all__ = ["main"]

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


def _setup_logging() -> None:
    level_name = os.environ.get("KOOPMAN_GATE_LOG")
    if not level_name:
        return
    level = getattr(logging, level_name.upper(), logging.DEBUG)
    logging.basicConfig(
        stream=sys.stderr,
        level=level,
        format="%(levelname)s %(name)s: %(message)s",
    )


def _apply_cli_defaults(config: dict, args: argparse.Namespace) -> dict:
    """Fill params a job file left unspecified; explicit job values win."""
    params = dict(config.get("params", {}))
    if args.seed is not None:
        params.setdefault("seed", args.seed)
    if args.r_max is not None:
        params.setdefault("r_max", args.r_max)
    if args.n_max is not None:
        params.setdefault("n_max", args.n_max)
    if args.tolerance_profile is not None:
        params.setdefault("tolerance_profile", args.tolerance_profile)
    out = dict(config)
    if params:
        out["params"] = params
    return out


def _emit(text: str, out_path: str | None) -> None:
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cmd_run(args: argparse.Namespace) -> int:
    try:
        with open(args.jobfile, "r", encoding="utf-8") as fh:
            config = json.load(fh)
    except OSError as exc:
        print(f"error: cannot read job file: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except json.JSONDecodeError as exc:
        print(f"error: malformed JSON in job file: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if not isinstance(config, dict):
        print("error: job file must hold a single JSON object", file=sys.stderr)
        return EXIT_CONFIG
    config = _apply_cli_defaults(config, args)
    try:
        report = jobs.run_job(config)
    except jobs.ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"error: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    _emit(json.dumps(report, sort_keys=True, indent=2) + "\n", args.out)
    return EXIT_OK


def _cmd_batch(args: argparse.Namespace) -> int:
    try:
        with open(args.jobsfile, "r", encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        print(f"error: cannot read jobs file: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    entries = []
    for i, line in enumerate(lines):
        if not line.strip():
            continue
        try:
            entries.append((i, json.loads(line)))
        except json.JSONDecodeError as exc:
            entries.append((i, exc))

    def work(entry):
        index, payload = entry
        if isinstance(payload, json.JSONDecodeError):
            return {
                "schema": "v1",
                "kind": "error",
                "error": {"kind": "config", "message": f"malformed JSON: {payload}", "path": None},
                "job_index": index,
            }
        return jobs.run_job_safe(_apply_cli_defaults(payload, args), index=index)

    if args.jobs > 1 and len(entries) > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=args.jobs) as pool:
            reports = list(pool.map(_batch_worker, [(e, _args_dict(args)) for e in entries]))
    else:
        reports = [work(e) for e in entries]

    text = "".join(json.dumps(r, sort_keys=True) + "\n" for r in reports)
    _emit(text, args.out)
    return EXIT_OK


def _args_dict(args: argparse.Namespace) -> dict:
    return {
        "seed": args.seed,
        "r_max": args.r_max,
        "n_max": args.n_max,
        "tolerance_profile": args.tolerance_profile,
    }


def _batch_worker(item):
    (index, payload), arg_values = item
    if isinstance(payload, json.JSONDecodeError):
        return {
            "schema": "v1",
            "kind": "error",
            "error": {"kind": "config", "message": f"malformed JSON: {payload}", "path": None},
            "job_index": index,
        }
    ns = argparse.Namespace(**arg_values)
    return jobs.run_job_safe(_apply_cli_defaults(payload, ns), index=index)


def _cmd_schema(args: argparse.Namespace) -> int:
    schema = JOB_SCHEMA if args.which == "job" else REPORT_SCHEMA
    _emit(json.dumps(schema, sort_keys=True, indent=2) + "\n", args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="koopman-gate",
        description="Certify unboundedness obstructions for composition operators.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--out", help="write the report here instead of stdout")
        p.add_argument("--seed", type=int, default=None, help="default RNG seed for jobs")
        p.add_argument("--r-max", dest="r_max", type=int, default=None,
                       help="default period cutoff for orbit searches")
        p.add_argument("--n-max", dest="n_max", type=int, default=None,
                       help="default jet-order cutoff")
        p.add_argument("--tolerance-profile", choices=["strict", "default"],
                       default=None, help="default tolerance profile")

    run_p = sub.add_parser("run", help="execute a single job file")
    run_p.add_argument("jobfile")
    common(run_p)
    run_p.set_defaults(func=_cmd_run)

    batch_p = sub.add_parser("batch", help="execute newline-delimited jobs")
    batch_p.add_argument("jobsfile")
    batch_p.add_argument("--jobs", type=int, default=1, help="parallel worker count")
    common(batch_p)
    batch_p.set_defaults(func=_cmd_batch)

    schema_p = sub.add_parser("schema", help="print a published JSON schema")
    schema_p.add_argument("which", choices=["job", "report"])
    schema_p.add_argument("--out", help="write the schema here instead of stdout")
    schema_p.set_defaults(func=_cmd_schema)
    return parser


def main(argv: list[str] | None = None) -> int:
    _setup_logging()
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
