"""Command line interface.

Subcommands mirror the classic trusty URI tool functions; each also answers
to its CamelCase name (``trustyuri CheckFile x.nq``).

Exit status: 0 when every item is valid, 1 if any is invalid, 2 on any error.
With ``--json`` each report is printed as one JSON object per line with the
keys ``subject``, ``verdict``, ``expected_code``, ``computed_code`` and
``message``.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

from .batch import run_batch
from .codec import to_ni_uri
from .commands import check_file, transform_rdf_file
from .errors import TrustyUriError
from .fa import process_file
from .fuzz import fuzz_check
from .large import (
    DEFAULT_FAN_IN,
    DEFAULT_MAX_IN_MEMORY_RECORDS,
    SortConfig,
    check_large_rdf,
    check_sorted_rdf,
    transform_large_rdf,
)
from .report import CheckReport, exit_status

INPUT_FORMATS = {"nq": "nquads", "nquads": "nquads", "trig": "trig"}


def _emit(reports: list[CheckReport], as_json: bool) -> int:
    for r in reports:
        print(json.dumps(r.to_dict()) if as_json else str(r))
    return exit_status(reports)


def _fmt(args):
    return INPUT_FORMATS[args.input_format] if args.input_format else None


def _sort_config(args) -> SortConfig:
    return SortConfig(args.max_records, args.temp_dir, args.fan_in)


def cmd_check_file(args):
    return _emit([check_file(p, _fmt(args)) for p in args.paths], args.json)


def cmd_check_large(args):
    cfg = _sort_config(args)
    return _emit([check_large_rdf(p, cfg=cfg, fmt=_fmt(args)) for p in args.paths], args.json)


def cmd_check_sorted(args):
    return _emit([check_sorted_rdf(p, fmt=_fmt(args)) for p in args.paths], args.json)


def cmd_process_file(args):
    status = 0
    for p in args.paths:
        try:
            print(process_file(p))
        except (TrustyUriError, OSError) as e:
            print(f"{p}: ERROR ({e})", file=sys.stderr)
            status = 2
    return status


def _transform(args, large: bool):
    try:
        if large:
            out = transform_large_rdf(
                args.path, args.base_uri, args.module, _sort_config(args), args.output_dir, _fmt(args)
            )
        else:
            out = transform_rdf_file(args.path, args.base_uri, args.module, args.output_dir, _fmt(args))
    except (TrustyUriError, OSError) as e:
        print(f"{args.path}: ERROR ({e})", file=sys.stderr)
        return 2
    print(out)
    return 0


def cmd_run_batch(args):
    summary = run_batch(args.batch_file, _sort_config(args), args.jobs)
    for o in summary.outcomes:
        if args.json:
            print(json.dumps(o.to_dict()))
        else:
            extra = f" ({o.message})" if o.message else ""
            print(f"{o.line}: {o.text}: {o.verdict.value.upper()}{extra}")
    print(summary.summary_line(), file=sys.stderr if args.json else sys.stdout)
    return summary.exit_status


def cmd_fuzz(args):
    summary = fuzz_check(args.corpus_dir, args.n, args.seed)
    print(json.dumps(summary.to_dict()) if args.json else summary.table())
    return 0


def cmd_ni(args):
    try:
        print(to_ni_uri(args.uri, args.authority, not args.no_module))
    except TrustyUriError as e:
        print(f"ERROR ({e})", file=sys.stderr)
        return 2
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="trustyuri", description="Create and check trusty URIs.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, alias, func, help):
        p = sub.add_parser(name, aliases=[alias], help=help)
        p.set_defaults(func=func)
        return p

    def input_format(p):
        p.add_argument("--input-format", choices=sorted(INPUT_FORMATS), help="override the extension-based parser choice")

    def sort_options(p):
        p.add_argument("--max-records", type=int, default=DEFAULT_MAX_IN_MEMORY_RECORDS,
                       help="statements held in memory per sort run")
        p.add_argument("--fan-in", type=int, default=DEFAULT_FAN_IN)
        p.add_argument("--temp-dir", help="defaults to $TRUSTYURI_TMPDIR or the system temp dir")

    p = add("check-file", "CheckFile", cmd_check_file, "verify files against the code in their names")
    p.add_argument("paths", nargs="+")
    p.add_argument("--json", action="store_true")
    input_format(p)

    p = add("process-file", "ProcessFile", cmd_process_file, "rename files to carry their FA code")
    p.add_argument("paths", nargs="+")

    for name, alias, large in (("transform-rdf", "TransformRdf", False), ("transform-large-rdf", "TransformLargeRdf", True)):
        p = add(name, alias, lambda a, large=large: _transform(a, large), "turn an RDF file into a trusty file")
        p.add_argument("path")
        p.add_argument("base_uri")
        p.add_argument("--module", choices=["RA", "RB"], default="RA")
        p.add_argument("--format", choices=["nq"], default="nq", help="output format")
        p.add_argument("--output-dir")
        input_format(p)
        if large:
            sort_options(p)

    p = add("check-large-rdf", "CheckLargeRdf", cmd_check_large, "verify RDF using temporary files")
    p.add_argument("paths", nargs="+")
    p.add_argument("--json", action="store_true")
    input_format(p)
    sort_options(p)

    p = add("check-sorted-rdf", "CheckSortedRdf", cmd_check_sorted, "verify RDF that is already in canonical order")
    p.add_argument("paths", nargs="+")
    p.add_argument("--json", action="store_true")
    input_format(p)

    p = add("run-batch", "RunBatch", cmd_run_batch, "run commands listed in a file")
    p.add_argument("batch_file")
    p.add_argument("--jobs", type=int, default=1, help="run consecutive check lines in parallel")
    p.add_argument("--json", action="store_true")
    sort_options(p)

    p = add("fuzz-check", "FuzzCheck", cmd_fuzz, "check single-byte mutants of valid trusty files")
    p.add_argument("corpus_dir")
    p.add_argument("-n", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true")

    p = add("ni", "NiConvert", cmd_ni, "print the ni URI for a trusty URI")
    p.add_argument("uri")
    p.add_argument("--authority")
    p.add_argument("--no-module", action="store_true", help="omit the ?module= parameter")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except ValueError as e:
        print(f"ERROR ({e})", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
