"""Command-line entry point.

Data subcommands read a JSON run configuration and emit CSV, either to
stdout or into ``--out``; ``figures`` writes one CSV per figure id and
``validate`` runs the acceptance checks.

Exit codes: 0 success, 1 validation failure, 2 usage or configuration
error, 3 numeric or solver error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .csvio import dumps_csv, write_csv
from .errors import ConfigError, NumericError, TDHOError
from .report import (FIGURES, RunConfig, figure_table, probabilities_table, rho_table,
                     squeeze_table, variances_table, wavefunction_table)

EXIT_OK, EXIT_VALIDATION, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3

TABLES = {
    "rho": rho_table,
    "squeeze": squeeze_table,
    "variances": variances_table,
    "probabilities": probabilities_table,
    "wavefunction": wavefunction_table,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="tdho", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"tdho {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in TABLES:
        p = sub.add_parser(name, help=f"{name} table from a run configuration")
        p.add_argument("--config", required=True, help="run configuration (JSON)")
        p.add_argument("--out", help="output directory; stdout when omitted")
    p = sub.add_parser("figures", help="CSV data behind the figures")
    p.add_argument("which", nargs="*", help=f"figure ids, default all of {', '.join(FIGURES)}")
    p.add_argument("--out", default=".", help="output directory (default: current)")
    p = sub.add_parser("validate", help="run the acceptance checks")
    p.add_argument("--level", choices=("fast", "full"), default="fast")
    p.add_argument("--json", action="store_true", help="print the JSON report instead")
    p.add_argument("--out", help="also write report.json into this directory")
    # test hook: scales every tolerance; a negative value makes every check fail
    p.add_argument("--tol-scale", type=float, default=1.0, help=argparse.SUPPRESS)
    return parser


def load_config(path) -> RunConfig:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror or exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path} is not valid JSON: {exc}") from exc
    return RunConfig.from_dict(doc)


def _run_table(args, out):
    cfg = load_config(args.config)
    columns, rows, meta = TABLES[args.command](cfg)
    if args.out:
        path = write_csv(Path(args.out) / f"{args.command}.csv", columns, rows, meta)
        print(path, file=sys.stderr)
    elif cfg.output:
        path = write_csv(cfg.output, columns, rows, meta)
        print(path, file=sys.stderr)
    else:
        out.write(dumps_csv(columns, rows, meta))
    return EXIT_OK


def _run_figures(args, out):
    which = args.which or list(FIGURES)
    unknown = [w for w in which if w not in FIGURES]
    if unknown:
            raise ConfigError(f"unknown figure id(s) {unknown}; expected {', '.join(FIGURES)}")
    for w in which:
        columns, rows, meta = figure_table(w)
        print(write_csv(Path(args.out) / f"{w}.csv", columns, rows, meta), file=out)
    return EXIT_OK


def _run_validate(args, out):
    from .validation import run_validation

    echo = None if args.json else (lambda line: print(line, file=out, flush=True))
    results = run_validation(args.level, tol_scale=args.tol_scale, echo=echo)
    failed = [r.name for r in results if not r.passed]
    report = {"level": args.level, "code_version": f"tdho {__version__}",
              "passed": not failed, "checks": [r.to_dict() for r in results]}
    text = json.dumps(report, indent=2, sort_keys=True, default=str)
    if args.json:
        out.write(text + "\n")
    else:
        total = sum(r.runtime for r in results)
        print(f"{len(results) - len(failed)}/{len(results)} checks passed in {total:.1f} s",
              file=out)
        for name in failed:
            print(f"failed: {name}", file=out)
    if args.out:
        path = Path(args.out) / "report.json"
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text + "\n", encoding="utf-8")
    return EXIT_VALIDATION if failed else EXIT_OK


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    args = build_parser().parse_args(argv)
    try:
        if args.command in TABLES:
            return _run_table(args, out)
        if args.command == "figures":
            return _run_figures(args, out)
        return _run_validate(args, out)
    except NumericError as exc:
        print(f"tdho: numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (TDHOError, ValueError) as exc:
        print(f"tdho: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
