"""``mbred`` command line.

Exit status: 0 if every check passes, 1 if some check fails, 2 for
configuration or runtime errors.
"""

from __future__ import annotations

import argparse
import sys

from .exceptions import NumericError, ValidationError
from .harness import EXPERIMENTS, ConfigError, ExperimentConfig, load_config_file, run

EXIT_OK, EXIT_FAIL, EXIT_ERROR = 0, 1, 2


def _tol_pair(text: str) -> tuple[str, float]:
    name, sep, value = text.partition("=")
    if not sep or not name:
        raise argparse.ArgumentTypeError(f"expected NAME=VALUE, got {text!r}")
    try:
        return name.strip(), float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"tolerance {name!r} is not a number: {value!r}") from None


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--dim", type=int, action="append", dest="dims", metavar="N",
                        help="Hilbert-space dimension; repeat for several")
    common.add_argument("--samples", type=int, help="cases per check (draws for 'simulate')")
    common.add_argument("--seed", type=int, help="64-bit master seed")
    common.add_argument("--tol", type=_tol_pair, action="append", default=[], metavar="NAME=VALUE",
                        help="override a library or check tolerance")
    common.add_argument("--config", metavar="PATH", help="JSON file mirroring ExperimentConfig")
    common.add_argument("--out", metavar="PATH", help="write the JSON report here ('-' for stdout)")

    parser = _Parser(prog="mbred", description="Seeded numerical checks of the Misra-Bugajski reduction.")
    sub = parser.add_subparsers(dest="experiment", required=True, parser_class=_Parser)
    for name in EXPERIMENTS:
        p = sub.add_parser(name, parents=[common])
        if name in ("extension", "all"):
            p.add_argument("--example", type=int, choices=(1, 2, 3))
    return parser


def make_config(args: argparse.Namespace) -> ExperimentConfig:
    """Defaults, overridden by the config file, overridden by flags."""
    fields = load_config_file(args.config) if args.config else {}
    fields["experiment"] = args.experiment
    for key in ("dims", "samples", "seed", "out", "example"):
        value = getattr(args, key, None)
        if value is not None:
            fields[key] = value
    tols = dict(fields.get("tolerances") or {})
    tols.update(dict(args.tol))
    fields["tolerances"] = tols
    return ExperimentConfig(**fields).validate()


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        report = run(make_config(args))
    except (ConfigError, ValidationError, NumericError, OSError, TypeError) as exc:
        print(f"mbred: error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    if args.out != "-":
        stream = sys.stdout if args.out is None else sys.stderr
        for c in report.checks:
            status = "PASS" if c.passed else "FAIL"
            print(f"{status} {c.name}: max_error={c.max_error:.3e} tol={c.tolerance:.1e} n={c.n_cases}",
                  file=stream)
        print(f"{'PASS' if report.passed else 'FAIL'} {report.experiment} ({report.wall_time:.2f}s)", file=stream)
    return EXIT_OK if report.passed else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
