"""Command line entry point: ``analyze``, ``efficiency`` and ``check-bib``."""

import argparse
import sys

from .dataio import AnalysisConfig
from .exceptions import DesignValidationError, NumericalError
from .report import analyze, check_bib_cmd, efficiency
from .spectral import Tolerance

EXIT_OK, EXIT_INPUT, EXIT_NUMERICAL = 0, 2, 3


def _parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["text", "json"], default="text")
    common.add_argument("--tol", type=float, default=1e-10, help="relative eigenvalue threshold")

    design = argparse.ArgumentParser(add_help=False)
    design.add_argument("--design", required=True, help="CSV file, one row per unit (or a JSON design echo)")
    design.add_argument("--block-col", default="block")
    design.add_argument("--treatment-col", default="treatment")

    parser = argparse.ArgumentParser(prog="sweepanova", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", parents=[common, design], help="intra-block ANOVA, effects and efficiency")
    p.add_argument("--response-col", default="y")
    p.add_argument("--factor", action="append", default=[], help="extra factor column (repeatable)")

    sub.add_parser("efficiency", parents=[common, design], help="efficiency factors of a design")

    p = sub.add_parser("check-bib", parents=[common], help="BIB necessary conditions for (v, k, r)")
    p.add_argument("--v", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    return parser


def main(argv=None):
    args = _parser().parse_args(argv)
    try:
        tol = Tolerance(rel_eps=args.tol)
        if args.command == "check-bib":
            out = check_bib_cmd(args.v, args.k, args.r, args.format)
        else:
            config = AnalysisConfig(
                design_path=args.design,
                response_column=getattr(args, "response_col", "y"),
                block_column=args.block_col,
                treatment_column=args.treatment_col,
                extra_factor_columns=tuple(getattr(args, "factor", ())),
                tol=tol,
                output_format=args.format,
            )
            out = analyze(config) if args.command == "analyze" else efficiency(config)
    except (DesignValidationError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    sys.stdout.write(out)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
