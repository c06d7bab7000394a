"""Command-line front end.

Exit codes: 0 success, 1 property violation, 2 usage or parse error,
3 undefined quantity.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import re
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import families, lattice, survey
from .errors import PolynomialParseError, PrecisionError, UndefinedQuantityError
from .polycore import format_poly, parse_poly
from .rootfinder import DEFAULT_REL_WIDTH, exponent, sep

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE, EXIT_UNDEFINED = 0, 1, 2, 3
DEFAULT_SEED = 20240229

log = logging.getLogger("rootsep")

# lets "-1,0,1" through as a positional instead of an unknown option
_COEFF_LIST = re.compile(r"^-\d+(,\s*-?\d+)*$")


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    rel_width: Fraction
    fmt: str | None
    seed: int
    jobs: int
    output: str | None

    def __post_init__(self) -> None:
        if not 0 < self.rel_width < 1:
            raise UsageError("--rel-width must lie in (0, 1)")
        if self.jobs < 1:
            raise UsageError("--jobs must be at least 1")


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}")


def _int_list(text: str) -> list[int]:
    """``a:b`` (inclusive range) or a comma list."""
    try:
        if ":" in text:
            a, b = text.split(":")
            return list(range(int(a), int(b) + 1))
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer list or range: {text!r}")


def _csv_text(header: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _json_text(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


# -- subcommands -----------------------------------------------------------------


def cmd_sep(cfg: RunConfig, args) -> tuple[str, int]:
    p = parse_poly(args.poly)
    fn = exponent if cfg.subcommand == "exponent" else sep
    report = fn(p, cfg.rel_width, real_only=args.real_only)
    data = report.to_json()
    if (cfg.fmt or "json") == "csv":
        keys = ["poly", "height", "sep_lo", "sep_hi", "e_lo", "e_hi", "witness_kind"]
        return _csv_text(keys, [["" if data[k] is None else data[k] for k in keys]]), EXIT_OK
    return _json_text(data), EXIT_OK


def cmd_family(cfg: RunConfig, args) -> tuple[str, int]:
    d = args.d if args.d is not None else (2 * args.k + 1 if args.k is not None else 5)
    try:
        rows = families.family_sweep(args.family, args.n, d, cfg.rel_width, cfg.jobs)
    except ValueError as exc:
        raise UsageError(str(exc))
    status = EXIT_OK if all(r.bound_ok for r in rows) else EXIT_VIOLATION
    if args.fit:
        fit = survey.fit_reports([r.report for r in rows])
        if (cfg.fmt or "csv") == "json":
            return _json_text(dict(zip(survey.FIT_HEADER, survey.fit_row(fit)))), status
        return _csv_text(survey.FIT_HEADER, [survey.fit_row(fit)]), status
    if (cfg.fmt or "csv") == "json":
        return _json_text([dict(zip(families.SWEEP_HEADER, r.as_row())) for r in rows]), status
    return _csv_text(families.SWEEP_HEADER, [r.as_row() for r in rows]), status


def cmd_search(cfg: RunConfig, args) -> tuple[str, int]:
    cubic = parse_poly(args.cubic)
    if cubic.degree != 3 or not cubic.is_monic():
        raise UsageError("search needs a monic cubic")
    hits = lattice.close_root_search(
        cubic,
        N_ladder=args.ladder or None,
        exponent_threshold=args.threshold,
        coeff_combo_bound=args.combo_bound,
        rel_width=cfg.rel_width,
    )
    if cfg.fmt == "csv":
        header = ["cubic", "quadratic", "lattice_N", "height", "e_lo", "e_hi"]
        rows = []
        for h in hits:
            j = h.to_json()
            rows.append([j["cubic"], j["quadratic"], j["lattice_N"], j["report"]["height"], j["report"]["e_lo"], j["report"]["e_hi"]])
        return _csv_text(header, rows), EXIT_OK
    return _json_text([h.to_json() for h in hits]), EXIT_OK


def cmd_survey(cfg: RunConfig, args) -> tuple[str, int]:
    try:
        result = survey.max_exponent_survey(
            args.d,
            args.shape,
            args.bound,
            top_k=args.top_k,
            rel_width=cfg.rel_width,
            screen=not args.exhaustive,
            jobs=cfg.jobs,
        )
    except ValueError as exc:
        raise UsageError(str(exc))
    ok = True
    for rec in result.records:
        fs = rec.factored.factors
        ok &= survey.check_gelfond(fs[0], survey.multiply_all(fs[1:])).passed if len(fs) > 1 else True
    status = EXIT_OK if ok else EXIT_VIOLATION
    if cfg.fmt == "json":
        out = {
            "d": args.d,
            "shape": list(sorted(args.shape)),
            "bound": args.bound,
            "scored": result.scored,
            "skipped": result.skipped,
            "certified": result.certified,
            "records": [dict(zip(survey.SURVEY_HEADER, survey.survey_row(r))) for r in result.records],
        }
        return _json_text(out), status
    return _csv_text(survey.SURVEY_HEADER, [survey.survey_row(r) for r in result.records]), status


def cmd_verify(cfg: RunConfig, args) -> tuple[str, int]:
    suites = ["gelfond", "mahler", "linear"] if args.suite == "all" else [args.suite]
    results = []
    fits = []
    for name in suites:
        if name == "gelfond":
            results.append(survey.gelfond_suite(args.samples or 10**4, cfg.seed))
        elif name == "mahler":
            results.append(survey.mahler_suite(args.samples or 10**4, cfg.seed, jobs=cfg.jobs))
        else:
            res, fit = survey.linear_suite(args.d, args.samples or 1000, cfg.seed)
            results.append(res)
            fits.append(fit)
    status = EXIT_OK if all(r.passed for r in results) else EXIT_VIOLATION
    if cfg.fmt == "json":
        out = [dict(zip(survey.SUITE_HEADER, survey.suite_row(r))) for r in results]
        for entry, r in zip(out, results):
            if r.suite == "linear":
                entry["fit"] = dict(zip(survey.FIT_HEADER, survey.fit_row(fits[0])))
        return _json_text(out), status
    return _csv_text(survey.SUITE_HEADER, [survey.suite_row(r) for r in results]), status


COMMANDS = {
    "sep": cmd_sep,
    "exponent": cmd_sep,
    "family": cmd_family,
    "search": cmd_search,
    "survey": cmd_survey,
    "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--rel-width", type=_fraction, default=argparse.SUPPRESS, help="target relative width of sep enclosures")
    common.add_argument("--format", dest="fmt", choices=("json", "csv"), default=argparse.SUPPRESS)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    common.add_argument("--jobs", type=int, default=argparse.SUPPRESS)
    common.add_argument("--output", default=argparse.SUPPRESS, metavar="PATH")
    common.add_argument("-v", "--verbose", action="store_true", default=argparse.SUPPRESS)

    parser = argparse.ArgumentParser(prog="rootsep", description=__doc__.splitlines()[0], parents=[common])
    sub = parser.add_subparsers(dest="subcommand", required=True)

    for name, helptext in (("sep", "certified root separation"), ("exponent", "certified separation exponent")):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("poly", help="ascending integer coefficients, e.g. -1,0,1")
        p.add_argument("--real-only", action="store_true", help="only consider real roots")

    p = sub.add_parser("family", parents=[common], help="sweep a constructed family")
    p.add_argument("family", choices=families.FAMILY_IDS)
    p.add_argument("--n", type=_int_list, required=True, help="range a:b or comma list")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--d", type=int, help="odd degree (family QR)")
    g.add_argument("--k", type=int, help="k = (d-1)/2 (family QR)")
    p.add_argument("--fit", action="store_true", help="emit the log-log fit instead of the rows")

    p = sub.add_parser("search", parents=[common], help="lattice search for close quadratic roots")
    p.add_argument("cubic")
    p.add_argument("--ladder", type=_int_list, help="comma list of scales N")
    p.add_argument("--threshold", type=_fraction, default=Fraction(2))
    p.add_argument("--combo-bound", type=int, default=lattice.DEFAULT_COMBO_BOUND)

    p = sub.add_parser("survey", parents=[common], help="top exponents over an enumerated space")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--shape", type=_int_list, required=True, help="comma list of factor degrees")
    p.add_argument("--bound", type=int, required=True, help="factor height bound")
    p.add_argument("--top-k", type=int, default=survey.DEFAULT_TOP_K)
    p.add_argument("--exhaustive", action="store_true", help="certify every product instead of screening")

    p = sub.add_parser("verify", parents=[common], help="run inequality suites")
    p.add_argument("suite", choices=("gelfond", "mahler", "linear", "all"))
    p.add_argument("--samples", type=int)
    p.add_argument("--d", type=int, default=5, help="degree for the linear suite")
    for p in (parser, common, *sub.choices.values()):
        p._negative_number_matcher = _COEFF_LIST
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if getattr(args, "verbose", False) else logging.WARNING)
    try:
        cfg = RunConfig(
            args.subcommand,
            getattr(args, "rel_width", DEFAULT_REL_WIDTH),
            getattr(args, "fmt", None),
            getattr(args, "seed", DEFAULT_SEED),
            getattr(args, "jobs", 1),
            getattr(args, "output", None),
        )
        text, status = COMMANDS[args.subcommand](cfg, args)
    except (UsageError, PolynomialParseError) as exc:
        print(f"rootsep: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except UndefinedQuantityError as exc:
        print(f"rootsep: undefined: {exc}", file=sys.stderr)
        return EXIT_UNDEFINED
    except PrecisionError as exc:
        print(f"rootsep: precision: {exc}", file=sys.stderr)
        return EXIT_UNDEFINED
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
