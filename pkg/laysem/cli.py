#!/usr/bin/env python3
"""
laysem - check layered semirings, their maps and layered tropicalization

Subcommands:
    check-axioms     Semiring laws, layered axioms, surpassing and Frobenius suites
    check-map        Check a builtin or tabulated map against one level of the hierarchy
    tropicalize      Tropicalize a Puiseux polynomial and test its roots
    truncate         Apply nu- and sort-truncations and write the instance as YAML
    eval             Evaluate a parenthesized + / * expression over an instance

Examples:
    laysem check-axioms --sorting trunc:4 --monoid trunc-nat:5
    laysem check-axioms --sorting trunc:4 --monoid trunc-nat:5 --force-empty-ideal
    laysem check-map --kind layered --map trunc-nu:5
    laysem tropicalize poly.txt --roots roots.txt
    laysem truncate --sorting nat-inf --monoid qmax --nu 4 --sort 3 --output inst.yaml
    laysem eval "(3@1 + 3@1) * 2@1"

Exit codes: 0 when every check passes, 1 on any FAIL or a bad root, 2 on invalid input.
The seed defaults to $LAYSEM_SEED, then 1729; --seed overrides both.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Callable, Optional

import yaml

from laysem.config import RunConfig
from laysem.core import (
    ConstructedSemiring,
    LayeredMap,
    check_axioms,
    check_frobenius,
    check_surpassing,
    identity_map,
)
from laysem.errors import ConfigError, LaysemError, NotARootError
from laysem.expressions import evaluate, load_map_table
from laysem.extensions import (
    build_U,
    ghost_map,
    nu_truncation_map,
    require_constructed,
    sort_truncation_map,
    standard_collapse_map,
)
from laysem.monoids import parse_monoid_value
from laysem.morphisms import (
    SupervaluationVariant,
    TransmissionVariant,
    as_transmission,
    check_layered_hom,
    check_layered_morphism,
    check_semiring_hom,
    check_supervaluation,
    check_surpassed_map,
    check_surpassing_map,
    check_transmission,
    check_zero_excepted,
    frobenius_map,
)
from laysem.notation import parse_positive_int
from laysem.reports import DEFAULT_BUDGET, DEFAULT_EXHAUSTIVE_LIMIT, CheckReport
from laysem.sorting import parse_sort
from laysem.tropical import (
    kapranov_check,
    load_polynomial,
    load_roots,
    psi_supervaluation,
    tropicalize_poly,
)

logger = logging.getLogger(__name__)

MAP_KINDS = (
    "hom",
    "layered",
    "zero-excepted",
    "surpassing",
    "surpassed",
    "morphism",
    "transmission",
    "supervaluation",
)

_MAP_CHECKERS: dict[str, Callable[..., CheckReport]] = {
    "hom": check_semiring_hom,
    "layered": check_layered_hom,
    "zero-excepted": check_zero_excepted,
    "surpassing": check_surpassing_map,
    "surpassed": check_surpassed_map,
    "morphism": check_layered_morphism,
}


def emit(*reports: CheckReport) -> int:
    """Print sorted report lines to stdout and a summary to stderr.

    Returns:
        0 if every line passed, 1 otherwise
    """
    results = sorted((r for report in reports for r in report.results), key=lambda r: r.law)
    for result in results:
        print(result.render())
    for report in reports:
        for note in report.scope_notes:
            print(f"# {note}", file=sys.stderr)
    failed = [r for r in results if not r.passed]
    if failed:
        print(f"❌ {len(failed)} of {len(results)} checks failed", file=sys.stderr)
        return 1
    print(f"✅ {len(results)} checks passed", file=sys.stderr)
    return 0


def cmd_check_axioms(args: argparse.Namespace, config: RunConfig) -> int:
    R = config.instance.build()
    options = dict(
        budget=config.budget, seed=config.seed, exhaustive_limit=config.exhaustive_limit
    )
    print(f"Checking {R.name}...", file=sys.stderr)
    return emit(
        check_axioms(R, **options), check_surpassing(R, **options), check_frobenius(R, **options)
    )


def resolve_map(spec: str, R: ConstructedSemiring) -> LayeredMap:
    """Turn a builtin map name or a table-file path into a LayeredMap.

    Raises:
        ConfigError: For an unknown builtin
        ParseError: For a malformed argument or table file
    """
    name, _, argument = spec.partition(":")
    if name == "identity":
        return identity_map(R)
    if name == "frobenius":
        return frobenius_map(R, parse_positive_int(argument or "2", "frobenius power"))
    if name == "trunc-nu":
        return nu_truncation_map(R, parse_monoid_value(argument, R.base))
    if name == "trunc-sort":
        return sort_truncation_map(R, parse_sort(argument, R.sorting))
    if name == "collapse":
        return standard_collapse_map(R)
    if name == "ghost":
        return ghost_map(build_U(R))
    path = Path(spec)
    if path.is_file():
        return load_map_table(path, R, R)
    raise ConfigError(f"unknown map {spec!r} and no such table file")


def cmd_check_map(args: argparse.Namespace, config: RunConfig) -> int:
    R = require_constructed(config.instance.build())
    options = dict(budget=config.budget, seed=config.seed)
    is_psi = args.map.startswith("psi:")
    if args.kind == "supervaluation":
        if not is_psi:
            raise ConfigError("--kind supervaluation needs --map psi:<ell>")
        ell = parse_sort(args.map[len("psi:"):], R.sorting)
        variant = SupervaluationVariant(args.variant or SupervaluationVariant.ZO.value)
        return emit(check_supervaluation(psi_supervaluation(R, ell), variant, **options))
    if is_psi:
        raise ConfigError(f"{args.map} is a supervaluation; use --kind supervaluation")
    f = resolve_map(args.map, R)
    print(f"Checking {f.name} as {args.kind}...", file=sys.stderr)
    if args.kind == "transmission":
        variant_t = TransmissionVariant(args.variant or TransmissionVariant.PLAIN.value)
        report = check_transmission(
            as_transmission(f), variant_t, exhaustive_limit=config.exhaustive_limit, **options
        )
        return emit(report)
    checker = _MAP_CHECKERS[args.kind]
    return emit(checker(f, exhaustive_limit=config.exhaustive_limit, **options))


def cmd_tropicalize(args: argparse.Namespace, config: RunConfig) -> int:
    R = config.instance.build()
    f = load_polynomial(args.polyfile)
    print(tropicalize_poly(R, f).render())
    if args.roots is None:
        return 0
    roots = load_roots(args.roots)
    if not roots:
        return 0
    return emit(kapranov_check(f, roots, R))


def cmd_truncate(args: argparse.Namespace, config: RunConfig) -> int:
    description = config.instance
    if description.nu_trunc is None and description.sort_trunc is None:
        raise ConfigError("truncate needs --nu and/or --sort")
    R = description.build()
    document = {"instance": description.model_dump(), "name": R.name}
    if R.is_finite:
        document["elements"] = [str(x) for x in R.elements()]
    text = yaml.safe_dump(document, sort_keys=False, allow_unicode=True)
    if args.output is not None:
        args.output.write_text(text, encoding="utf-8")
        print(f"✅ Wrote {R.name} to {args.output}", file=sys.stderr)
    else:
        sys.stdout.write(text)
    return 0


def cmd_eval(args: argparse.Namespace, config: RunConfig) -> int:
    R = config.instance.build()
    print(evaluate(args.expression, R))
    return 0


COMMANDS: dict[str, Callable[[argparse.Namespace, RunConfig], int]] = {
    "check-axioms": cmd_check_axioms,
    "check-map": cmd_check_map,
    "tropicalize": cmd_tropicalize,
    "truncate": cmd_truncate,
    "eval": cmd_eval,
}


def build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument(
        "--sorting", default="nat-inf", help="trivial01inf | nat-inf | trunc:<m> (default: nat-inf)"
    )
    shared.add_argument("--monoid", default="qmax", help="qmax | trunc-nat:<q> (default: qmax)")
    shared.add_argument(
        "--seed", type=int, default=None, help="Sampling seed (default: $LAYSEM_SEED or 1729)"
    )
    shared.add_argument(
        "--budget",
        type=int,
        default=DEFAULT_BUDGET,
        help=f"Samples per law (default: {DEFAULT_BUDGET})",
    )
    shared.add_argument(
        "--exhaustive-limit",
        type=int,
        default=DEFAULT_EXHAUSTIVE_LIMIT,
        help=f"Largest tuple count enumerated exhaustively (default: {DEFAULT_EXHAUSTIVE_LIMIT})",
    )
    shared.add_argument("--nu-trunc", "--nu", dest="nu_trunc", help="nu-truncation threshold q")
    shared.add_argument("--sort-trunc", "--sort", dest="sort_trunc", help="Sort truncation m")
    shared.add_argument(
        "--sort-first", action="store_true", help="Truncate sorts before values"
    )
    shared.add_argument(
        "--force-empty-ideal",
        action="store_true",
        help="Build without a zero layer even over a noncancellative monoid",
    )
    shared.add_argument("--instance", type=Path, help="YAML instance description")
    shared.add_argument("--verbose", "-v", action="store_true", help="Log to stderr")

    parser = argparse.ArgumentParser(
        prog="laysem",
        description="Layered semirings, their morphisms and layered tropicalization",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=__doc__,
    )
    commands = parser.add_subparsers(dest="command", required=True)
    commands.add_parser("check-axioms", parents=[shared], help="Check the axioms of an instance")

    check_map = commands.add_parser("check-map", parents=[shared], help="Check a map")
    check_map.add_argument(
        "--kind", choices=MAP_KINDS, required=True, help="Level of the hierarchy"
    )
    check_map.add_argument(
        "--map",
        required=True,
        help="identity | frobenius:<m> | trunc-nu:<q> | trunc-sort:<m> | collapse | ghost | "
        "psi:<ell> | <table file>",
    )
    check_map.add_argument(
        "--variant",
        choices=("full", "dagger", "ZO", "plain"),
        help="Supervaluation or transmission variant",
    )

    tropicalize = commands.add_parser(
        "tropicalize", parents=[shared], help="Tropicalize a polynomial"
    )
    tropicalize.add_argument("polyfile", type=Path, help="Puiseux polynomial file")
    tropicalize.add_argument("--roots", type=Path, help="Roots file, one series per line")

    truncate = commands.add_parser("truncate", parents=[shared], help="Truncate an instance")
    truncate.add_argument("--output", "-o", type=Path, help="Write YAML here instead of stdout")

    evaluate_cmd = commands.add_parser("eval", parents=[shared], help="Evaluate an expression")
    evaluate_cmd.add_argument("expression", help='e.g. "(3@1 + 3@1) * 2@1"')
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2

    try:
        config = RunConfig.from_args(args)
        if config.verbose:
            logging.basicConfig(
                level=logging.DEBUG, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s"
            )
        return COMMANDS[args.command](args, config)
    except NotARootError as exc:
        print(f"❌ {exc}", file=sys.stderr)
        return 1
    except (LaysemError, OSError) as exc:
        print(f"❌ Error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
