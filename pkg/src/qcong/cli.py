"""Command-line interface.

Exit codes: 0 when every check passes, 1 when any check fails, 2 on any
error (bad input, evaluation failure, budget exceeded).
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from . import __version__
from .cache import SeriesCache
from .expr import (DissectionClaim, IdentityClaim, ParseError, evaluate,
                   iter_fixture, parse_expr, parse_identity, verify_identity)
from .oracle import (builtin, count, counts_series, enumerate_count,
                     parse_constraint)
from .report import VerificationReport
from .verifier import (DEFAULT_MAX_ORDER, GENERATING_FUNCTIONS,
                       CongruenceClaim, FamilyClaim, InternalClaim,
                       dissect_and_match, family_progression, verify_binomial,
                       verify_congruence, verify_family, verify_internal)

EXIT_OK, EXIT_FAIL, EXIT_ERROR = 0, 1, 2
DEFAULT_ORDER = 500
BUNDLED_FIXTURES = ("lemmas", "pond", "pend")


@dataclass
class RunConfig:
    default_order: int = DEFAULT_ORDER
    max_order: int = DEFAULT_MAX_ORDER
    cache_dir: Path | None = None
    use_cache: bool = True
    output: str = "plain"
    fixtures: list[str] = field(default_factory=list)

    def __post_init__(self):
        if not self.max_order >= self.default_order >= 1:
            raise ValueError(
                f"need max order ({self.max_order}) >= default order "
                f"({self.default_order}) >= 1")

    @property
    def cache(self) -> SeriesCache | None:
        return SeriesCache(self.cache_dir) if self.use_cache else None

    def expander(self):
        cache = self.cache
        return cache.expand if cache else evaluate


class UsageError(Exception):
    pass


def _config(args) -> RunConfig:
    order = getattr(args, "order", None) or DEFAULT_ORDER
    return RunConfig(
        default_order=order,
        max_order=args.max_order,
        cache_dir=Path(args.cache_dir) if args.cache_dir else None,
        use_cache=not args.no_cache,
        output="json" if args.json else "plain",
        fixtures=list(getattr(args, "fixture", None) or []),
    )


def _emit_reports(reports: list[VerificationReport], config: RunConfig) -> int:
    if config.output == "json":
        print(json.dumps([r.to_json() for r in reports], indent=2))
    else:
        for r in reports:
            print(r.summary())
    if any(r.outcome == "error" for r in reports):
        return EXIT_ERROR
    if any(r.outcome == "fail" for r in reports):
        return EXIT_FAIL
    return EXIT_OK


def _source(args):
    chosen = [x for x in (args.series, args.expr, args.constraint) if x]
    if len(chosen) != 1:
        raise UsageError("give exactly one of --series, --expr, --constraint")
    if args.series:
        if args.series not in GENERATING_FUNCTIONS:
            builtin(args.series)  # raises with suggestions
        return args.series
    if args.expr:
        return parse_expr(args.expr)
    return parse_constraint(args.constraint)


def _fixture_text(name: str) -> str:
    path = Path(name)
    if path.exists():
        return path.read_text(encoding="utf-8")
    if name in BUNDLED_FIXTURES:
        return resources.files("qcong.fixtures").joinpath(
            f"{name}.txt").read_text(encoding="utf-8")
    raise UsageError(f"fixture {name!r} not found (bundled: "
                     f"{', '.join(BUNDLED_FIXTURES)})")


def cmd_expand(args) -> int:
    config = _config(args)
    e = parse_expr(args.expression)
    order = config.default_order
    series = config.expander()(e, order, args.mod)
    if config.output == "json":
        print(json.dumps({"expression": str(e), "order": order,
                          "modulus": args.mod,
                          "coeffs": [str(c) for c in series]}))
    else:
        for n, c in enumerate(series):
            print(f"{n}: {c}")
    return EXIT_OK


def cmd_verify_identity(args) -> int:
    config = _config(args)
    expand = config.expander()
    claims = []
    for name in config.fixtures:
        claims.extend(f.claim for f in iter_fixture(_fixture_text(name)))
    for text in args.identity or []:
        claims.append(parse_identity(text))
    if not claims:
        raise UsageError("nothing to verify: pass an identity or --fixture")
    reports = []
    for c in claims:
        if isinstance(c, IdentityClaim):
            reports.append(verify_identity(c, config.default_order, expand))
        else:
            order = args.dissect_order or config.default_order
            reports.append(dissect_and_match(
                c.gf, c.m, c.r, c.claimed, order, c.modulus, c.label, expand))
    return _emit_reports(reports, config)


def cmd_congruence(args) -> int:
    config = _config(args)
    claim = CongruenceClaim(_source(args), args.A, args.B, args.M)
    report = verify_congruence(claim, args.limit, config.max_order,
                               config.expander())
    return _emit_reports([report], config)


def cmd_internal(args) -> int:
    config = _config(args)
    claim = InternalClaim(_source(args), args.A, args.B, args.C, args.D,
                          args.M)
    report = verify_internal(claim, args.limit, config.max_order,
                             config.expander())
    return _emit_reports([report], config)


def cmd_family(args) -> int:
    config = _config(args)
    family = args.family if args.family.endswith("-family") else (
        args.family + "-family")
    claim = FamilyClaim(family, args.alpha)
    if config.output == "plain":
        A, B = family_progression(claim)
        print(f"{family} alpha={args.alpha}: progression {A}n+{B}")
    report = verify_family(claim, args.limit, config.max_order,
                           config.expander())
    return _emit_reports([report], config)


def cmd_dissect(args) -> int:
    config = _config(args)
    gf = parse_expr(GENERATING_FUNCTIONS.get(args.gf, args.gf))
    claimed = None if args.claimed.strip() == "0" else parse_expr(args.claimed)
    claim = DissectionClaim(gf, args.m, args.r, claimed, args.mod)
    report = dissect_and_match(claim.gf, claim.m, claim.r, claim.claimed,
                               config.default_order, claim.modulus,
                               expand=config.expander())
    return _emit_reports([report], config)


def cmd_binomial(args) -> int:
    config = _config(args)
    report = verify_binomial(args.p, args.j, args.k, args.m,
                             config.default_order)
    return _emit_reports([report], config)


def cmd_oracle(args) -> int:
    config = _config(args)
    if bool(args.series) == bool(args.constraint):
        raise UsageError("give exactly one of --series, --constraint")
    spec = builtin(args.series) if args.series else parse_constraint(
        args.constraint)
    if args.n is not None:
        values = {args.n: count(spec, args.n)}
    else:
        values = dict(enumerate(counts_series(spec, config.default_order)))
    mismatches = []
    if args.enumerate:
        for n, v in values.items():
            if n <= 40 and enumerate_count(spec, n) != v:
                mismatches.append(n)
    if config.output == "json":
        print(json.dumps({"constraint": str(spec),
                          "counts": {str(n): str(v) for n, v in values.items()},
                          "enumeration_mismatches": mismatches}))
    else:
        print(f"# {spec}")
        for n, v in values.items():
            print(f"{n}: {v}")
        if mismatches:
            print(f"enumeration disagrees at n = {mismatches}")
    return EXIT_FAIL if mismatches else EXIT_OK


def cmd_cache(args) -> int:
    cache = SeriesCache(args.cache_dir)
    if args.action == "stats":
        info = cache.stats()
        if args.json:
            print(json.dumps(info))
        else:
            for k, v in info.items():
                print(f"{k}: {v}")
    else:
        print(f"removed {cache.clear()} entries")
    return EXIT_OK


def _common(p: argparse.ArgumentParser, order=True, limit=False):
    if order:
        p.add_argument("--order", type=int, help=f"expansion order (default {DEFAULT_ORDER})")
    if limit:
        p.add_argument("--limit", type=int, default=200,
                       help="check 0 <= n <= LIMIT (default 200)")
    p.add_argument("--json", action="store_true", help="emit JSON")
    p.add_argument("--cache-dir", help="cache directory (env QC_CACHE_DIR)")
    p.add_argument("--no-cache", action="store_true")
    p.add_argument("--max-order", type=int, default=DEFAULT_MAX_ORDER,
                   help=f"expansion-order budget (default {DEFAULT_MAX_ORDER})")


def _source_args(p):
    p.add_argument("--series", help=f"builtin: {', '.join(GENERATING_FUNCTIONS)}")
    p.add_argument("--expr", help="eta-quotient expression")
    p.add_argument("--constraint", help="constraint spec, e.g. 'm=2;1:not-one'")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qcong",
        description="Expand eta quotients and check partition congruences.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("expand", help="print series coefficients")
    p.add_argument("expression")
    p.add_argument("--mod", type=int)
    _common(p)
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("verify-identity", help="check identities or fixture files")
    p.add_argument("identity", nargs="*")
    p.add_argument("--fixture", action="append",
                   help=f"fixture file or bundled name ({', '.join(BUNDLED_FIXTURES)})")
    p.add_argument("--dissect-order", type=int,
                   help="order for dissection claims (default: --order)")
    _common(p)
    p.set_defaults(func=cmd_verify_identity)

    p = sub.add_parser("congruence", help="a(An+B) == 0 (mod M)")
    _source_args(p)
    for name in ("A", "B", "M"):
        p.add_argument(f"--{name}", type=int, required=True)
    _common(p, order=False, limit=True)
    p.set_defaults(func=cmd_congruence)

    p = sub.add_parser("internal", help="a(An+B) == a(Cn+D) (mod M)")
    _source_args(p)
    for name in ("A", "B", "C", "D", "M"):
        p.add_argument(f"--{name}", type=int, required=True)
    _common(p, order=False, limit=True)
    p.set_defaults(func=cmd_internal)

    p = sub.add_parser("family", help="infinite-family member for one alpha")
    p.add_argument("--family", required=True,
                   choices=["pond", "pend", "pond-family", "pend-family"])
    p.add_argument("--alpha", type=int, required=True)
    _common(p, order=False, limit=True)
    p.set_defaults(func=cmd_family)

    p = sub.add_parser("dissect", help="compare a dissection component")
    p.add_argument("gf", help="expression or builtin series name")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--claimed", required=True, help="expression, or 0")
    p.add_argument("--mod", type=int)
    _common(p)
    p.set_defaults(func=cmd_dissect)

    p = sub.add_parser("binomial", help="f_m^(p^j k) == f_pm^(p^(j-1) k) (mod p^j)")
    for name in ("p", "j", "k", "m"):
        p.add_argument(f"--{name}", type=int, required=True)
    _common(p)
    p.set_defaults(func=cmd_binomial)

    p = sub.add_parser("oracle", help="combinatorial partition counts")
    p.add_argument("--series")
    p.add_argument("--constraint")
    p.add_argument("--n", type=int, help="a single weight")
    p.add_argument("--enumerate", action="store_true",
                   help="cross-check against exhaustive enumeration (n <= 40)")
    _common(p)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("cache", help="inspect or clear the cache")
    p.add_argument("action", choices=["stats", "clear"])
    p.add_argument("--cache-dir")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_cache)
    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
    except (UsageError, ValueError, KeyError, ArithmeticError, OSError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {msg}", file=sys.stderr)
    return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
