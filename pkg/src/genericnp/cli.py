"""Command-line driver.

Exit codes: 0 success, 2 usage error, 3 a checked invariant was violated,
1 any other computational error.
"""

from __future__ import annotations

import argparse
import json
import logging
import random
import sys
from collections.abc import Sequence

from .census import CENSUS_CAP, census, normalize
from .cyclotomic import l_function, newton_polygon_of_l
from .dwork import trace_congruence_check
from .fields import UniPoly, build_field
from .multipoly import hasse_G, hasse_H, hasse_P_n, hasse_product, to_text
from .polygon import generic_polygon, hodge_polygon, is_symmetric, lies_above
from .strata import StratumParams

EXIT_USAGE = 2
EXIT_INVARIANT = 3


class UsageError(Exception):
    pass


def _parse_coeffs(text: str, m: int) -> list[list[int]]:
    """``"0,3,0,1"`` for m = 1; ``"0,1:2,0,1"`` gives coordinate vectors for m > 1."""
    out = []
    for part in text.split(","):
        coords = [int(c) for c in part.strip().split(":")]
        if len(coords) > m:
            raise UsageError(f"coefficient {part!r} has more than {m} coordinates")
        out.append(coords + [0] * (m - len(coords)))
    return out


def _load_config(path: str | None) -> dict:
    if not path:
        return {}
    with open(path) as fh:
        return json.load(fh)


def _params(args) -> StratumParams:
    try:
        return StratumParams(args.d, args.p)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _print_polygon(label: str, poly, fmt: str) -> None:
    if fmt == "tsv":
        sys.stdout.write(poly.to_tsv())
    else:
        print(f"{label}: {poly}")
        print("slopes: " + " ".join(f"{s}x{l}" for s, l in poly.slopes))


def cmd_hodge(args) -> int:
    if args.d < 2:
        raise UsageError("d must be >= 2")
    _print_polygon("HP", hodge_polygon(args.d), args.format)
    return 0


def cmd_gnp(args) -> int:
    params = _params(args)
    if not params.tier_generic:
        raise UsageError(f"generic polygon needs p >= 3d (d={args.d}, p={args.p})")
    _print_polygon("GNP", generic_polygon(params), args.format)
    return 0


def cmd_hasse(args) -> int:
    params = _params(args)
    if args.n is not None:
        if not 1 <= args.n <= params.d - 1:
            raise UsageError(f"--n must lie in 1..{params.d - 1}")
        poly = hasse_P_n(params, args.n)
    else:
        poly = {"P": hasse_product, "G": hasse_G, "H": hasse_H}[args.which](params)
    print(to_text(poly))
    return 0


def _lfunction_data(args):
    params = _params(args)
    F = build_field(args.p, args.m, args.field_seed)
    coeffs = _parse_coeffs(args.coeffs, args.m)
    f = UniPoly.from_ints(F, coeffs)
    if f.degree != params.d:
        raise UsageError(f"coefficients give degree {f.degree}, expected --d {params.d}")
    if args.normalize:
        g, _ = normalize(f)
        f = g.to_unipoly()
    L = l_function(f, seed=args.field_seed)
    return params, F, f, L, newton_polygon_of_l(L)


def cmd_lfunction(args) -> int:
    params, F, f, L, np_ = _lfunction_data(args)
    out = {
        "d": params.d, "p": params.p, "m": args.m,
        "field": F.describe(),
        "polynomial": [c.to_json() for c in f.coeffs],
        "coefficients": L.to_json(),
        "pi_valuations": [None if v == float("inf") else int(v) for v in L.valuations()],
        "np": np_.to_json(),
    }
    if params.tier_generic:
        gnp = generic_polygon(params)
        out["gnp"] = gnp.to_json()
        out["is_generic"] = np_ == gnp
        out["lies_above_gnp"] = lies_above(np_, gnp)
    print(json.dumps(out, indent=1))
    return 0


def cmd_np(args) -> int:
    _, _, _, _, np_ = _lfunction_data(args)
    _print_polygon("NP", np_, args.format)
    return 0 if is_symmetric(np_) else EXIT_INVARIANT


def cmd_census(args) -> int:
    from .report import census_tsv, plot_census

    params = _params(args)
    if not params.tier_generic:
        raise UsageError(f"census needs p >= 3d (d={args.d}, p={args.p})")
    config = _load_config(args.config)
    cap = args.census_cap or config.get("census_cap", CENSUS_CAP)
    try:
        result = census(args.d, args.p, args.m, args.mode, args.samples, args.seed,
                        args.with_congruence, args.workers, cap, args.field_seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    doc = result.to_json()
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(doc, fh, indent=1, sort_keys=True)
            fh.write("\n")
    if args.tsv:
        text = census_tsv(result)
        if args.tsv == "-":
            sys.stdout.write(text)
        else:
            with open(args.tsv, "w") as fh:
                fh.write(text)
    if args.svg:
        plot_census(result, args.svg)
    summary = doc["summary"]
    print(f"d={args.d} p={args.p} m={args.m} {args.mode}: {summary['records']} polynomials, "
          f"{summary['generic']} generic, {summary['non_generic']} non-generic", file=sys.stderr)
    print(f"GNP {result.gnp}  H = {doc['hasse_H']}", file=sys.stderr)
    for v in result.violations:
        print(f"VIOLATION {v}", file=sys.stderr)
    return 0 if result.ok else EXIT_INVARIANT


def cmd_congruence(args) -> int:
    params = _params(args)
    if not params.tier_congruence:
        raise UsageError(f"the congruence needs p >= d+3 (d={args.d}, p={args.p})")
    if args.coeffs:
        polys = [[c[0] for c in _parse_coeffs(args.coeffs, 1)]]
    elif args.random:
        rng = random.Random(args.seed)
        polys = [[0] + [rng.randrange(args.p) for _ in range(args.d - 1)] + [rng.randrange(1, args.p)]
                 for _ in range(args.random)]
    else:
        raise UsageError("give --coeffs or --random N")
    failed = 0
    reports = []
    for coeffs in polys:
        if len(coeffs) - 1 != params.d:
            raise UsageError(f"coefficients give degree {len(coeffs) - 1}, expected {params.d}")
        rep = trace_congruence_check(coeffs, args.p, args.precision)
        reports.append(rep.to_json())
        failed += not rep.passed
    print(json.dumps(reports, indent=1))
    return EXIT_INVARIANT if failed else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="genericnp", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def dp(p, need_p=True):
        p.add_argument("--d", type=int, required=True)
        if need_p:
            p.add_argument("--p", type=int, required=True)

    def fmt(p):
        p.add_argument("--format", choices=["text", "tsv"], default="text")

    p = sub.add_parser("hodge", help="Hodge polygon HP(d)")
    dp(p, need_p=False)
    fmt(p)
    p.set_defaults(func=cmd_hodge)

    p = sub.add_parser("gnp", help="generic Newton polygon GNP(d,p)")
    dp(p)
    fmt(p)
    p.set_defaults(func=cmd_gnp)

    p = sub.add_parser("hasse", help="Hasse polynomials in canonical text form")
    dp(p)
    p.add_argument("--which", choices=["P", "G", "H"], default="H")
    p.add_argument("--n", type=int, help="print the factor P_n instead")
    p.set_defaults(func=cmd_hasse)

    for name, func, helptext in (("lfunction", cmd_lfunction, "L-function coefficients and polygon"),
                                 ("np", cmd_np, "Newton polygon of L(f,T)")):
        p = sub.add_parser(name, help=helptext)
        dp(p)
        p.add_argument("--m", type=int, default=1)
        p.add_argument("--coeffs", required=True,
                       help="coefficients a_0,...,a_d; use c0:c1:... for elements of F_q")
        p.add_argument("--normalize", action="store_true")
        p.add_argument("--field-seed", type=int, default=0)
        if name == "np":
            fmt(p)
        p.set_defaults(func=func)

    p = sub.add_parser("census", help="stratum census checking the Hasse criterion")
    dp(p)
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--mode", choices=["exhaustive", "sample"], default="exhaustive")
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--field-seed", type=int, default=0)
    p.add_argument("--with-congruence", action="store_true")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--census-cap", type=int)
    p.add_argument("--config", help="JSON file with census_cap")
    p.add_argument("--json", metavar="PATH")
    p.add_argument("--tsv", metavar="PATH", nargs="?", const="-")
    p.add_argument("--svg", metavar="PATH")
    p.set_defaults(func=cmd_census)

    p = sub.add_parser("congruence", help="trace congruence for S_1(f) over F_p")
    dp(p)
    p.add_argument("--coeffs")
    p.add_argument("--random", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--precision", type=int)
    p.set_defaults(func=cmd_congruence)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        parser.error(str(exc))  # exits with EXIT_USAGE
    except ArithmeticError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
