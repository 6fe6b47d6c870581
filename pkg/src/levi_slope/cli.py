"""``levi-slope``: analyze a (group, degree) pair, print the Levi table, run sweeps.

Exit codes: 0 ok, 1 verification failure, 2 bad input, 3 resource cap hit.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from pathlib import Path
from typing import Sequence

from .root_datum import (
    EnumerationCapError,
    InvalidRootDatum,
    RootDatum,
    build_gl,
    build_simple,
    pi1,
    product,
)
from .report import TABLE_FAMILIES, Caps, analyze, render_table, table_rows
from .verify import FAULTS, run

EXIT_OK, EXIT_VERIFY, EXIT_INPUT, EXIT_CAP = 0, 1, 2, 3
ISOGENIES = ("adjoint", "simply_connected")


class InputError(ValueError):
    pass


def _simple_from_token(token: str, isogeny: str) -> RootDatum:
    m = re.fullmatch(r"([A-Ga-g])(\d+)", token.strip())
    if not m:
        raise InputError(f"cannot parse simple type {token!r}; expected e.g. E7")
    return build_simple(m.group(1).upper(), int(m.group(2)), isogeny)


def _factor(token: str) -> RootDatum:
    token = token.strip()
    m = re.fullmatch(r"GL(\d+)", token, flags=re.IGNORECASE)
    if m:
        return build_gl(int(m.group(1)))
    name, _, iso = token.partition(":")
    iso = iso or "adjoint"
    if iso not in ISOGENIES:
        raise InputError(f"unknown isogeny {iso!r} in {token!r}")
    return _simple_from_token(name, iso)


def parse_group(args: argparse.Namespace) -> tuple[RootDatum, int | None]:
    """Datum and, for ``GL_n``, its ``n`` (used for block degrees)."""
    given = [x for x in (args.gl, args.simple, args.product, args.datum_json) if x is not None]
    if len(given) != 1:
        raise InputError("give exactly one of --gl, --simple, --product, --datum-json")
    if args.gl is not None:
        return build_gl(args.gl), args.gl
    if args.simple is not None:
        return _simple_from_token(args.simple, args.isogeny), None
    if args.product is not None:
        factors = [_factor(t) for t in args.product.split(",") if t.strip()]
        if not factors:
            raise InputError("--product needs at least one factor")
        d = factors[0]
        for f in factors[1:]:
            d = product(d, f)
        return d, None
    from .root_datum import from_json

    try:
        data = json.loads(Path(args.datum_json).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read datum JSON: {exc}") from exc
    return from_json(data), (int(data["n"]) if data.get("builder") == "gl" else None)


def parse_lift(d: RootDatum, args: argparse.Namespace, gl_rank: int | None) -> tuple[int, ...]:
    if args.degree_lift is not None and args.degree is not None:
        raise InputError("give at most one of --degree-lift and --degree")
    if args.degree_lift is not None:
        try:
            lift = tuple(int(x) for x in args.degree_lift.split(",") if x.strip() != "")
        except ValueError as exc:
            raise InputError(f"bad --degree-lift: {exc}") from exc
        if len(lift) != d.rank:
            raise InputError(f"--degree-lift has {len(lift)} entries, datum rank is {d.rank}")
        return lift
    k = args.degree or 0
    if gl_rank is not None:
        return (0,) * (gl_rank - 1) + (k,)
    q = pi1(d)
    gens = q.generators()
    if not gens:
        return (0,) * d.rank
    if len(gens) > 1:
        raise InputError("pi_1 is not cyclic; use --degree-lift")
    return tuple(k * x for x in gens[0])


def _add_group_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--gl", type=int, metavar="N", help="the group GL_N")
    p.add_argument("--simple", metavar="TYPE", help="simple type such as E7")
    p.add_argument("--isogeny", choices=ISOGENIES, default="adjoint")
    p.add_argument("--product", metavar="SPEC,SPEC",
                   help="product of factors, e.g. GL2,A1:adjoint,B3:simply_connected")
    p.add_argument("--datum-json", metavar="FILE", help="root datum in JSON form")
    p.add_argument("--degree-lift", metavar="C1,...,CN", help="integer lift of the degree")
    p.add_argument("--degree", type=int, metavar="K",
                   help="K*e_N for GL_N, otherwise K times the SNF generator of a cyclic pi_1")


def _add_caps(p: argparse.ArgumentParser) -> None:
    p.add_argument("--orbit-cap", type=int, default=Caps.orbit)
    p.add_argument("--weyl-cap", type=int, default=Caps.weyl)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="levi-slope", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="minimal parabolic, relative Weyl group, stability")
    _add_group_flags(a)
    _add_caps(a)
    a.add_argument("--timing", action="store_true", help="include wall-clock time in the report")

    t = sub.add_parser("table", help="Levi subgroups and relative Weyl groups by family")
    t.add_argument("--families", default=",".join(TABLE_FAMILIES))
    t.add_argument("--max-rank", type=int, default=8)
    t.add_argument("--format", choices=("json", "md", "latex"), default="md")
    _add_caps(t)

    v = sub.add_parser("verify", help="run the conformance sweeps")
    v.add_argument("--max-rank", type=int, default=5)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--inject-fault", choices=FAULTS, default=None,
                   help="deliberately corrupt the algorithm to exercise the checks")
    return parser


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "analyze":
            d, gl_rank = parse_group(args)
            lift = parse_lift(d, args, gl_rank)
            caps = Caps(args.orbit_cap, args.weyl_cap)
            report = analyze(d, lift, caps, gl_rank=gl_rank, timing=args.timing)
            print(_dump(report.to_json()))
            return EXIT_OK
        if args.command == "table":
            families = [f.strip().upper() for f in args.families.split(",") if f.strip()]
            bad = [f for f in families if f not in "ABCDEFG" or len(f) != 1]
            if bad:
                raise InputError(f"unknown families {bad}")
            rows = table_rows(families, args.max_rank, Caps(args.orbit_cap, args.weyl_cap))
            print(render_table(rows, args.format))
            return EXIT_OK
        summary = run(args.max_rank, args.inject_fault, args.seed)
        print(_dump(summary.to_json()))
        return EXIT_OK if summary.ok else EXIT_VERIFY
    except (InputError, InvalidRootDatum) as exc:
        print(f"levi-slope: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except EnumerationCapError as exc:
        print(f"levi-slope: resource cap: {exc}", file=sys.stderr)
        return EXIT_CAP


if __name__ == "__main__":
    sys.exit(main())
