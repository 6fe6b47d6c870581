"""Analysis reports and the table of minimal Levi subgroups.

Everything here returns plain JSON-ready dictionaries so that output is
byte-stable: lists are in a fixed order and rationals are strings.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterable, Sequence

from .parabolic import MinimalReduction, minimal_admissible, uniqueness_certificate
from .root_datum import (
    RootDatum,
    build_simple,
    check_type_rank,
    format_type,
    pi1,
    pi1_classes,
)
from .slope import levi_type
from .stability import stable_exists_typeA
from .weyl_rel import (
    DEFAULT_ORBIT_CAP,
    acts_faithfully_on_quotient,
    degree_invariance_condition,
    relative_weyl,
)

SCHEMA_VERSION = 1
DEFAULT_RELATIVE_CAP = 10**6
TABLE_FAMILIES = ("A", "B", "C", "D", "E")


def _frac(x: Fraction) -> str:
    return str(Fraction(x))


def gl_block_degrees(n: int, nodes: Iterable[int], lift: Sequence[int]) -> list[int]:
    """Degrees of the diagonal blocks of a standard Levi of ``GL_n``.

    Node ``i`` joins coordinates ``i`` and ``i+1``; a block's degree is the
    sum of the lift's coordinates in it (independent of the lift chosen).
    """
    nodes = set(nodes)
    out, cur = [], 0
    for k in range(n):
        cur += lift[k]
        if (k + 1) not in nodes:
            out.append(cur)
            cur = 0
    return out


@dataclass
class Caps:
    orbit: int = DEFAULT_ORBIT_CAP
    weyl: int = DEFAULT_RELATIVE_CAP


@dataclass
class AnalysisReport:
    group: dict[str, Any]
    degree: dict[str, Any]
    parabolic: dict[str, Any]
    relative_weyl: dict[str, Any]
    stability: dict[str, Any]
    checks: dict[str, bool]
    timing_s: float | None = field(default=None)

    def to_json(self) -> dict[str, Any]:
        out = {
            "schema": SCHEMA_VERSION,
            "group": self.group,
            "degree": self.degree,
            "minimal_parabolic": self.parabolic,
            "relative_weyl": self.relative_weyl,
            "stability": self.stability,
            "checks": self.checks,
        }
        if self.timing_s is not None:
            out["timing_s"] = round(self.timing_s, 6)
        return out


def analyze(d: RootDatum, lift: Sequence[int], caps: Caps | None = None,
            gl_rank: int | None = None, timing: bool = False) -> AnalysisReport:
    caps = caps or Caps()
    start = time.perf_counter()
    lift = tuple(int(x) for x in lift)
    q = pi1(d)
    mr = minimal_admissible(d, lift)
    rw = relative_weyl(d, mr.parabolic, orbit_cap=caps.orbit, weyl_cap=caps.weyl)
    verdict = stable_exists_typeA(d, lift)
    ctype = rw.coxeter_type

    par: dict[str, Any] = {
        "nodes": sorted(mr.parabolic.nodes),
        "levi_type": format_type(levi_type(d, mr.parabolic)),
        "degree_lift": list(mr.lift),
        "g_slope": [_frac(x) for x in mr.g_slope],
    }
    if gl_rank is not None:
        par["block_degrees"] = gl_block_degrees(gl_rank, mr.parabolic.nodes, mr.lift)
    report = AnalysisReport(
        group={
            "name": d.name,
            "type": d.type_string(),
            "rank": d.rank,
            "semisimple_rank": d.num_simple,
            "pi1_invariants": [x for x in q.diagonal if x != 1],
        },
        degree={"lift": list(lift), "pi1_class": list(q.coordinates(lift))},
        parabolic=par,
        relative_weyl={
            "order": rw.order,
            "orbit_size": rw.orbit_size,
            "type": ctype.abstract_label,
            "type_convention": ctype.convention_label,
            "reflection_group": ctype.reflection_group,
        },
        stability={
            "exists_stable": verdict.exists_stable,
            "route_minimal": verdict.route_minimal,
            "route_typeA": verdict.route_typeA,
            "adjoint_factors": None if verdict.adjoint_factors is None
            else [list(f) for f in verdict.adjoint_factors],
        },
        checks={
            "uniqueness": uniqueness_certificate(d, mr.parabolic),
            "faithful_on_quotient": acts_faithfully_on_quotient(d, rw),
            "degree_fixed": degree_invariance_condition(d, rw, mr.degree),
        },
    )
    if timing:
        report.timing_s = time.perf_counter() - start
    return report


# --------------------------------------------------------------------------
# Table
# --------------------------------------------------------------------------


def family_ranks(family: str, max_rank: int) -> list[int]:
    low = {"A": 1, "B": 2, "C": 2, "D": 4, "E": 6, "F": 4, "G": 2}[family]
    high = {"E": 8, "F": 4, "G": 2}.get(family, max_rank)
    out = []
    for r in range(low, min(high, max_rank) + 1):
        try:
            check_type_rank(family, r)
        except ValueError:
            continue
        out.append(r)
    return out


def table_rows(families: Iterable[str] = TABLE_FAMILIES, max_rank: int = 8,
               caps: Caps | None = None) -> list[dict[str, Any]]:
    """One row per (family, rank, nonzero class of pi_1) of the adjoint group."""
    caps = caps or Caps()
    rows = []
    for family in families:
        family = family.upper()
        for r in family_ranks(family, max_rank):
            d = build_simple(family, r, "adjoint")
            q = pi1(d)
            for lift in pi1_classes(d):
                cls = q.coordinates(lift)
                if not any(cls):
                    continue  # degree 0 gives the Borel
                rows.append(table_row(d, family, r, lift, cls, caps))
    return rows


def table_row(d: RootDatum, family: str, r: int, lift, cls, caps: Caps) -> dict[str, Any]:
    mr: MinimalReduction = minimal_admissible(d, lift)
    rw = relative_weyl(d, mr.parabolic, orbit_cap=caps.orbit, weyl_cap=caps.weyl)
    return {
        "group": f"{family}{r}",
        "family": family,
        "rank": r,
        "degree": list(cls),
        "lift": list(lift),
        "nodes": sorted(mr.parabolic.nodes),
        "levi_type": format_type(levi_type(d, mr.parabolic)),
        "w_order": rw.order,
        "w_type": rw.coxeter_type.abstract_label,
        "w_type_convention": rw.coxeter_type.convention_label,
    }


def _degree_label(row: dict[str, Any]) -> str:
    deg = row["degree"]
    return str(deg[0]) if len(deg) == 1 else "(" + ",".join(map(str, deg)) + ")"


def render_table(rows: list[dict[str, Any]], fmt: str) -> str:
    if fmt == "json":
        import json

        return json.dumps({"schema": SCHEMA_VERSION, "rows": rows}, sort_keys=True, indent=2)
    header = ["G", "deg", "Levi", "nodes", "W type", "|W|"]
    body = [
        [r["group"], _degree_label(r), r["levi_type"], " ".join(map(str, r["nodes"])),
         r["w_type_convention"], str(r["w_order"])]
        for r in rows
    ]
    if fmt == "md":
        lines = ["| " + " | ".join(header) + " |", "|" + "---|" * len(header)]
        lines += ["| " + " | ".join(b) + " |" for b in body]
        return "\n".join(lines)
    if fmt == "latex":
        def tex_type(s: str) -> str:
            if s == "1":
                return "1"
            parts = []
            for p in s.split("x"):
                parts.append(p if p.startswith("I2(") else f"{p[0]}_{{{p[1:]}}}")
            return "$" + r"\times ".join(parts) + "$"

        lines = [r"\begin{tabular}{|c|c|c|c|c|c|}", r"\hline",
                 " & ".join(["$G$", "deg", "Levi", "nodes", "$W_{M,G}$", "order"]) + r" \\",
                 r"\hline"]
        for b in body:
            g = f"${b[0][0]}_{{{b[0][1:]}}}$"
            lines.append(" & ".join([g, b[1], tex_type(b[2]), b[3], tex_type(b[4]), b[5]]) + r" \\")
        lines += [r"\hline", r"\end{tabular}"]
        return "\n".join(lines)
    raise ValueError(f"unknown format {fmt!r}")
