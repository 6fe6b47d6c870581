"""Conformance sweeps driven by ``levi-slope verify``.

Each sweep records passes and failures per named invariant instead of
stopping at the first problem, so the command can report every violation.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Any, Callable, Iterator

from .lattice import IntMatrix, integer_kernel
from .parabolic import (
    brute_force_minimal,
    minimal_admissible,
    parabolic_via_weights,
    uniqueness_certificate,
)
from .root_datum import (
    EnumerationCapError,
    RootDatum,
    build_gl,
    build_simple,
    classify_cartan,
    fundamental_weights,
    pi1_classes,
)
from .slope import (
    Degree,
    Parabolic,
    check_slope_proj,
    check_slope_scalar,
    levi_cartan,
    levi_quotient,
    slope,
)
from .stability import stable_exists_minimal, stable_exists_typeA
from .weyl_rel import acts_faithfully_on_quotient, degree_invariance_condition, relative_weyl

FAULTS = ("cartan",)
SIMPLE_KINDS = ("A", "B", "C", "D", "E", "F", "G")
_MIN_RANK = {"A": 1, "B": 2, "C": 2, "D": 3, "E": 6, "F": 4, "G": 2}
_MAX_RANK = {"E": 8, "F": 4, "G": 2}


def simple_catalogue(max_rank: int) -> Iterator[RootDatum]:
    for kind in SIMPLE_KINDS:
        for r in range(_MIN_RANK[kind], min(_MAX_RANK.get(kind, max_rank), max_rank) + 1):
            if kind in "FG" and r != _MIN_RANK[kind]:
                continue
            for iso in ("adjoint", "simply_connected"):
                yield build_simple(kind, r, iso)


def gl_catalogue(max_n: int) -> Iterator[tuple[RootDatum, list[tuple[int, ...]]]]:
    for n in range(1, max_n + 1):
        yield build_gl(n), [(0,) * (n - 1) + (k,) for k in range(n)]


def catalogue(max_rank: int) -> Iterator[tuple[RootDatum, list[tuple[int, ...]]]]:
    """Every simple datum of rank <= ``max_rank`` in both isogeny forms with all
    its pi_1 classes, then ``GL_n`` for ``n <= max_rank`` with every degree mod n."""
    for d in simple_catalogue(max_rank):
        yield d, pi1_classes(d)
    yield from gl_catalogue(max_rank)


def with_mutated_cartan(d: RootDatum) -> RootDatum:
    """Copy of ``d`` whose cached Cartan matrix has one off-diagonal entry changed."""
    bad = replace(d)
    c = d.cartan.to_lists()
    if len(c) >= 2:
        c[0][1] -= 1
    elif c:
        c[0][0] += 1
    bad.__dict__["cartan"] = IntMatrix.from_rows(c, cols=len(c))
    return bad


@dataclass
class Summary:
    passed: dict[str, int] = field(default_factory=dict)
    failures: list[dict[str, Any]] = field(default_factory=list)

    def check(self, name: str, ok: bool, **detail: Any) -> None:
        self.passed.setdefault(name, 0)
        if ok:
            self.passed[name] += 1
        else:
            self.failures.append({"invariant": name, **{k: _plain(v) for k, v in detail.items()}})

    def guard(self, name: str, fn: Callable[[], bool], **detail: Any) -> None:
        try:
            ok = bool(fn())
        except (AssertionError, ArithmeticError, ValueError) as exc:
            detail["error"] = f"{type(exc).__name__}: {exc}"
            ok = False
        self.check(name, ok, **detail)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json(self) -> dict[str, Any]:
        failed: dict[str, int] = {}
        for f in self.failures:
            failed[f["invariant"]] = failed.get(f["invariant"], 0) + 1
        return {
            "schema": 1,
            "ok": self.ok,
            "checks": {
                name: {"passed": self.passed[name], "failed": failed.get(name, 0)}
                for name in sorted(self.passed)
            },
            "failures": self.failures,
        }


def _plain(v: Any) -> Any:
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    if isinstance(v, Fraction):
        return str(v)
    return v


def run(max_rank: int = 5, fault: str | None = None, seed: int = 0) -> Summary:
    if fault is not None and fault not in FAULTS:
        raise ValueError(f"unknown fault {fault!r}")
    rng = random.Random(seed)
    s = Summary()
    for d, lifts in catalogue(max_rank):
        algo = with_mutated_cartan(d) if fault == "cartan" else d
        for lift in lifts:
            _check_reduction(s, d, algo, lift)
        _check_choice_independence(s, d, algo, lifts, rng)
        _check_slope_lemmas(s, d, rng)
    _check_uniqueness(s, min(max_rank, 5))
    return s


def _check_reduction(s: Summary, d: RootDatum, algo: RootDatum, lift) -> None:
    where = {"datum": d.name, "lift": list(lift)}
    try:
        mr = minimal_admissible(algo, lift)
    except (AssertionError, ArithmeticError, ValueError) as exc:
        s.check("minimal_admissible_runs", False, error=str(exc), **where)
        return
    if d.num_simple <= 9:
        bf = brute_force_minimal(d, lift)
        s.check("oracle_equivalence",
                bf.parabolic == mr.parabolic and bf.degree.same_class(d, mr.degree),
                minimal=sorted(mr.parabolic.nodes), oracle=sorted(bf.parabolic.nodes), **where)
    s.guard("degree_contract",
            lambda: slope(d, mr.degree) == slope(d, Degree(Parabolic.full(d), lift))
            and Degree(Parabolic.full(d), mr.lift).same_class(d, Degree(Parabolic.full(d), lift)),
            **where)
    s.guard("levi_type_A", lambda: _levi_is_type_a(d, mr.parabolic), **where)
    s.guard("stability_equivalence",
            lambda: stable_exists_minimal(algo, lift)
            == stable_exists_typeA(d, lift, check=False).route_typeA, **where)
    if mr.parabolic.nodes:
        try:
            rw = relative_weyl(d, mr.parabolic, weyl_cap=10**6)
        except EnumerationCapError:
            return
        except AssertionError as exc:
            s.check("relative_weyl_consistency", False, error=str(exc), **where)
            return
        s.check("relative_weyl_consistency", True)
        s.guard("faithful_on_quotient", lambda: acts_faithfully_on_quotient(d, rw), **where)
        s.guard("degree_fixed", lambda: degree_invariance_condition(d, rw, mr.degree), **where)


def _levi_is_type_a(d: RootDatum, p: Parabolic) -> bool:
    from .root_datum import cartan_components

    c = levi_cartan(d, p)
    return all(classify_cartan(c.submatrix(k, k))[0] == "A" for k in cartan_components(c))


def _check_choice_independence(s: Summary, d: RootDatum, algo: RootDatum, lifts, rng, trials=5):
    omegas = fundamental_weights(d)
    central = integer_kernel(d.coroots.T) if d.num_simple < d.rank else []
    for lift in lifts:
        try:
            _choice_trials(s, d, algo, lift, omegas, central, rng, trials)
        except (AssertionError, ArithmeticError, ValueError) as exc:
            s.check("minimal_admissible_runs", False, error=str(exc), datum=d.name, lift=list(lift))


def _choice_trials(s: Summary, d: RootDatum, algo: RootDatum, lift, omegas, central, rng,
               trials: int) -> None:
    base = minimal_admissible(algo, lift)
    for _ in range(trials):
        shift = list(lift)
        for i in range(d.num_simple):
            c = rng.randint(-3, 3)
            shift = [x + c * y for x, y in zip(shift, d.coroot(i))]
        other = minimal_admissible(algo, shift)
        s.check("choice_independence_shift",
                other.parabolic == base.parabolic
                and levi_quotient(d, base.parabolic).equal(other.lift, base.lift),
                datum=d.name, lift=list(lift), shifted=shift)
        xi = [Fraction(0)] * d.rank
        for v in central:
            c = Fraction(rng.randint(-5, 5), rng.randint(1, 4))
            xi = [a + c * b for a, b in zip(xi, v)]
        perturbed = [tuple(w + x for w, x in zip(om, xi)) for om in omegas]
        s.check("choice_independence_weights",
                parabolic_via_weights(d, lift, perturbed) == base.parabolic,
                datum=d.name, lift=list(lift))


def _check_slope_lemmas(s: Summary, d: RootDatum, rng, trials=3) -> None:
    r = d.num_simple
    for _ in range(trials):
        big = Parabolic(i for i in range(1, r + 1) if rng.random() < 0.6)
        small = Parabolic(i for i in big.nodes if rng.random() < 0.5)
        lift = [rng.randint(-4, 4) for _ in range(d.rank)]
        deg = Degree(big, lift)
        s.check("slope_scalar", check_slope_scalar(d, deg), datum=d.name, lift=lift,
                nodes=sorted(big.nodes))
        s.check("slope_projection", check_slope_proj(d, deg, small), datum=d.name, lift=lift,
                nodes=sorted(big.nodes), smaller=sorted(small.nodes))


def _check_uniqueness(s: Summary, max_rank: int) -> None:
    import itertools

    for d in simple_catalogue(max_rank):
        r = d.num_simple
        for size in range(r + 1):
            for nodes in itertools.combinations(range(1, r + 1), size):
                s.check("uniqueness_certificate", uniqueness_certificate(d, Parabolic(nodes)),
                        datum=d.name, nodes=list(nodes))
