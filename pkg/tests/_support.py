"""Helpers shared by the test modules: catalogues, cached groups, criterion log."""

from __future__ import annotations

import json
import time
from contextlib import contextmanager
from functools import lru_cache
from pathlib import Path

from levi_slope.parabolic import minimal_admissible
from levi_slope.root_datum import build_simple
from levi_slope.weyl_rel import relative_weyl

FIXTURES = Path(__file__).parent / "fixtures"

# (number, title, passed, seconds, limit, note) appended by the acceptance tests
CRITERIA: list[tuple[int, str, bool, float, float | None, str]] = []


@contextmanager
def criterion(number: int, title: str, limit: float | None = None):
    start = time.perf_counter()
    note = ""
    try:
        yield
    except BaseException as exc:
        note = str(exc).splitlines()[0][:160] if str(exc) else type(exc).__name__
        CRITERIA.append((number, title, False, time.perf_counter() - start, limit, note))
        raise
    elapsed = time.perf_counter() - start
    ok = limit is None or elapsed < limit
    if not ok:
        note = f"took {elapsed:.1f}s, limit {limit}s"
    CRITERIA.append((number, title, ok, elapsed, limit, note))
    assert ok, note


def load_fixture(name: str):
    return json.loads((FIXTURES / name).read_text())


@lru_cache(maxsize=None)
def adjoint_reduction(kind: str, rank: int, lift: tuple[int, ...]):
    """Minimal reduction and relative Weyl group, shared across test modules."""
    d = build_simple(kind, rank, "adjoint")
    mr = minimal_admissible(d, lift)
    return d, mr, relative_weyl(d, mr.parabolic)
