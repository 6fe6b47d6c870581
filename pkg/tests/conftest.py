from __future__ import annotations

from hypothesis import settings

import _support

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


def pytest_terminal_summary(terminalreporter):
    if not _support.CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, ok, seconds, limit, note in sorted(_support.CRITERIA):
        limit_txt = f" (limit {limit:g}s)" if limit else ""
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {title}  [{seconds:.2f}s{limit_txt}]"
        if note:
            line += f"  -- {note}"
        terminalreporter.write_line(line)
