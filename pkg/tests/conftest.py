from __future__ import annotations

import os
import time

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", deadline=None, max_examples=50, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("QG_HYPOTHESIS_PROFILE", "default"))



class _Criterion:
    def __init__(self, sink, num, title, limit):
        self.sink, self.num, self.title, self.limit = sink, num, title, limit

    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb):
        dt = time.perf_counter() - self.t0
        ok = exc_type is None and (self.limit is None or dt <= self.limit)
        note = "" if exc_type is None else f" [{exc_type.__name__}]"
        if exc_type is None and not ok:
            note = f" [over {self.limit:g} s]"
        self.sink.append((self.num, self.title, ok, dt, note))
        if exc_type is None and not ok:
            raise AssertionError(f"criterion {self.num} took {dt:.1f} s, limit {self.limit:g} s")
        return False


@pytest.fixture
def criterion(request):
    sink = request.config.__dict__.setdefault("_acceptance", [])
    return lambda num, title, limit=None: _Criterion(sink, num, title, limit)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    rows = config.__dict__.get("_acceptance")
    if not rows:
        return
    terminalreporter.section("acceptance criteria")
    for num, title, ok, dt, note in sorted(rows):
        terminalreporter.write_line(f"{num:>2}. {'PASS' if ok else 'FAIL'}  {title}  ({dt:.2f} s){note}")
