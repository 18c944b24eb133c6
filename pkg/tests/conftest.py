"""Collects acceptance outcomes and prints one line per criterion at the end of the run."""
from collections import defaultdict

import pytest

N_CRITERIA = 10


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(n): test belongs to acceptance criterion n")
    config._acceptance = defaultdict(list)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("acceptance")
    if mark is None:
        return
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        notes = [v for k, v in item.user_properties if k == "measured"]
        item.config._acceptance[mark.args[0]].append((item.name, rep.passed, notes))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    results = getattr(config, "_acceptance", None)
    if not results:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n in range(1, N_CRITERIA + 1):
        runs = results.get(n, [])
        if not runs:
            tr.write_line(f"criterion {n:2d}: NOT RUN")
            continue
        failed = [name for name, ok, _ in runs if not ok]
        status = "PASS" if not failed else "FAIL"
        tr.write_line(f"criterion {n:2d}: {status} ({len(runs) - len(failed)}/{len(runs)} tests)")
        for name, ok, notes in runs:
            for note in notes:
                tr.write_line(f"    {'ok  ' if ok else 'FAIL'} {name}: {note}")
