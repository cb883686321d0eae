import numpy as np
import pytest

from entlab._backend import implementations


@pytest.fixture(params=sorted(implementations()))
def kernels(request):
    """Each available kernel backend in turn."""
    return implementations()[request.param]


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


# Acceptance criteria: each criterion may be checked by several tests; the
# terminal summary prints one aggregated PASS/FAIL line per criterion.
_ACCEPTANCE: dict[str, dict] = {}


@pytest.fixture
def criterion(request):
    marker = request.node.get_closest_marker("criterion")
    key, title = marker.args
    entry = _ACCEPTANCE.setdefault(key, {"title": title, "failures": [], "runs": 0})
    notes: list[str] = []
    yield notes
    entry["runs"] += 1
    rep = getattr(request.node, "rep_call", None)
    if rep is None or not rep.passed:
        reason = rep.longrepr.reprcrash.message if rep is not None and rep.failed else "not run"
        entry["failures"].append(f"{request.node.name}: {reason.splitlines()[0]}")
    entry.setdefault("notes", []).extend(notes)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(key, title): acceptance criterion checked by a test")


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for key in sorted(_ACCEPTANCE, key=lambda k: int(k[1:])):
        e = _ACCEPTANCE[key]
        status = "PASS" if not e["failures"] else "FAIL"
        extra = "; ".join(e.get("notes", []))
        tr.write_line(f"{key:>4} {status}  {e['title']}" + (f"  [{extra}]" if extra else ""))
        for f in e["failures"]:
            tr.write_line(f"          {f}")
