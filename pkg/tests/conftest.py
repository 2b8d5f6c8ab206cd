import pytest

from braidcover.enumerator import SearchConfig, brute_force_oracle, enumerate_reps


@pytest.fixture(scope="session")
def fixed_runs():
    return {n: enumerate_reps(SearchConfig(n)) for n in range(1, 7)}


@pytest.fixture(scope="session")
def full_runs():
    return {n: enumerate_reps(SearchConfig(n, fix_sigma=False)) for n in range(1, 5)}


@pytest.fixture(scope="session")
def oracle_runs():
    return {n: brute_force_oracle(n) for n in (1, 2, 3)}


_ACCEPTANCE: dict[str, list] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(cid, text): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("acceptance")
    if mark is None:
        return
    cid, text = mark.args
    entry = _ACCEPTANCE.setdefault(cid, [text, "PASS"])
    if rep.skipped and rep.when in ("setup", "call"):
        if entry[1] == "PASS":
            entry[1] = "SKIP"
    elif rep.failed:
        entry[1] = "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for cid in sorted(_ACCEPTANCE, key=lambda c: int(c)):
        text, status = _ACCEPTANCE[cid]
        terminalreporter.write_line(f"[{status}] criterion {cid}: {text}")
