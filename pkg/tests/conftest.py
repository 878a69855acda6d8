from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from milnor_boundary import build_plumbing, gen_tab  # noqa: E402

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def tab32():
    gamma, mp = gen_tab(3, 2)
    return gamma, mp, build_plumbing(gamma, mp)


@pytest.fixture(scope="session")
def tab75():
    gamma, mp = gen_tab(7, 5)
    return gamma, mp, build_plumbing(gamma, mp)


@pytest.fixture(scope="session")
def omni():
    from milnor_boundary.formats import read_resolution

    gamma, mp, _, _ = read_resolution((FIXTURES / "omni.json").read_text(encoding="utf-8"))
    return gamma, mp, build_plumbing(gamma, mp)


# -- acceptance reporting ------------------------------------------------------

_ACCEPTANCE: dict[int, tuple[str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion covered by a test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or (rep.when != "call" and rep.passed):
        return
    number, title = marker.args
    previous = _ACCEPTANCE.get(number, (title, "PASS"))[1]
    status = "PASS" if rep.passed and previous == "PASS" else "FAIL"
    _ACCEPTANCE[number] = (title, status)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        title, status = _ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number}: {status}  {title}")
