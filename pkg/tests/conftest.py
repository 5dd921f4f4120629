import os

import pytest
from hypothesis import HealthCheck, settings

from matroidflat import constructions as C
from matroidflat import verify as V

settings.register_profile(
    "default",
    max_examples=int(os.environ.get("HYPOTHESIS_MAX_EXAMPLES", "60")),
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


@pytest.fixture(scope="session")
def matroid_y():
    return V.build_matroid_y()


@pytest.fixture(scope="session")
def twelve():
    return V.build_twelve()


@pytest.fixture(scope="session")
def m5():
    return C.family_Mn(5)


@pytest.fixture(scope="session")
def m6():
    return C.family_Mn(6)


@pytest.fixture(scope="session")
def k4():
    return C.complete_graph(4)


def mask(m, *labels):
    return m.ground.mask([str(x) for x in labels])


def pytest_terminal_summary(terminalreporter):
    rows = {}
    for key in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(key, []):
            nodeid = getattr(rep, "nodeid", "")
            if "test_acceptance.py::test_criterion_" not in nodeid or rep.when not in ("call", "setup"):
                continue
            name = nodeid.split("::")[-1][len("test_criterion_"):]
            num, _, title = name.partition("_")
            if key != "passed" or num not in rows:
                rows[num] = ("PASS" if key == "passed" else "FAIL", title.replace("_", " "))
    if not rows:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(rows, key=int):
        status, title = rows[num]
        terminalreporter.write_line(f"criterion {num}: {status}  {title}")
