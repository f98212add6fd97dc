import pytest
from hypothesis import HealthCheck, settings

from cogalois.catalog import abelian, by_name, cyclic, dihedral, small_groups

settings.register_profile("default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

SMALL = small_groups(8)


@pytest.fixture
def s3():
    return by_name("S3")


@pytest.fixture
def d8():
    return dihedral(8)


# one line per acceptance criterion, printed at the end of the session
ACCEPTANCE: dict[int, str] = {}


def record(criterion: int, ok: bool, detail: str) -> str:
    line = f"criterion {criterion:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE[criterion] = line
    print(line)
    return line


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[k])
