import pytest
from hypothesis import settings

from nazeta.curves import HyperellipticCurve
from nazeta.field import make_field

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


def curve(p, f, k=1):
    return HyperellipticCurve(make_field(p, k), tuple(f))


@pytest.fixture(scope="session")
def c3():
    return curve(3, (1, 0, 0, 0, 0, 1))


@pytest.fixture(scope="session")
def c5():
    return curve(5, (0, 1, 0, 0, 0, 1))


ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
