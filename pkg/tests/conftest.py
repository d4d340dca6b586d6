import pytest

from helpers import DRAWING, R1, R2

from idmap.javaparse import extract_variant


@pytest.fixture(scope="session")
def drawing_models():
    r1, d1 = extract_variant(DRAWING / "release1", R1)
    r2, d2 = extract_variant(DRAWING / "release2", R2)
    assert not d1 and not d2
    return r1, r2


def pytest_terminal_summary(terminalreporter):
    from helpers import ACCEPTANCE_RESULTS

    if ACCEPTANCE_RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_RESULTS:
            terminalreporter.write_line(line)
