from __future__ import annotations

from functools import lru_cache
from pathlib import Path

import pytest

from cartan_courant.courant import CourantAlgebroid
from cartan_courant.modelfile import bundled_model, load_model

FIXTURES = Path(__file__).parent / "fixtures"

# filled by test_acceptance, printed once at the end of the session
ACCEPTANCE_LINES: dict[int, str] = {}


@lru_cache(maxsize=None)
def bundled(name: str):
    return load_model(bundled_model(name))


@lru_cache(maxsize=None)
def courant(name: str) -> CourantAlgebroid:
    return CourantAlgebroid(bundled(name).model)


@pytest.fixture(scope="session")
def d8():
    return bundled("d8-hyperbolic").model


@pytest.fixture(scope="session")
def flat():
    return bundled("flat-abelian").model


@pytest.fixture(scope="session")
def sl2():
    return bundled("sl2-borel").model


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[k])
