from pathlib import Path

import numpy as np
import pytest

from chaoscell.cipher import MasterKey
from chaoscell.pgm import read_pgm

DATA = Path(__file__).parent / "data"

# The repository's fixed test key.  Every reference pin below derives from it.
FIXED_KEY = MasterKey.from_values(3.99, 0.123456789, 1)

# 256x256 natural gray test images (regenerate with tools/make_fixtures.py)
TEST_IMAGES = ("cameraman", "chelsea")


@pytest.fixture
def fixed_key():
    return FIXED_KEY


@pytest.fixture
def rng():
    return np.random.default_rng(20241014)


@pytest.fixture(scope="session")
def natural_images():
    return {name: read_pgm(DATA / f"{name}.pgm") for name in TEST_IMAGES}


_ACCEPTANCE = []


@pytest.fixture
def criterion(capsys):
    """Record one pass/fail line per acceptance criterion."""

    def report(number, title, ok, detail):
        line = f"criterion {number:>2} {'PASS' if ok else 'FAIL'}  {title}: {detail}"
        _ACCEPTANCE.append(line)
        with capsys.disabled():
            print("\n" + line)
        assert ok, line

    return report


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
