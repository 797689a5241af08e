import os
import sys

import pytest

from randhorizon.verify import fixture


@pytest.fixture(scope="session")
def M1():
    return fixture("M1")


@pytest.fixture(scope="session")
def M2():
    return fixture("M2")


@pytest.fixture(scope="session")
def M3():
    return fixture("M3")


@pytest.fixture(scope="session")
def fixture_dir():
    return os.path.join(os.path.dirname(__import__("randhorizon").__file__), "fixtures")
