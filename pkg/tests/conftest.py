import os

import pytest

from qcot.algebra import parse_algebra

FIXDIR = os.path.join(os.path.dirname(__file__), "fixtures")

FIXTURE_NAMES = ["point", "loop_x2", "kA2", "kA3", "kQ_beta_alpha"]


def fixture_path(name: str) -> str:
    return os.path.join(FIXDIR, name + ".json")


@pytest.fixture(scope="session")
def algebras():
    return {name: parse_algebra(fixture_path(name)) for name in FIXTURE_NAMES}


@pytest.fixture(scope="session")
def kqba(algebras):
    return algebras["kQ_beta_alpha"]


@pytest.fixture(scope="session")
def ka2(algebras):
    return algebras["kA2"]


@pytest.fixture(scope="session")
def ka3(algebras):
    return algebras["kA3"]


@pytest.fixture(scope="session")
def point(algebras):
    return algebras["point"]


@pytest.fixture(scope="session")
def loop(algebras):
    return algebras["loop_x2"]
