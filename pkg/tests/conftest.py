import socket
from pathlib import Path

import pytest

from trackletdb.fixtures import classroom_fixture, motorcycle_fixture

GOLDEN_DIR = Path(__file__).parent / "golden"


@pytest.fixture(scope="session")
def motorcycle():
    return motorcycle_fixture()


@pytest.fixture(scope="session")
def classroom():
    return classroom_fixture()


@pytest.fixture(scope="session")
def motorcycle_db(motorcycle):
    return motorcycle.build()


@pytest.fixture(scope="session")
def classroom_db(classroom):
    return classroom.build()


@pytest.fixture
def golden_dir():
    return GOLDEN_DIR


@pytest.fixture
def no_network(monkeypatch):
    """Fail the test on any attempt to open a network connection."""

    def blocked(*args, **kwargs):
        raise AssertionError("network egress attempted during an offline test")

    monkeypatch.setattr(socket.socket, "connect", blocked)
    monkeypatch.setattr(socket, "create_connection", blocked)
