import json
import pathlib

import pytest

from icequiver import IQP, decode_document, potential

FIXTURES = pathlib.Path(__file__).resolve().parent.parent / "fixtures"


def load_fixture(name):
    return decode_document(json.loads((FIXTURES / name).read_text()))


def fixture_text(name):
    return (FIXTURES / name).read_text()


@pytest.fixture
def triangle():
    return load_fixture("triangle.json")


@pytest.fixture
def five():
    return load_fixture("five.json")


@pytest.fixture
def loop_quiver():
    return load_fixture("loop.json")


def retruncate(iqp, n):
    """The same IQP with a different series truncation."""
    q = iqp.ice_quiver.quiver
    terms = [(c, w) for w, c in iqp.potential.terms.items()]
    return IQP(iqp.ice_quiver, potential(q, terms, n))


def oracle_arrows(quiver):
    """The (id, source, target) triples the oracle module works with."""
    return [(a.id, a.source, a.target) for a in quiver.arrows]
