"""
Test configuration
"""

from pathlib import Path

import pytest

from decompspace.corpus import corpus_space
from decompspace.sset import Provenance, TruncatedSSet


@pytest.fixture
def data_path():
    """Path to the golden documents"""
    return Path(__file__).parents[2] / "data"


@pytest.fixture
def chain2():
    """Nerve of 0 < 1"""
    return corpus_space("chain2")


@pytest.fixture
def chain3():
    """Nerve of 0 < 1 < 2 at the default cap"""
    return corpus_space("chain3")


@pytest.fixture
def delta2():
    return corpus_space("delta2")


@pytest.fixture
def delta02():
    return corpus_space("delta02")


@pytest.fixture
def discrete2():
    return corpus_space("discrete2")


@pytest.fixture
def b2():
    """Nerve of the Boolean lattice 0 < a, b < 1"""
    return corpus_space("b2")


@pytest.fixture
def notdcmp():
    return corpus_space("notdcmp")


@pytest.fixture
def hollow():
    return corpus_space("hollow")


@pytest.fixture
def dupdegen():
    return corpus_space("dupdegen")


@pytest.fixture
def corrupt_complete():
    """Two vertices sharing one degenerate edge; only constructible unvalidated"""
    return TruncatedSSet(
        1,
        [["x", "y"], ["e"]],
        {(1, 0): {"e": "x"}, (1, 1): {"e": "x"}},
        {(0, 0): {"x": "e", "y": "e"}},
        Provenance.RAW,
        name="corrupt",
        validate=False,
    )
