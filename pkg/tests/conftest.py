import pytest

from histree.corpus import default_corpus
from histree.fixtures import e1, fixtures


@pytest.fixture(scope="session")
def e1_nbw():
    return e1()


@pytest.fixture(scope="session")
def all_fixtures():
    return fixtures()


@pytest.fixture(scope="session")
def corpus_sample():
    """A slice of the seeded corpus for the per-module property tests;
    the acceptance suite runs the full corpus."""
    return default_corpus(count=40)
