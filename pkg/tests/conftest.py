import logging

import pytest

from rwap.conflicts import build_conflict_sets
from rwap.weights import tight_example

from helpers import figure1_instance

# short path pools are expected for the random factories used here
logging.getLogger("rwap.gen").setLevel(logging.ERROR)


@pytest.fixture(scope="session")
def figure1():
    return figure1_instance()


@pytest.fixture(scope="session")
def figure1_conflicts(figure1):
    return build_conflict_sets(figure1)


@pytest.fixture()
def tight23():
    return tight_example(2, 3)
