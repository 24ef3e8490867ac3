import os

os.environ["ENVIRONMENT"] = "testing"

import pytest
from click.testing import CliRunner

from app.services.poset_service import PosetService
from app.services.tableau_service import IncreasingTableau


@pytest.fixture
def two_chain():
    return PosetService.make_chain_product([2])


@pytest.fixture
def square():
    return PosetService.make_chain_product([2, 2])


@pytest.fixture
def cube():
    return PosetService.make_chain_product([2, 2, 2])


@pytest.fixture
def promotion_example():
    """Two-row tableau whose K-promotion is worked out box by box."""
    return IncreasingTableau.from_rows([[1, 2, 4, 6], [4, 5, 6, 7]], 7)


@pytest.fixture
def resonant_tableau():
    """Inc^12(4x4) tableau with a K-promotion orbit of 36."""
    return IncreasingTableau.from_rows([[1, 2, 4, 7], [3, 5, 6, 8], [5, 7, 8, 10], [7, 9, 10, 12]], 12)


@pytest.fixture
def staircase_tableau():
    """Shape (4,4,4,2) with q=10, used for the K-Bender-Knuth moves."""
    return IncreasingTableau.from_rows([[1, 4, 5, 8], [2, 5, 7, 9], [6, 7, 9, 10], [8, 10]], 10)


@pytest.fixture
def runner():
    return CliRunner(mix_stderr=False)
