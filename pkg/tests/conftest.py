import json
from pathlib import Path

import pytest

from praf.corpus import load_codebook

FIXTURES = Path(__file__).parents[1] / "src" / "praf" / "data" / "fixtures"


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def fixture_codebook():
    return load_codebook(FIXTURES / "codebook.json")


@pytest.fixture(scope="session")
def reference():
    return json.loads((FIXTURES / "reference_results.json").read_text())
