from pathlib import Path

import pytest
from hypothesis import settings

from simvote import build_partition_tree, parse_similarity_matrix

DATA = Path(__file__).parent / "data"

settings.register_profile("simvote", deadline=None)
settings.load_profile("simvote")


def data_path(name: str) -> Path:
    return DATA / name


@pytest.fixture(scope="session")
def country_text() -> str:
    return data_path("country.csv").read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def country_matrix(country_text):
    return parse_similarity_matrix(country_text)


@pytest.fixture(scope="session")
def country_tree(country_matrix):
    return build_partition_tree(country_matrix)
