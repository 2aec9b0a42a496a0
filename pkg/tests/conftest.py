import pytest

from spiraltension.library import LibraryFilter, build_library

CORPUS_DIR = "data/chorales"


@pytest.fixture(scope="session")
def full_library():
    return build_library(LibraryFilter())
