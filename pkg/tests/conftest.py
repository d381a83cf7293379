import sys
from functools import lru_cache
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from nfbmonoids.monoids import preset  # noqa: E402


@lru_cache(maxsize=None)
def cached_preset(name):
    return preset(name)


@pytest.fixture(scope="session")
def get_preset():
    return cached_preset

