import os

import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture
def tmp_cache(tmp_path):
    from kvdeform.weights import WeightCache, default_cache, set_default_cache
    previous = default_cache()
    cache = WeightCache(tmp_path / "cache")
    set_default_cache(cache)
    yield cache
    set_default_cache(previous)
