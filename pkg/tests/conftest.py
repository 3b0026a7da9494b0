import pytest

from klnorm.services.core import build_histogram


WITNESSES = {
    "hot_two_singletons": ((1000, 1, 1), 256),
    "two_symbols": ((3, 2), 256),
    "three_symbols_m8": ((3046, 2582, 4294), 8),
    "symmetric_sides": ((8, 114, 8), 23),
    "one_heavy_eight_light": ((22,) + (4,) * 8, 16),
    "fse_fast_example": ((10, 3, 3), 8),
}


@pytest.fixture
def hist():
    """Fábrica: hist(22, 4, 4) -> Histogram."""
    def make(*counts):
        return build_histogram(counts)
    return make


@pytest.fixture(params=sorted(WITNESSES), ids=sorted(WITNESSES))
def witness(request):
    counts, M = WITNESSES[request.param]
    return build_histogram(counts), M


@pytest.fixture
def heavy_light():
    return build_histogram((22,) + (4,) * 8), 16
