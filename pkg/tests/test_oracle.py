import math

import pytest

from klnorm.errors import InfeasibleTargetError, OracleLimitError
from klnorm.schemas import ComparatorMode
from klnorm.services.core import build_histogram, is_marginal_optimal
from klnorm.services.exact import window_bounds
from klnorm.services.gen import random_small_instance
from klnorm.services.oracle import brute_force_optimum, composition_count, compositions


def test_compositions_are_lexicographic_and_complete():
    parts = list(compositions(5, 3))
    assert parts[0] == [1, 1, 3]
    assert parts[-1] == [3, 1, 1]
    assert len(parts) == composition_count(5, 3) == 6
    assert all(sum(p) == 5 and min(p) >= 1 for p in parts)


def test_unique_optimum_on_heavy_light(heavy_light):
    h, M = heavy_light
    res = brute_force_optimum(h, M)
    assert [t.freqs for t in res.optima] == [[8] + [1] * 8]
    assert res.enumerated == math.comb(15, 8)


def test_single_symbol():
    res = brute_force_optimum(build_histogram([7]), 13)
    assert [t.freqs for t in res.optima] == [[13]]
    assert res.enumerated == 1


def test_two_symbols_includes_rounded_table():
    res = brute_force_optimum(build_histogram([3, 2]), 256)
    assert [154, 102] in [t.freqs for t in res.optima]
    assert res.enumerated == 255


def test_ties_are_all_reported():
    res = brute_force_optimum(build_histogram([10, 3, 3]), 8)
    assert sorted(t.freqs for t in res.optima) == [[5, 1, 2], [5, 2, 1]]


def test_zero_slots_stay_zero():
    res = brute_force_optimum(build_histogram([0, 3, 0, 2]), 5)
    assert all(t.freqs[0] == t.freqs[2] == 0 for t in res.optima)


def test_limit():
    h = build_histogram([1] * 10)
    with pytest.raises(OracleLimitError, match="instance too large for oracle"):
        brute_force_optimum(h, 200, limit=1000)


def test_target_below_support():
    with pytest.raises(InfeasibleTargetError):
        brute_force_optimum(build_histogram([1, 1, 1]), 2)


def test_optima_pass_certificate_and_lie_in_window():
    for seed in range(200):
        h, M = random_small_instance(seed)
        res = brute_force_optimum(h, M)
        w = window_bounds(h, M)
        assert w.width <= 4 * h.support_size - 4
        for t in res.optima:
            assert is_marginal_optimal(h, t, ComparatorMode.exact).ok
            assert w.contains(t.freqs)
