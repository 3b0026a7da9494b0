import math

import pytest

from klnorm.errors import (
    EmptyHistogramError,
    ExactBudgetError,
    HistogramOverflowError,
    InfeasibleTableError,
    InputFormatError,
    InvalidTicketError,
)
from klnorm.models import FreqTable
from klnorm.schemas import ComparatorMode, TicketKind
from klnorm.services import core
from klnorm.services.core import (
    TicketOrder,
    build_histogram,
    compare_tickets_exact,
    cross_check_comparators,
    is_marginal_optimal,
    kl_divergence,
    log1p_inv,
    make_ticket,
    phi,
    taylor_log1p_inv,
    ticket_value,
)


def test_log_table_matches_log1p():
    for j in (1, 2, 3, 100, 4095, 4096, 10**6):
        assert log1p_inv(j) == pytest.approx(math.log1p(1.0 / j), rel=1e-15)


def test_taylor_tail_is_close_for_large_levels():
    for j in (4096, 10**5, 2**20):
        assert taylor_log1p_inv(j) == pytest.approx(math.log1p(1.0 / j), rel=1e-15)


def test_build_histogram_support_and_total():
    h = build_histogram([0, 5, 0, 3])
    assert h.total == 8
    assert h.support == [1, 3]
    assert h.support_size == 2
    assert h.support_counts == [5, 3]


@pytest.mark.parametrize("counts, exc", [
    ([0, 0, 0], EmptyHistogramError),
    ([1, -1], InputFormatError),
    ([1 << 64], HistogramOverflowError),
    ([1 << 63, 1 << 63], HistogramOverflowError),
])
def test_build_histogram_errors(counts, exc):
    with pytest.raises(exc):
        build_histogram(counts)


def test_kl_is_zero_for_exact_proportional_table():
    h = build_histogram([5, 5])
    assert kl_divergence(h, FreqTable(freqs=[5, 5], target=10)) == 0.0


def test_kl_infinite_on_support_zero():
    h = build_histogram([1000, 1, 1])
    assert kl_divergence(h, FreqTable(freqs=[255, 0, 1], target=256)) == math.inf
    assert phi(h, FreqTable(freqs=[255, 0, 1], target=256)) == -math.inf


def test_kl_and_phi_are_consistent(heavy_light):
    h, M = heavy_light
    t1 = FreqTable(freqs=[8] + [1] * 8, target=M)
    t2 = FreqTable(freqs=[7, 2] + [1] * 7, target=M)
    # D(p||q) difere apenas por -Φ/N
    assert kl_divergence(h, t2) - kl_divergence(h, t1) == pytest.approx((phi(h, t1) - phi(h, t2)) / h.total)


def test_kl_rejects_misaligned_table():
    h = build_histogram([1, 2])
    with pytest.raises(InfeasibleTableError):
        kl_divergence(h, FreqTable(freqs=[3], target=3))


def test_ticket_values():
    assert ticket_value(8, 1, TicketKind.increment) == pytest.approx(8 * math.log(2))
    assert ticket_value(8, 2, TicketKind.decrement) == pytest.approx(8 * math.log(2))
    assert ticket_value(114, 20, TicketKind.increment) == pytest.approx(114 * math.log(21 / 20))


@pytest.mark.parametrize("count, level, kind", [
    (0, 3, TicketKind.increment),
    (5, 0, TicketKind.increment),
    (5, 1, TicketKind.decrement),
])
def test_invalid_tickets(count, level, kind):
    with pytest.raises(InvalidTicketError):
        ticket_value(count, level, kind)


def test_exact_compare_identical_tickets_is_zero():
    # decremento no nível j+1 == incremento no nível j
    t1 = make_ticket(7, 3, TicketKind.increment)
    t2 = make_ticket(7, 4, TicketKind.decrement)
    assert compare_tickets_exact(t1, t2) == 0
    assert compare_tickets_exact(t1, t2, guard=None) == 0


def test_exact_compare_orders_close_values():
    # 4294 ln(4/3) > 3046 ln(3/2), gap relativo ~2e-4
    inc = make_ticket(4294, 3, TicketKind.increment)
    dec = make_ticket(3046, 3, TicketKind.decrement)
    assert compare_tickets_exact(inc, dec) == 1
    assert compare_tickets_exact(dec, inc, guard=None) == -1


def test_exact_compare_budget():
    big = make_ticket(2_000_000, 3, TicketKind.increment)
    small = make_ticket(3, 3, TicketKind.increment)
    with pytest.raises(ExactBudgetError, match="exact comparison out of budget"):
        compare_tickets_exact(big, small)


def test_ticket_order_breaks_ties_by_symbol_then_level():
    order = TicketOrder()
    keys = [order.decrement_key(8, 2, 2), order.decrement_key(8, 2, 0), order.decrement_key(4, 3, 1)]
    assert [core.key_symbol(k) for k in sorted(keys)] == [1, 0, 2]


def test_exact_order_matches_float_order_on_clear_gaps():
    f, e = TicketOrder(ComparatorMode.float64), TicketOrder(ComparatorMode.exact)
    items = [(c, j, a) for a, (c, j) in enumerate([(22, 8), (4, 2), (4, 1), (114, 20), (8, 2), (8, 1)])]
    by_float = [core.key_symbol(k) for k in sorted(f.increment_key(c, j, a) for c, j, a in items)]
    by_exact = [core.key_symbol(k) for k in sorted(e.increment_key(c, j, a) for c, j, a in items)]
    assert by_float == by_exact


def test_certificate_accepts_optimum_and_rejects_ceiling(heavy_light):
    h, M = heavy_light
    good = FreqTable(freqs=[8] + [1] * 8, target=M)
    bad = FreqTable(freqs=[7, 2] + [1] * 7, target=M)
    for mode in ComparatorMode:
        assert is_marginal_optimal(h, good, mode).ok
        cert = is_marginal_optimal(h, bad, mode)
        assert not cert.ok
        assert cert.witness == (1, 0)


def test_certificate_witness_on_fse_output():
    h = build_histogram([10, 3, 3])
    cert = is_marginal_optimal(h, FreqTable(freqs=[4, 2, 2], target=8), ComparatorMode.exact)
    assert cert.witness == (1, 0)


def test_certificate_when_every_symbol_has_one():
    h = build_histogram([9, 1, 5])
    assert is_marginal_optimal(h, FreqTable(freqs=[1, 1, 1], target=3)).ok


def test_certificate_rejects_zero_on_support():
    h = build_histogram([1000, 1, 1])
    with pytest.raises(InfeasibleTableError):
        is_marginal_optimal(h, FreqTable(freqs=[255, 0, 1], target=256))


def test_certificate_rejects_mass_off_support():
    h = build_histogram([3, 0, 2])
    cert = is_marginal_optimal(h, FreqTable(freqs=[3, 1, 2], target=6))
    assert not cert.ok
    assert cert.decrement_symbol == 1


def test_comparator_cross_check_has_no_disagreements():
    agreement = cross_check_comparators(pairs=2000, seed=7, max_count=1000, max_level=4096)
    assert agreement.pairs == 2000
    assert agreement.disagreements == 0
