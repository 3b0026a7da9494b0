"""
services/core.py
Objetivos (KL e Φ), tickets marginais, comparadores float64/exato e o certificado de
troca marginal.
"""
from __future__ import annotations

import logging
import math
from typing import Iterable, List, Optional, Dict

import numpy as np

from .. import config
from ..errors import (
    EmptyHistogramError,
    ExactBudgetError,
    HistogramOverflowError,
    InfeasibleTableError,
    InputFormatError,
    InvalidTicketError,
)
from ..models import Certificate, ComparatorAgreement, FreqTable, Histogram, NormReport, Ticket, U64_LIMIT
from ..schemas import ComparatorMode, TicketKind

logger = logging.getLogger("klnorm.core")

LN2 = math.log(2.0)


# ==================== ln(1 + 1/j) ====================

def taylor_log1p_inv(j: int) -> float:
    """ln(1 + 1/j) pelo polinômio de Taylor de seis termos em x = 1/j (cauda fria, j grande)."""
    x = 1.0 / j
    return x * (1.0 - x * (0.5 - x * (1.0 / 3.0 - x * (0.25 - x * (0.2 - x / 6.0)))))


def _log1p_tail(j: int) -> float:
    return math.log1p(1.0 / j)


# Construída na importação: imutável e compartilhável entre threads
_TABLE_SIZE = max(config.LOG_TABLE_SIZE, 2)
_LOG_TABLE = tuple([math.inf] + [math.log1p(1.0 / j) for j in range(1, _TABLE_SIZE)])
_TAIL = taylor_log1p_inv if config.LOG_TAIL == "taylor" else _log1p_tail


def log1p_inv(j: int) -> float:
    if j < _TABLE_SIZE:
        return _LOG_TABLE[j]
    return _TAIL(j)


# ==================== Histograma e objetivos ====================

def build_histogram(counts: Iterable[int]) -> Histogram:
    values = [int(c) for c in counts]
    if any(c < 0 for c in values):
        raise InputFormatError("counts must be nonnegative")
    if any(c >= U64_LIMIT for c in values):
        raise HistogramOverflowError("count does not fit 64 bits")
    total = sum(values)
    if total == 0:
        raise EmptyHistogramError()
    if total >= U64_LIMIT:
        raise HistogramOverflowError("total count overflows 64 bits")
    support = [a for a, c in enumerate(values) if c > 0]
    return Histogram(counts=values, total=total, support=support, support_size=len(support))


def _check_aligned(h: Histogram, t: FreqTable) -> None:
    if len(t.freqs) != len(h.counts):
        raise InfeasibleTableError(f"table has {len(t.freqs)} slots, histogram has {len(h.counts)}")


def kl_divergence(h: Histogram, t: FreqTable) -> float:
    """D(p||q) em nats por símbolo da fonte; +inf se algum m_a = 0 no suporte."""
    _check_aligned(h, t)
    N, M = h.total, t.target
    terms = []
    for a in h.support:
        c, m = h.counts[a], t.freqs[a]
        if m == 0:
            return math.inf
        # divisão inteira verdadeira: arredondada corretamente mesmo para produtos grandes
        terms.append(c * math.log((c * M) / (N * m)))
    return math.fsum(terms) / N


def phi(h: Histogram, t: FreqTable) -> float:
    _check_aligned(h, t)
    terms = []
    for a in h.support:
        m = t.freqs[a]
        if m == 0:
            return -math.inf
        terms.append(h.counts[a] * math.log(m))
    return math.fsum(terms)


# ==================== Tickets ====================

def ticket_value(count: int, level: int, kind: TicketKind) -> float:
    kind = TicketKind(kind)
    if count <= 0:
        raise InvalidTicketError("ticket count must be positive")
    if kind == TicketKind.increment:
        if level < 1:
            raise InvalidTicketError(f"increment level must be >= 1, got {level}")
        return count * log1p_inv(level)
    if level < 2:
        raise InvalidTicketError(f"decrement level must be >= 2, got {level}")
    return count * log1p_inv(level - 1)


def make_ticket(count: int, level: int, kind: TicketKind, symbol: int = 0) -> Ticket:
    return Ticket(symbol=symbol, level=level, kind=kind, count=count, value=ticket_value(count, level, kind))


def _exact_sign(ca: int, ba: int, va: float, cb: int, bb: int, vb: float, guard: Optional[float]) -> int:
    """Sinal de ca*ln((ba+1)/ba) - cb*ln((bb+1)/bb).

    Com `guard`, o gap em float64 decide quando excede guard * max(|va|, |vb|);
    caso contrário compara (ba+1)^ca * bb^cb com ba^ca * (bb+1)^cb em inteiros.
    """
    if ca == cb and ba == bb:
        return 0
    if guard is not None:
        gap = va - vb
        if abs(gap) > guard * max(abs(va), abs(vb)):
            return 1 if gap > 0 else -1
    lhs = (ba + 1) ** ca * bb ** cb
    rhs = ba ** ca * (bb + 1) ** cb
    return (lhs > rhs) - (lhs < rhs)


def _check_budget(count: int, level: int, max_count: int, max_level: int) -> None:
    if count > max_count or level > max_level:
        raise ExactBudgetError()


def compare_tickets_exact(
    t1: Ticket,
    t2: Ticket,
    guard: Optional[float] = config.FLOAT_GUARD_REL,
    max_count: int = config.EXACT_MAX_COUNT,
    max_level: int = config.EXACT_MAX_LEVEL,
) -> int:
    """Ordem verdadeira dos valores de dois tickets: -1, 0 ou 1.

    `guard=None` força sempre o caminho inteiro.
    """
    for t in (t1, t2):
        _check_budget(t.count, t.level, max_count, max_level)
    return _exact_sign(t1.count, t1.base, t1.value, t2.count, t2.base, t2.value, guard)


class _ExactKey:
    """Chave de heap no modo exato; `<` significa "sai antes do heap"."""

    __slots__ = ("value", "count", "base", "symbol", "level", "descending", "guard")

    def __init__(self, value, count, base, symbol, level, descending, guard):
        self.value = value
        self.count = count
        self.base = base
        self.symbol = symbol
        self.level = level
        self.descending = descending
        self.guard = guard

    def __lt__(self, other: "_ExactKey") -> bool:
        s = _exact_sign(self.count, self.base, self.value, other.count, other.base, other.value, self.guard)
        if self.descending:
            s = -s
        if s:
            return s < 0
        return (self.symbol, self.level) < (other.symbol, other.level)

    def __repr__(self):
        return f"_ExactKey(symbol={self.symbol}, level={self.level}, value={self.value!r})"


class TicketOrder:
    """Ordem total dos tickets usada por heaps e seleções.

    Empates de valor são quebrados por símbolo crescente e depois por nível crescente.
    Chaves de incremento ordenam do maior ganho para o menor; chaves de decremento,
    do menor custo para o maior. Em float64 as chaves são tuplas; no modo exato,
    objetos que comparam por potências inteiras.
    """

    def __init__(
        self,
        mode: ComparatorMode = ComparatorMode.float64,
        guard: float = config.FLOAT_GUARD_REL,
        max_count: int = config.EXACT_MAX_COUNT,
        max_level: int = config.EXACT_MAX_LEVEL,
    ):
        self.mode = ComparatorMode(mode)
        self.exact = self.mode == ComparatorMode.exact
        self.guard = guard
        self.max_count = max_count
        self.max_level = max_level

    def increment_key(self, count: int, level: int, symbol: int):
        value = count * log1p_inv(level)
        if self.exact:
            _check_budget(count, level, self.max_count, self.max_level)
            return _ExactKey(value, count, level, symbol, level, True, self.guard)
        return (-value, symbol, level)

    def decrement_key(self, count: int, level: int, symbol: int):
        value = count * log1p_inv(level - 1)
        if self.exact:
            _check_budget(count, level, self.max_count, self.max_level)
            return _ExactKey(value, count, level - 1, symbol, level, False, self.guard)
        return (value, symbol, level)

    def decrement_below_increment(self, c_dec: int, m_dec: int, c_inc: int, m_inc: int) -> bool:
        """True se Δ⁻(m_dec) do primeiro símbolo < Δ⁺(m_inc) do segundo (troca melhora Φ)."""
        v_dec = c_dec * log1p_inv(m_dec - 1)
        v_inc = c_inc * log1p_inv(m_inc)
        if not self.exact:
            return v_dec < v_inc
        _check_budget(c_dec, m_dec, self.max_count, self.max_level)
        _check_budget(c_inc, m_inc, self.max_count, self.max_level)
        return _exact_sign(c_dec, m_dec - 1, v_dec, c_inc, m_inc, v_inc, self.guard) < 0


def key_symbol(key) -> int:
    return key.symbol if isinstance(key, _ExactKey) else key[1]


# ==================== Certificado ====================

def is_marginal_optimal(h: Histogram, t: FreqTable, mode: ComparatorMode = ComparatorMode.float64) -> Certificate:
    """min_{m_a>=2} Δ⁻_a(m_a) >= max_b Δ⁺_b(m_b); lado esquerdo +inf quando M = r."""
    _check_aligned(h, t)
    if any(t.freqs[a] == 0 for a in h.support):
        raise InfeasibleTableError("table is zero on the support")
    order = TicketOrder(mode)
    counts, freqs = h.counts, t.freqs
    best_inc = min(order.increment_key(counts[b], freqs[b], b) for b in h.support)
    b = key_symbol(best_inc)
    off_support = [a for a, m in enumerate(freqs) if m > 0 and counts[a] == 0]
    if off_support:
        return Certificate(ok=False, decrement_symbol=off_support[0], increment_symbol=b)
    dec_keys = [order.decrement_key(counts[a], freqs[a], a) for a in h.support if freqs[a] >= 2]
    if not dec_keys:
        return Certificate(ok=True)
    a = key_symbol(min(dec_keys))
    if a != b and order.decrement_below_increment(counts[a], freqs[a], counts[b], freqs[b]):
        return Certificate(ok=False, decrement_symbol=a, increment_symbol=b)
    return Certificate(ok=True)


def certificate_mode_for(h: Histogram, t: FreqTable) -> ComparatorMode:
    """Modo exato quando contagens e níveis cabem no orçamento, senão float64."""
    if max(h.counts) <= config.EXACT_MAX_COUNT and max(t.freqs) < config.EXACT_MAX_LEVEL:
        return ComparatorMode.exact
    return ComparatorMode.float64


# ==================== Relatórios ====================

def expand_support(h: Histogram, support_freqs: List[int]) -> List[int]:
    freqs = [0] * len(h.counts)
    for a, m in zip(h.support, support_freqs):
        freqs[a] = m
    return freqs


def make_report(
    algorithm: str,
    h: Histogram,
    freqs: List[int],
    target: int,
    mode: ComparatorMode = ComparatorMode.float64,
    op_counts: Optional[Dict[str, int]] = None,
    pre_fixup: Optional[List[int]] = None,
    fallback_taken: Optional[bool] = None,
) -> NormReport:
    table = FreqTable(freqs=freqs, target=target)
    cert = is_marginal_optimal(h, table, mode)
    return NormReport(
        algorithm=algorithm,
        table=table,
        phi=phi(h, table),
        kl=kl_divergence(h, table),
        certificate_ok=cert.ok,
        op_counts=op_counts or {},
        pre_fixup=FreqTable(freqs=pre_fixup, target=target) if pre_fixup is not None else None,
        fallback_taken=fallback_taken,
    )


# ==================== Cruzamento float64 x exato ====================

def cross_check_comparators(
    pairs: int = 100_000,
    seed: int = 0,
    max_count: int = config.EXACT_MAX_COUNT,
    max_level: int = config.EXACT_MAX_LEVEL,
    rel_gap: float = config.AGREEMENT_REL_TOL,
) -> ComparatorAgreement:
    """Compara a ordem float64 com a ordem exata em pares aleatórios de tickets.

    Acima de `rel_gap` as duas ordens devem coincidir; abaixo, o caminho inteiro é
    forçado e cada divergência é registrada no log.
    """
    rng = np.random.default_rng(seed)
    counts = rng.integers(1, max_count + 1, size=(pairs, 2))
    levels = rng.integers(2, max_level + 1, size=(pairs, 2))
    kinds = rng.integers(0, 2, size=(pairs, 2))
    near_ties = 0
    near_tie_disagreements = 0
    disagreements = 0
    for i in range(pairs):
        ta, tb = (
            make_ticket(
                int(counts[i, k]),
                int(levels[i, k]),
                TicketKind.increment if kinds[i, k] == 0 else TicketKind.decrement,
                symbol=k,
            )
            for k in (0, 1)
        )
        gap = ta.value - tb.value
        float_sign = (gap > 0) - (gap < 0)
        if abs(gap) > rel_gap * max(abs(ta.value), abs(tb.value)):
            exact_sign = compare_tickets_exact(ta, tb, max_count=max_count, max_level=max_level)
            if exact_sign != float_sign:
                disagreements += 1
                logger.error(f"comparator disagreement above the agreement gap: {ta!r} vs {tb!r}")
            continue
        near_ties += 1
        exact_sign = compare_tickets_exact(ta, tb, guard=None, max_count=max_count, max_level=max_level)
        if exact_sign != float_sign:
            near_tie_disagreements += 1
            logger.warning(
                f"comparator disagreement: {ta.kind.value}(c={ta.count}, j={ta.level}) vs "
                f"{tb.kind.value}(c={tb.count}, j={tb.level}); float={float_sign} exact={exact_sign}"
            )
    return ComparatorAgreement(
        pairs=pairs,
        near_ties=near_ties,
        near_tie_disagreements=near_tie_disagreements,
        disagreements=disagreements,
    )
