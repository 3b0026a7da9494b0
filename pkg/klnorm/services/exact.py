"""
services/exact.py
Normalizadores que minimizam exatamente a divergência KL: bottom-up, Bloom com troca
bidirecional, janela linear, Collet com envelope superior da janela e o caminho de
limiar Lagrangiano (mais o despacho entre os dois últimos).
"""
from __future__ import annotations

import heapq
import logging
import math
from typing import List

import numpy as np

from .. import config
from ..errors import InfeasibleTargetError
from ..models import Histogram, NormReport, Window
from ..schemas import ComparatorMode
from .core import TicketOrder, expand_support, key_symbol, log1p_inv, make_report
from .heap import IndexedHeap
from .marginal import downgrade, exchange_repair, geometric_init, new_stats, restore_sum
from .select import smallest

logger = logging.getLogger("klnorm.exact")


def _require_target(h: Histogram, target: int) -> None:
    if target < h.support_size:
        raise InfeasibleTargetError()


def _report(name: str, h: Histogram, support_freqs: List[int], target: int, mode, stats, **extra) -> NormReport:
    return make_report(name, h, expand_support(h, support_freqs), target, mode, stats, **extra)


def _all_ones(name: str, h: Histogram, target: int, mode, stats) -> NormReport:
    # M = r: o lado esquerdo do certificado é +inf
    return _report(name, h, [1] * h.support_size, target, mode, stats)


def bottom_up(h: Histogram, M: int, mode: ComparatorMode = ComparatorMode.float64) -> NormReport:
    """Parte de m = 1 no suporte e entrega as M - r unidades restantes, uma a uma,
    ao maior ticket de incremento."""
    _require_target(h, M)
    order = TicketOrder(mode)
    counts = h.support_counts
    r = len(counts)
    m = [1] * r
    heap = [(order.increment_key(counts[i], 1, i), i) for i in range(r)]
    heapq.heapify(heap)
    rounds = M - r
    for _ in range(rounds):
        i = heap[0][1]
        m[i] += 1
        heapq.heapreplace(heap, (order.increment_key(counts[i], m[i], i), i))
    stats = {"rounds": rounds, "heap_pushes": r + rounds, "heap_pops": rounds}
    return _report("bottom_up", h, m, M, mode, stats)


def bloom_bidirectional(
    h: Histogram,
    M: int,
    mode: ComparatorMode = ComparatorMode.float64,
    profile: str = config.BLOOM_PROFILE,
) -> NormReport:
    """Inicialização geométrica, fase 1 no sentido necessário e fase 2 de trocas.

    profile='basic' mantém heaps indexados nas duas fases; 'smart' usa heap simples na
    fase 1 e constrói os heaps da fase 2 só quando há par que melhora. Mesma saída.
    """
    _require_target(h, M)
    if profile not in ("basic", "smart"):
        raise ValueError(f"unknown bloom profile: {profile}")
    stats = new_stats("phase1_steps", "exchanges", "heap_pushes", "heap_pops")
    if M == h.support_size:
        return _all_ones("bloom_bidir", h, M, mode, stats)
    order = TicketOrder(mode)
    counts = h.support_counts
    m = geometric_init(counts, h.total, M)
    smart = profile == "smart"
    restore_sum(counts, m, M, order, stats, indexed=not smart)
    exchange_repair(counts, m, order, stats, lazy=smart)
    return _report("bloom_bidir", h, m, M, mode, stats)


def window_bounds(h: Histogram, M: int) -> Window:
    """L_a = max(1, ceil(c(M-r+2)/N) - 1), U_a = floor(c(M+r-2)/N) + 1, em inteiros exatos."""
    _require_target(h, M)
    N, r = h.total, h.support_size
    counts = h.support_counts
    lower = [max(1, -(-(c * (M - r + 2)) // N) - 1) for c in counts]
    upper = [c * (M + r - 2) // N + 1 for c in counts]
    return Window(symbols=list(h.support), lower=lower, upper=upper, deficit=sum(upper) - M)


def linear_window(
    h: Histogram,
    M: int,
    mode: ComparatorMode = ComparatorMode.float64,
    strategy: str = config.SELECT_STRATEGY,
) -> NormReport:
    """Parte de U, emite os tickets de decremento de (L_a, U_a] e aplica os D mais baratos."""
    _require_target(h, M)
    order = TicketOrder(mode)
    counts = h.support_counts
    w = window_bounds(h, M)
    tickets = []
    for i, (lo, up) in enumerate(zip(w.lower, w.upper)):
        c = counts[i]
        for j in range(up, lo, -1):
            tickets.append(order.decrement_key(c, j, i))
    m = list(w.upper)
    for key in smallest(tickets, w.deficit, strategy):
        m[key_symbol(key)] -= 1
    stats = {
        "tickets_emitted": len(tickets),
        "decrements_applied": w.deficit,
        "deficit": w.deficit,
        "window_width": w.width,
    }
    return _report("linear_window", h, m, M, mode, stats)


def smart_collet(h: Histogram, M: int, mode: ComparatorMode = ComparatorMode.float64) -> NormReport:
    """Rebaixamento guloso a partir do lado superior U da janela: exatamente D passos."""
    _require_target(h, M)
    order = TicketOrder(mode)
    counts = h.support_counts
    w = window_bounds(h, M)
    m = list(w.upper)
    stats = new_stats("downgrades", "heap_pushes", "heap_pops")
    downgrade(counts, m, w.deficit, order, stats)
    stats["deficit"] = w.deficit
    return _report("smart_collet", h, m, M, mode, stats)


def _repair_residual(counts, m, lower, upper, residual, order, stats) -> bool:
    """Fecha o erro de contagem dentro da janela; False se a janela se esgotar."""
    if residual > 0:
        heap = IndexedHeap((i, order.decrement_key(counts[i], m[i], i)) for i in range(len(m)) if m[i] > lower[i])
        for _ in range(residual):
            if not len(heap):
                return False
            i = heap.top()
            m[i] -= 1
            if m[i] > lower[i]:
                heap.update(i, order.decrement_key(counts[i], m[i], i))
            else:
                heap.remove(i)
    elif residual < 0:
        heap = IndexedHeap((i, order.increment_key(counts[i], m[i], i)) for i in range(len(m)) if m[i] < upper[i])
        for _ in range(-residual):
            if not len(heap):
                return False
            i = heap.top()
            m[i] += 1
            if m[i] < upper[i]:
                heap.update(i, order.increment_key(counts[i], m[i], i))
            else:
                heap.remove(i)
    else:
        return True
    stats["repair_steps"] = abs(residual)
    stats["heap_pushes"] = stats.get("heap_pushes", 0) + heap.pushes
    stats["heap_pops"] = stats.get("heap_pops", 0) + heap.pops
    return True


def threshold_window(
    h: Histogram,
    M: int,
    mode: ComparatorMode = ComparatorMode.float64,
    rounds: int = config.THRESHOLD_ROUNDS,
    refine_steps: int = config.THRESHOLD_REFINE_STEPS,
    residual_factor: int = config.THRESHOLD_RESIDUAL_FACTOR,
) -> NormReport:
    """Caminho Lagrangiano: acha por bisseção o limiar θ cujo conjunto de decrementos
    mais baratos que θ tem D elementos, sem materializar os tickets.

    O inverso j*(θ) ≈ ceil(c/θ + 1/2 + θ/(12c)) vem da expansão de Padé de
    c ln(1 + 1/(j-1)) = θ. Depois: refinamento escalar por símbolo, reparo do resíduo
    com um heap indexado pequeno e o laço de trocas da fase 2.
    """
    _require_target(h, M)
    stats = new_stats("bisection_rounds", "refine_steps", "residual", "repair_steps", "exchanges", "fallback")
    r = h.support_size
    if M == r:
        return _all_ones("threshold_window", h, M, mode, stats)
    order = TicketOrder(mode)
    counts = h.support_counts
    w = window_bounds(h, M)
    lower, upper, deficit = w.lower, w.upper, w.deficit
    m = list(upper)
    active = [i for i in range(r) if upper[i] > lower[i]]
    stats["active_symbols"] = len(active)

    if deficit > 0 and active:
        c_act = np.array([counts[i] for i in active], dtype=np.float64)
        u_act = np.array([upper[i] for i in active], dtype=np.float64)
        width = np.array([upper[i] - lower[i] for i in active], dtype=np.float64)

        def selected(theta: float) -> np.ndarray:
            j_star = np.ceil(c_act / theta + 0.5 + theta / (12.0 * c_act))
            return np.clip(u_act - j_star + 1.0, 0.0, width)

        # [min Δ⁻(U), max Δ⁻(L+1)] sobre os símbolos ativos
        lo = min(counts[i] * log1p_inv(upper[i] - 1) for i in active)
        hi = max(counts[i] * log1p_inv(lower[i]) for i in active)
        for _ in range(rounds):
            mid = 0.5 * (lo + hi)
            if selected(mid).sum() < deficit:
                lo = mid
            else:
                hi = mid
            stats["bisection_rounds"] += 1
        theta = hi
        take = selected(theta).astype(np.int64)
        for k, i in enumerate(active):
            m[i] = upper[i] - int(take[k])

        for i in active:
            c = counts[i]
            steps = 0
            # Δ⁻(m+1) > θ: o ticket m+1 não deveria ter sido aplicado
            while steps < refine_steps and m[i] < upper[i] and c * log1p_inv(m[i]) > theta:
                m[i] += 1
                steps += 1
            # Δ⁻(m) <= θ: o ticket m também deveria ser aplicado
            while steps < refine_steps and m[i] > lower[i] and c * log1p_inv(m[i] - 1) <= theta:
                m[i] -= 1
                steps += 1
            stats["refine_steps"] += steps

    residual = sum(m) - M
    stats["residual"] = abs(residual)
    bound = residual_factor * (math.isqrt(r - 1) + 1)
    repaired = abs(residual) <= bound and _repair_residual(counts, m, lower, upper, residual, order, stats)
    if not repaired:
        logger.warning(f"threshold_window: residual {residual} exceeds bound {bound} (r={r}); using linear_window")
        fallback = linear_window(h, M, mode)
        merged = {**stats, **fallback.op_counts, "fallback": 1}
        return fallback.copy(update={"algorithm": "threshold_window", "op_counts": merged, "fallback_taken": True})

    exchange_repair(counts, m, order, stats)
    return _report("threshold_window", h, m, M, mode, stats, fallback_taken=False)


def coefficient_of_variation_sq(h: Histogram) -> float:
    """cv² = r Σc² / N² - 1."""
    counts = h.support_counts
    return h.support_size * sum(c * c for c in counts) / (h.total * h.total) - 1.0


def window_auto(
    h: Histogram,
    M: int,
    mode: ComparatorMode = ComparatorMode.float64,
    cv2_gate: float = config.WINDOW_CV2_GATE,
    nm_gate: int = config.WINDOW_NM_GATE,
) -> NormReport:
    """Despacho em dois regimes: entradas quase uniformes (cv² < gate) ou N <= gate·M
    usam o núcleo de tickets; as demais, o caminho de limiar."""
    _require_target(h, M)
    if coefficient_of_variation_sq(h) < cv2_gate or h.total <= nm_gate * M:
        report, regime = linear_window(h, M, mode), 0
    else:
        report, regime = threshold_window(h, M, mode), 1
    return report.copy(update={"algorithm": "window_auto", "op_counts": {**report.op_counts, "regime": regime}})
