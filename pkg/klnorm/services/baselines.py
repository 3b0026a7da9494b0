"""
services/baselines.py
Heurísticas de normalização usadas em codecs (reescala cumulativa, Bloom em um sentido,
Collet pelo teto e os dois passes FSE), com os seus modos de falha preservados para
medição diferencial contra o ótimo.
"""
from __future__ import annotations

import heapq
import logging
from typing import List, Optional, Sequence

from ..errors import FallbackInfeasibleError, InfeasibleTargetError
from ..models import FseConfig, Histogram, NormReport
from ..schemas import ComparatorMode
from .core import TicketOrder, expand_support, make_report
from .marginal import downgrade, geometric_init, new_stats, restore_sum

logger = logging.getLogger("klnorm.baselines")

# Sentinela de baixa probabilidade do FSE ({1, -1}); conta como massa 1
LOW_PROB_COUNT = 1


def _require_target(h: Histogram, target: int) -> None:
    if target < h.support_size:
        raise InfeasibleTargetError()


def giesen(
    h: Histogram,
    M: int,
    mode: ComparatorMode = ComparatorMode.float64,
    permutation: Optional[Sequence[int]] = None,
) -> NormReport:
    """Reescala a distribuição cumulativa (pisos de M C_i / N, diferenciados) e corrige
    zeros no suporte retirando unidades do maior símbolo atual.

    `permutation` é a ordem em que os símbolos entram na soma cumulativa; a tabela
    devolvida já está na ordem original. A tabela antes da correção vai em `pre_fixup`.
    """
    _require_target(h, M)
    n = len(h.counts)
    order = list(range(n)) if permutation is None else list(permutation)
    if sorted(order) != list(range(n)):
        raise ValueError("permutation must reorder every histogram slot")
    N = h.total
    pre = [0] * n
    cumulative, prev = 0, 0
    for a in order:
        cumulative += h.counts[a]
        upper = M * cumulative // N
        pre[a] = upper - prev
        prev = upper

    m = list(pre)
    bumped = 0
    for a in h.support:
        if m[a] == 0:
            m[a] = 1
            bumped += 1
    # max-heap (−m, a): empate para o menor índice
    heap = [(-m[a], a) for a in h.support]
    heapq.heapify(heap)
    excess = sum(m) - M
    for _ in range(excess):
        _, a = heap[0]
        m[a] -= 1
        heapq.heapreplace(heap, (-m[a], a))
    stats = {"bumped": bumped, "withdrawn": excess}
    return make_report("giesen", h, m, M, mode, stats, pre_fixup=pre)


def bloom_one_direction(h: Histogram, M: int, mode: ComparatorMode = ComparatorMode.float64) -> NormReport:
    """Arredondamento pela média geométrica e correção da soma num único sentido, sem
    fase de trocas."""
    _require_target(h, M)
    counts = h.support_counts
    m = geometric_init(counts, h.total, M)
    stats = new_stats("phase1_steps", "heap_pushes", "heap_pops")
    restore_sum(counts, m, M, TicketOrder(ComparatorMode.float64), stats)
    return make_report("bloom_onedir", h, expand_support(h, m), M, mode, stats)


def collet_ceiling(h: Histogram, M: int, mode: ComparatorMode = ComparatorMode.float64) -> NormReport:
    """Envelope U = ceil(M c / N) (+1 onde zera) e D = ΣU − M rebaixamentos gulosos."""
    _require_target(h, M)
    counts = h.support_counts
    N = h.total
    m = [-(-(M * c) // N) or 1 for c in counts]
    deficit = sum(m) - M
    stats = new_stats("downgrades", "heap_pushes", "heap_pops")
    downgrade(counts, m, deficit, TicketOrder(ComparatorMode.float64), stats)
    stats["deficit"] = deficit
    return make_report("collet_ceiling", h, expand_support(h, m), M, mode, stats)


def fse_fast(
    h: Histogram,
    M: int,
    mode: ComparatorMode = ComparatorMode.float64,
    cfg: Optional[FseConfig] = None,
) -> NormReport:
    """Passe rápido do FSE: estimativa em ponto fixo com o recíproco σ = floor(2^62 / N),
    arredondamento tabelado para estimativas 1..7, filtro de símbolos pequenos e folga
    em bloco no maior símbolo. Desiste para o passe M2 quando a folga negativa chega à
    metade do maior símbolo."""
    _require_target(h, M)
    cfg = cfg or FseConfig.for_instance(h.total, M)
    counts = h.support_counts
    r = len(counts)
    if r == 1:
        return make_report("fse_fast", h, expand_support(h, [M]), M, mode, {"low_symbols": 0}, fallback_taken=False)

    scale = cfg.reciprocal_shift - cfg.table_log
    step = (1 << cfg.reciprocal_shift) // h.total
    remaining = M
    m = []
    low_symbols = 0
    rounded_up = 0
    for c in counts:
        if c <= cfg.low_threshold:
            m.append(LOW_PROB_COUNT)
            remaining -= 1
            low_symbols += 1
            continue
        scaled = c * step
        proba = scaled >> scale
        if proba < 8 and scaled - (proba << scale) > cfg.round_up_threshold(proba):
            proba += 1
            rounded_up += 1
        m.append(proba)
        remaining -= proba

    largest = max(range(r), key=lambda i: (m[i], -i))
    stats = {"low_symbols": low_symbols, "rounded_up": rounded_up, "slack": remaining}
    if -remaining >= (m[largest] >> 1):
        logger.info(f"fse_fast: slack {remaining} against largest {m[largest]}; taking the M2 pass")
        fallback = fse_normalize_m2(h, M, mode, cfg)
        return fallback.copy(update={
            "algorithm": "fse_fast",
            "op_counts": {**stats, **fallback.op_counts},
            "fallback_taken": True,
        })
    m[largest] += remaining
    return make_report("fse_fast", h, expand_support(h, m), M, mode, stats, fallback_taken=False)


_NOT_YET_ASSIGNED = -2


def fse_normalize_m2(
    h: Histogram,
    M: int,
    mode: ComparatorMode = ComparatorMode.float64,
    cfg: Optional[FseConfig] = None,
) -> NormReport:
    """Passe de fallback do FSE: dois limiares de símbolos pequenos (-> 1), depois
    reescala cumulativa do restante com semente de meio passo (arredondamento ao mais
    próximo)."""
    _require_target(h, M)
    cfg = cfg or FseConfig.for_instance(h.total, M)
    counts = h.support_counts
    r = len(counts)
    total = h.total
    low_one = cfg.m2_mid_threshold
    m = []
    distributed = 0
    for c in counts:
        if c <= cfg.low_threshold:
            m.append(LOW_PROB_COUNT)
        elif c <= low_one:
            m.append(1)
        else:
            m.append(_NOT_YET_ASSIGNED)
            continue
        distributed += 1
        total -= c
    to_distribute = M - distributed
    stats = {"small_symbols": distributed, "second_pass": 0}

    if to_distribute <= 0:
        if any(x == _NOT_YET_ASSIGNED for x in m):
            raise FallbackInfeasibleError()
        return make_report("fse_m2", h, expand_support(h, m), M, mode, stats)

    if total // to_distribute > low_one:
        # risco de arredondar para zero: segundo limiar, relativo ao que sobrou
        low_one = (total * 3) // (to_distribute * 2)
        for i, c in enumerate(counts):
            if m[i] == _NOT_YET_ASSIGNED and c <= low_one:
                m[i] = 1
                distributed += 1
                total -= c
                stats["second_pass"] += 1
        to_distribute = M - distributed

    if distributed == r:
        # tudo pequeno: o restante vai inteiro para a maior contagem
        largest = max(range(r), key=lambda i: (counts[i], -i))
        m[largest] += to_distribute
        return make_report("fse_m2", h, expand_support(h, m), M, mode, stats)

    v_step_log = cfg.reciprocal_shift - cfg.table_log
    r_step = (((1 << v_step_log) * to_distribute) + cfg.half_step) // total
    tmp_total = cfg.half_step
    for i, c in enumerate(counts):
        if m[i] != _NOT_YET_ASSIGNED:
            continue
        end = tmp_total + c * r_step
        weight = (end >> v_step_log) - (tmp_total >> v_step_log)
        if weight < 1:
            raise FallbackInfeasibleError()
        m[i] = weight
        tmp_total = end
    if sum(m) != M:
        # N grande demais para o passo em ponto fixo de 62 bits
        raise FallbackInfeasibleError(f"fallback rescale sums to {sum(m)}, expected {M}")
    return make_report("fse_m2", h, expand_support(h, m), M, mode, stats)
