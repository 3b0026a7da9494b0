"""
services/marginal.py
Passos gulosos compartilhados entre os normalizadores ótimos e as baselines:
inicialização por média geométrica, correção em um único sentido, rebaixamento a partir
de um envelope e o laço de trocas (fase 2).

Todos operam sobre listas indexadas pelo suporte (posição i = i-ésimo símbolo do
suporte, em ordem crescente) e atualizam `stats` in place.
"""
from __future__ import annotations

import heapq
from typing import Dict, List

from .core import TicketOrder, key_symbol
from .heap import IndexedHeap


def new_stats(*names: str) -> Dict[str, int]:
    return {name: 0 for name in names}


def geometric_init(counts: List[int], total: int, target: int) -> List[int]:
    """Arredonda s = M c / N para d ou d+1 pela fronteira sqrt(d(d+1)), com m >= 1.

    O teste (M c)^2 <= N^2 d (d+1) é feito em inteiros exatos.
    """
    out = []
    n2 = total * total
    for c in counts:
        mc = target * c
        d = mc // total
        m = d if mc * mc <= n2 * d * (d + 1) else d + 1
        out.append(max(m, 1))
    return out


def restore_sum(counts: List[int], m: List[int], target: int, order: TicketOrder, stats: Dict[str, int], indexed: bool = False) -> None:
    """Fase 1: leva sum(m) até `target` no único sentido necessário."""
    excess = sum(m) - target
    if excess == 0:
        return
    stats.setdefault("phase1_steps", 0)
    if indexed:
        _restore_sum_indexed(counts, m, excess, order, stats)
        return
    # heap simples: só o topo é consultado, alterado e re-peneirado
    if excess > 0:
        heap = [(order.decrement_key(counts[i], m[i], i), i) for i in range(len(m)) if m[i] >= 2]
        heapq.heapify(heap)
        stats["heap_pushes"] = stats.get("heap_pushes", 0) + len(heap)
        while excess > 0:
            i = heap[0][1]
            m[i] -= 1
            excess -= 1
            stats["phase1_steps"] += 1
            if m[i] >= 2:
                heapq.heapreplace(heap, (order.decrement_key(counts[i], m[i], i), i))
            else:
                heapq.heappop(heap)
                stats["heap_pops"] = stats.get("heap_pops", 0) + 1
    else:
        heap = [(order.increment_key(counts[i], m[i], i), i) for i in range(len(m))]
        heapq.heapify(heap)
        stats["heap_pushes"] = stats.get("heap_pushes", 0) + len(heap)
        while excess < 0:
            i = heap[0][1]
            m[i] += 1
            excess += 1
            stats["phase1_steps"] += 1
            heapq.heapreplace(heap, (order.increment_key(counts[i], m[i], i), i))


def _restore_sum_indexed(counts, m, excess, order, stats) -> None:
    if excess > 0:
        heap = IndexedHeap((i, order.decrement_key(counts[i], m[i], i)) for i in range(len(m)) if m[i] >= 2)
        while excess > 0:
            i = heap.top()
            m[i] -= 1
            excess -= 1
            stats["phase1_steps"] += 1
            if m[i] >= 2:
                heap.update(i, order.decrement_key(counts[i], m[i], i))
            else:
                heap.remove(i)
    else:
        heap = IndexedHeap((i, order.increment_key(counts[i], m[i], i)) for i in range(len(m)))
        while excess < 0:
            i = heap.top()
            m[i] += 1
            excess += 1
            stats["phase1_steps"] += 1
            heap.update(i, order.increment_key(counts[i], m[i], i))
    stats["heap_pushes"] = stats.get("heap_pushes", 0) + heap.pushes
    stats["heap_pops"] = stats.get("heap_pops", 0) + heap.pops


def downgrade(counts: List[int], m: List[int], deficit: int, order: TicketOrder, stats: Dict[str, int]) -> None:
    """Aplica `deficit` decrementos, sempre no ticket de decremento mais barato."""
    heap = [(order.decrement_key(counts[i], m[i], i), i) for i in range(len(m)) if m[i] >= 2]
    heapq.heapify(heap)
    stats["heap_pushes"] = stats.get("heap_pushes", 0) + len(heap)
    stats.setdefault("downgrades", 0)
    for _ in range(deficit):
        i = heap[0][1]
        m[i] -= 1
        stats["downgrades"] += 1
        if m[i] >= 2:
            heapq.heapreplace(heap, (order.decrement_key(counts[i], m[i], i), i))
            stats["heap_pushes"] += 1
        else:
            heapq.heappop(heap)
        stats["heap_pops"] = stats.get("heap_pops", 0) + 1


def exchange_repair(counts: List[int], m: List[int], order: TicketOrder, stats: Dict[str, int], lazy: bool = True) -> None:
    """Fase 2: troca uma unidade do decremento mais barato para o incremento mais caro
    enquanto isso aumenta Φ. Para quando os dois topos são o mesmo símbolo.

    Com `lazy`, as marginais são calculadas uma vez e os heaps indexados só são
    construídos se uma varredura global encontrar um par que melhora.
    """
    stats.setdefault("exchanges", 0)
    r = len(m)
    inc_keys = [order.increment_key(counts[i], m[i], i) for i in range(r)]
    dec_keys = {i: order.decrement_key(counts[i], m[i], i) for i in range(r) if m[i] >= 2}
    if not dec_keys:
        return
    if lazy:
        stats["scans"] = stats.get("scans", 0) + 1
        a = key_symbol(min(dec_keys.values()))
        b = key_symbol(min(inc_keys))
        if a == b or not order.decrement_below_increment(counts[a], m[a], counts[b], m[b]):
            return
    plus = IndexedHeap(enumerate(inc_keys))
    minus = IndexedHeap(dec_keys.items())
    while len(minus):
        a, b = minus.top(), plus.top()
        if a == b or not order.decrement_below_increment(counts[a], m[a], counts[b], m[b]):
            break
        m[a] -= 1
        m[b] += 1
        stats["exchanges"] += 1
        plus.update(a, order.increment_key(counts[a], m[a], a))
        if m[a] >= 2:
            minus.update(a, order.decrement_key(counts[a], m[a], a))
        else:
            minus.remove(a)
        plus.update(b, order.increment_key(counts[b], m[b], b))
        if b in minus:
            minus.update(b, order.decrement_key(counts[b], m[b], b))
        else:
            minus.push(b, order.decrement_key(counts[b], m[b], b))
    stats["heap_pushes"] = stats.get("heap_pushes", 0) + plus.pushes + minus.pushes
    stats["heap_pops"] = stats.get("heap_pops", 0) + plus.pops + minus.pops
