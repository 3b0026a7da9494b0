"""
services/select.py
Seleção dos k menores elementos: quickselect (pivô mediana-de-3, partição em três
vias) ou ordenação completa para o perfil "basic". Usa apenas `<`.
"""
from typing import List, Sequence, TypeVar

T = TypeVar("T")


def _median_of_three(a, b, c):
    if a < b:
        if b < c:
            return b
        return c if a < c else a
    if a < c:
        return a
    return c if b < c else b


def quickselect_smallest(items: Sequence[T], k: int) -> List[T]:
    """Os k menores itens (sem ordem garantida), em tempo linear esperado."""
    arr = list(items)
    if k <= 0:
        return []
    if k >= len(arr):
        return arr
    target = k - 1
    lo, hi = 0, len(arr) - 1
    while lo < hi:
        pivot = _median_of_three(arr[lo], arr[(lo + hi) // 2], arr[hi])
        # [lo, lt) < pivot, [lt, i) == pivot, (gt, hi] > pivot
        lt, i, gt = lo, lo, hi
        while i <= gt:
            x = arr[i]
            if x < pivot:
                arr[lt], arr[i] = x, arr[lt]
                lt += 1
                i += 1
            elif pivot < x:
                arr[gt], arr[i] = x, arr[gt]
                gt -= 1
            else:
                i += 1
        if target < lt:
            hi = lt - 1
        elif target > gt:
            lo = gt + 1
        else:
            break
    return arr[:k]


def sorted_smallest(items: Sequence[T], k: int) -> List[T]:
    return sorted(items)[:max(k, 0)]


def smallest(items: Sequence[T], k: int, strategy: str = "quickselect") -> List[T]:
    if strategy == "sort":
        return sorted_smallest(items, k)
    if strategy == "quickselect":
        return quickselect_smallest(items, k)
    raise ValueError(f"unknown selection strategy: {strategy}")
