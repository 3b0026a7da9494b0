"""
services/heap.py
Heap binário indexado por símbolo, com atualização de chave nos dois sentidos.
Chave menor sai primeiro; heaps de máximo usam chaves de incremento (já invertidas).
"""
from typing import Any, Dict, Iterable, List, Tuple


class IndexedHeap:
    """Heap de símbolos com mapa de posições (push, pop, top, update, remove em O(log n))."""

    def __init__(self, items: Iterable[Tuple[int, Any]] = ()):
        self._heap: List[int] = []
        self._keys: Dict[int, Any] = {}
        self._pos: Dict[int, int] = {}
        self.pushes = 0
        self.pops = 0
        for symbol, key in items:
            self._pos[symbol] = len(self._heap)
            self._heap.append(symbol)
            self._keys[symbol] = key
        self.pushes += len(self._heap)
        for i in reversed(range(len(self._heap) // 2)):
            self._sift_down(i)

    def __len__(self) -> int:
        return len(self._heap)

    def __contains__(self, symbol: int) -> bool:
        return symbol in self._pos

    def top(self) -> int:
        return self._heap[0]

    def top_key(self) -> Any:
        return self._keys[self._heap[0]]

    def key(self, symbol: int) -> Any:
        return self._keys[symbol]

    def push(self, symbol: int, key: Any) -> None:
        if symbol in self._pos:
            raise KeyError(f"symbol {symbol} already queued")
        self._keys[symbol] = key
        self._pos[symbol] = len(self._heap)
        self._heap.append(symbol)
        self.pushes += 1
        self._sift_up(len(self._heap) - 1)

    def pop(self) -> int:
        symbol = self._heap[0]
        self.remove(symbol)
        return symbol

    def remove(self, symbol: int) -> None:
        i = self._pos.pop(symbol)
        del self._keys[symbol]
        last = self._heap.pop()
        self.pops += 1
        if i < len(self._heap):
            self._heap[i] = last
            self._pos[last] = i
            self._sift_up(i)
            self._sift_down(self._pos[last])

    def update(self, symbol: int, key: Any) -> None:
        """Troca a chave de `symbol` (decrease ou increase-key)."""
        old = self._keys[symbol]
        self._keys[symbol] = key
        i = self._pos[symbol]
        if key < old:
            self._sift_up(i)
        else:
            self._sift_down(i)

    def _swap(self, i: int, j: int) -> None:
        heap = self._heap
        heap[i], heap[j] = heap[j], heap[i]
        self._pos[heap[i]] = i
        self._pos[heap[j]] = j

    def _sift_up(self, i: int) -> None:
        keys, heap = self._keys, self._heap
        while i > 0:
            parent = (i - 1) // 2
            if keys[heap[i]] < keys[heap[parent]]:
                self._swap(i, parent)
                i = parent
            else:
                break

    def _sift_down(self, i: int) -> None:
        keys, heap = self._keys, self._heap
        n = len(heap)
        while True:
            best = i
            left = 2 * i + 1
            right = left + 1
            if left < n and keys[heap[left]] < keys[heap[best]]:
                best = left
            if right < n and keys[heap[right]] < keys[heap[best]]:
                best = right
            if best == i:
                return
            self._swap(i, best)
            i = best
