"""
tasks/sweep.py
Executa células independentes de um sweep (redundância, benchmark) num pool de threads.

Cada célula roda isolada: uma falha é registrada no log e vira resultado `None`, sem
derrubar as demais. A saída sai ordenada pela chave da célula.
"""
from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Hashable, List, Optional, Sequence, Tuple, TypeVar

from .. import config

logger = logging.getLogger("klnorm.sweep")

T = TypeVar("T")
Cell = Tuple[Hashable, Callable[[], T]]


def _run_cell(key, job: Callable[[], T]) -> Tuple[Hashable, Optional[T], Optional[str]]:
    try:
        result = job()
        logger.info(f"sweep cell {key}: done")
        return key, result, None
    except Exception as e:
        logger.error(f"Error in sweep cell {key}: {e}")
        return key, None, f"{type(e).__name__}: {e}"


def run_cells(cells: Sequence[Cell], workers: int = config.SWEEP_WORKERS, serial: bool = False) -> List[Tuple[Hashable, Optional[T], Optional[str]]]:
    """Roda as células e devolve (chave, resultado, erro) ordenado por chave.

    `serial=True` (ou workers <= 1) roda na thread atual, uma célula por vez, como
    exigem as medições de tempo.
    """
    if serial or workers <= 1 or len(cells) <= 1:
        out = [_run_cell(key, job) for key, job in cells]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_run_cell, key, job) for key, job in cells]
            out = [f.result() for f in futures]
    logger.info(f"sweep finished: {len(out)} cells, {sum(1 for _, _, err in out if err)} failed")
    return sorted(out, key=lambda item: item[0])
