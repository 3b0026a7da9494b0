"""
services/oracle.py
Verdade de referência independente: maximiza Φ por enumeração exaustiva de todas as
tabelas viáveis de instâncias pequenas.
"""
from __future__ import annotations

import itertools
import logging
import math

from .. import config
from ..errors import InfeasibleTargetError, OracleLimitError
from ..models import FreqTable, Histogram, OracleResult
from .core import expand_support

logger = logging.getLogger("klnorm.oracle")

OPTIMA_TOL = 1e-12


def compositions(total: int, parts: int):
    """Composições de `total` em `parts` partes positivas, em ordem lexicográfica."""
    for cuts in itertools.combinations(range(1, total), parts - 1):
        prev = 0
        out = []
        for cut in cuts:
            out.append(cut - prev)
            prev = cut
        out.append(total - prev)
        yield out


def composition_count(total: int, parts: int) -> int:
    return math.comb(total - 1, parts - 1)


def brute_force_optimum(h: Histogram, M: int, limit: int = config.ORACLE_LIMIT) -> OracleResult:
    r = h.support_size
    if M < r:
        raise InfeasibleTargetError()
    n = composition_count(M, r)
    if n > limit:
        raise OracleLimitError(f"instance too large for oracle ({n} compositions, limit {limit})")
    counts = h.support_counts
    logs = [0.0] + [math.log(j) for j in range(1, M + 1)]
    best = -math.inf
    candidates = []
    for parts in compositions(M, r):
        value = math.fsum(c * logs[m] for c, m in zip(counts, parts))
        if value > best + OPTIMA_TOL:
            best = value
            candidates = [(value, parts)]
        elif value >= best - OPTIMA_TOL:
            best = max(best, value)
            candidates.append((value, parts))
    optima = [
        FreqTable(freqs=expand_support(h, parts), target=M)
        for value, parts in candidates
        if value >= best - OPTIMA_TOL
    ]
    logger.debug(f"oracle: r={r} M={M} enumerated={n} optima={len(optima)}")
    return OracleResult(best_phi=best, optima=optima, enumerated=n)
