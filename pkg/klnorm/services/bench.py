"""
services/bench.py
Benchmark de relógio de parede: melhor de K chamadas (após aquecimento) por célula
(algoritmo, distribuição, r), com os contadores de operação ao lado.

Os tempos não são comparáveis a contagens de ciclos; os contadores permitem checar o
escalonamento sem máquina silenciosa.
"""
from __future__ import annotations

import logging
import time
from typing import Callable, List, Optional, Sequence

import numpy as np
import pandas as pd

from .. import config
from ..errors import KlnormError
from ..models import DistSpec, Histogram
from ..schemas import AlgorithmName, BenchRow, Family, TimingStats
from ..tasks.sweep import run_cells
from .algorithms import REGISTRY
from .gen import generate

logger = logging.getLogger("klnorm.bench")

DEFAULT_ALGOS = (AlgorithmName.linear_window, AlgorithmName.threshold_window, AlgorithmName.bottom_up)
DIST_ALIASES = {
    "uniform": DistSpec(family=Family.uniform, r=1, N=1),
    "geom0.7": DistSpec(family=Family.geometric, r=1, N=1, p=0.7),
    "geom0.95": DistSpec(family=Family.geometric, r=1, N=1, p=0.95),
    "zipf1.0": DistSpec(family=Family.zipf, r=1, N=1, s=1.0),
    "zipf1.5": DistSpec(family=Family.zipf, r=1, N=1, s=1.5),
    "gaussian": DistSpec(family=Family.gaussian, r=1, N=1),
    "sparse": DistSpec(family=Family.sparse_heavy, r=1, N=1),
}


def calc_timing(values: Sequence[float]) -> TimingStats:
    """Estatísticas de uma série de tempos (s)."""
    if not values:
        return TimingStats()
    arr = np.array(values, dtype=np.float64)
    return TimingStats(
        best=float(np.min(arr)),
        median=float(np.median(arr)),
        mean=float(np.mean(arr)),
        p75=float(np.percentile(arr, 75)),
        count=len(arr),
    )


def time_call(fn: Callable[[], object], repeats: int, warmups: int) -> TimingStats:
    for _ in range(warmups):
        fn()
    samples = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        samples.append(time.perf_counter() - t0)
    return calc_timing(samples)


def dist_spec(name: str, r: int, N: int) -> DistSpec:
    try:
        base = DIST_ALIASES[name]
    except KeyError:
        raise ValueError(f"unknown distribution {name!r}; choose from {', '.join(DIST_ALIASES)}") from None
    return base.copy(update={"r": r, "N": N})


def bench_cell(algo: AlgorithmName, dist: str, h: Histogram, M: int, repeats: int, warmups: int) -> BenchRow:
    fn = REGISTRY[algo]
    if algo == AlgorithmName.bottom_up:
        repeats = min(repeats, config.BENCH_BOTTOM_UP_REPEATS)
        warmups = min(warmups, 1)
    report = fn(h, M)
    stats = time_call(lambda: fn(h, M), repeats, warmups)
    r = h.support_size
    return BenchRow(
        algorithm=algo.value,
        dist=dist,
        r=r,
        N=h.total,
        M=M,
        repeats=stats.count,
        best_seconds=stats.best,
        median_seconds=stats.median,
        seconds_per_symbol=stats.best / r if stats.best is not None else None,
        op_counts=report.op_counts,
    )


def run_bench(
    algos: Sequence[AlgorithmName] = DEFAULT_ALGOS,
    rs: Sequence[int] = (64, 512, 4096),
    dists: Sequence[str] = ("uniform",),
    M: int = config.SWEEP_M,
    N: int = 1_000_000,
    repeats: int = config.BENCH_REPEATS,
    warmups: int = config.BENCH_WARMUPS,
    serial: bool = True,
    workers: int = config.SWEEP_WORKERS,
) -> List[BenchRow]:
    cells = []
    for d, dist in enumerate(dists):
        for r in rs:
            spec = dist_spec(dist, r, N)
            for k, algo in enumerate(algos):
                cells.append(((d, r, k), _bench_job(AlgorithmName(algo), dist, spec, M, repeats, warmups)))
    rows = []
    for (d, r, k), row, err in run_cells(cells, workers=workers, serial=serial):
        if row is None:
            row = BenchRow(algorithm=AlgorithmName(algos[k]).value, dist=dists[d], r=r, N=N, M=M, repeats=0, note=err)
        rows.append(row)
    return rows


def _bench_job(algo, dist, spec, M, repeats, warmups):
    def job():
        h = generate(spec)
        if h.support_size > M:
            raise KlnormError(f"r={h.support_size} > M={M}")
        return bench_cell(algo, dist, h, M, repeats, warmups)
    return job


def bench_frame(rows: Sequence[BenchRow]) -> pd.DataFrame:
    """Uma linha por célula; contadores em colunas op_<nome>."""
    records = []
    for row in rows:
        rec = row.dict(exclude={"op_counts"})
        rec.update({f"op_{k}": v for k, v in sorted(row.op_counts.items())})
        records.append(rec)
    df = pd.DataFrame.from_records(records)
    base = [c for c in BenchRow.__fields__ if c != "op_counts"]
    ops = sorted(c for c in df.columns if c.startswith("op_"))
    return df.reindex(columns=base + ops)


def per_symbol_ratio(rows: Sequence[BenchRow], algo: str, r_small: int, r_large: int) -> Optional[float]:
    """Razão de segundos por símbolo entre dois r (mesma distribuição); planura de O(r)."""
    by_r = {row.r: row.seconds_per_symbol for row in rows if row.algorithm == algo and row.seconds_per_symbol}
    if r_small not in by_r or r_large not in by_r:
        return None
    return by_r[r_large] / by_r[r_small]
