"""
services/redundancy.py
Gap de KL (nats por símbolo da fonte) de cada heurística contra o ótimo: linhas das
instâncias testemunha, células do sweep sintético e histogramas de arquivos reais.
"""
from __future__ import annotations

import logging
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import pandas as pd

from .. import config
from ..errors import KlnormError
from ..models import Histogram
from ..schemas import RedundancyRow
from ..tasks.sweep import run_cells
from .algorithms import BASELINES, POWER_OF_TWO_ONLY, run_algorithm
from .core import LN2, build_histogram, kl_divergence
from .exact import linear_window
from .gen import byte_histogram_file, generate, sweep_specs

logger = logging.getLogger("klnorm.redundancy")

# As quatro linhas testemunha da tabela de redundância
WITNESS_ROWS = [
    ("(3046,2582,4294)/8", (3046, 2582, 4294), 8),
    ("(22,4x8)/16", (22,) + (4,) * 8, 16),
    ("(10,3,3)/8", (10, 3, 3), 8),
    ("(3,2)/256", (3, 2), 256),
]

# Ordem fixa das colunas de gap
GAP_COLUMNS = [algo.value for algo in BASELINES]


def redundancy_row(label: str, h: Histogram, M: int, dist: Optional[str] = None) -> RedundancyRow:
    r, N = h.support_size, h.total
    if r > M:
        logger.warning(f"redundancy: dropping {label} (r={r} > M={M})")
        return RedundancyRow(label=label, dist=dist, r=r, N=N, M=M, note=f"skipped: r={r} > M={M}")
    opt = linear_window(h, M)
    gaps: Dict[str, Optional[float]] = {}
    notes: List[str] = []
    pre_kl = None
    power_of_two = not M & (M - 1)
    for algo in BASELINES:
        if algo in POWER_OF_TWO_ONLY and not power_of_two:
            gaps[algo.value] = None
            notes.append(f"{algo.value}: M not a power of two")
            continue
        try:
            rep = run_algorithm(algo, h, M)
        except KlnormError as e:
            gaps[algo.value] = None
            notes.append(f"{algo.value}: {e}")
            continue
        gaps[algo.value] = rep.kl - opt.kl
        if rep.pre_fixup is not None:
            pre_kl = kl_divergence(h, rep.pre_fixup)
    return RedundancyRow(
        label=label,
        dist=dist,
        r=r,
        N=N,
        M=M,
        opt_kl=opt.kl,
        gaps=gaps,
        giesen_pre_fixup_kl=pre_kl,
        note="; ".join(notes) or None,
    )


def witness_rows() -> List[RedundancyRow]:
    return [redundancy_row(label, build_histogram(counts), M) for label, counts, M in WITNESS_ROWS]


def sweep_rows(
    rs: Sequence[int] = tuple(config.SWEEP_R),
    ns: Sequence[int] = tuple(config.SWEEP_N),
    M: int = config.SWEEP_M,
    workers: int = config.SWEEP_WORKERS,
) -> List[RedundancyRow]:
    """Uma linha por célula (distribuição, r, N), em ordem determinística."""
    cells = []
    for spec_r in rs:
        for N in ns:
            for d, spec in enumerate(sweep_specs(spec_r, N)):
                key = (d, spec_r, N)
                cells.append((key, _sweep_job(spec, M)))
    rows = []
    for (d, r, N), row, err in run_cells(cells, workers=workers):
        if row is None:
            label = sweep_specs(r, N)[d].label
            row = RedundancyRow(label=f"{label} r={r} N={N}", dist=label, r=r, N=N, M=M, note=f"failed: {err}")
        rows.append(row)
    return rows


def _sweep_job(spec, M):
    def job():
        return redundancy_row(f"{spec.label} r={spec.r} N={spec.N}", generate(spec), M, dist=spec.label)
    return job


def aggregate_rows(rows: Sequence[RedundancyRow]) -> List[RedundancyRow]:
    """Máximo de cada gap por distribuição, sobre as células não puladas."""
    records = [
        {"dist": row.dist, "r": row.r, "N": row.N, "M": row.M, "opt_kl": row.opt_kl, **row.gaps}
        for row in rows
        if not row.skipped and row.dist is not None
    ]
    if not records:
        return []
    df = pd.DataFrame.from_records(records)
    order = list(dict.fromkeys(df["dist"]))
    agg = df.groupby("dist", sort=False).max(numeric_only=True)
    cells = df.groupby("dist", sort=False).size()
    out = []
    for dist in order:
        rec = agg.loc[dist]
        gaps = {col: (None if col not in rec or pd.isna(rec[col]) else float(rec[col])) for col in GAP_COLUMNS}
        out.append(RedundancyRow(
            label=f"{dist} (max)",
            dist=dist,
            r=int(rec["r"]),
            N=int(rec["N"]),
            M=int(rec["M"]),
            opt_kl=float(rec["opt_kl"]),
            gaps=gaps,
            note=f"max over {int(cells[dist])} cells",
        ))
    return out


def file_rows(paths: Sequence[str], M: int = config.SWEEP_M) -> List[RedundancyRow]:
    return [redundancy_row(Path(p).name, byte_histogram_file(p), M, dist="bytes") for p in paths]


def rows_frame(rows: Sequence[RedundancyRow], bits: bool = False) -> pd.DataFrame:
    """Tabela plana para CSV: uma coluna por heurística; `bits` só muda a exibição."""
    scale = 1.0 / LN2 if bits else 1.0
    records = []
    for row in rows:
        rec = {"label": row.label, "dist": row.dist, "r": row.r, "N": row.N, "M": row.M}
        rec["opt_kl"] = None if row.opt_kl is None else row.opt_kl * scale
        for col in GAP_COLUMNS:
            v = row.gaps.get(col)
            rec[f"gap_{col}"] = None if v is None else v * scale
        rec["giesen_pre_fixup_kl"] = None if row.giesen_pre_fixup_kl is None else row.giesen_pre_fixup_kl * scale
        rec["note"] = row.note
        records.append(rec)
    return pd.DataFrame.from_records(records, columns=_csv_columns())


def _csv_columns() -> List[str]:
    return ["label", "dist", "r", "N", "M", "opt_kl"] + [f"gap_{c}" for c in GAP_COLUMNS] + ["giesen_pre_fixup_kl", "note"]


def in_bits(row: RedundancyRow) -> RedundancyRow:
    """Mesma linha com KL e gaps divididos por ln 2."""
    def conv(v):
        return None if v is None else v / LN2
    return row.copy(update={
        "opt_kl": conv(row.opt_kl),
        "gaps": {k: conv(v) for k, v in row.gaps.items()},
        "giesen_pre_fixup_kl": conv(row.giesen_pre_fixup_kl),
    })
