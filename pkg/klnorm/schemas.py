"""
schemas.py
Enums e modelos Pydantic da superfície de linha de comando (configuração de execução,
relatórios serializados, linhas de tabela).
"""
from pydantic import BaseModel, Field, root_validator
from typing import Optional, List, Dict
from enum import Enum


class ComparatorMode(str, Enum):
    float64 = "float64"
    exact = "exact"


class TicketKind(str, Enum):
    increment = "increment"
    decrement = "decrement"


class Family(str, Enum):
    uniform = "uniform"
    geometric = "geometric"
    zipf = "zipf"
    gaussian = "gaussian"
    sparse_heavy = "sparse_heavy"


class AlgorithmName(str, Enum):
    bottom_up = "bottom_up"
    bloom_bidir = "bloom_bidir"
    linear_window = "linear_window"
    smart_collet = "smart_collet"
    threshold_window = "threshold_window"
    window_auto = "window_auto"
    giesen = "giesen"
    bloom_onedir = "bloom_onedir"
    collet_ceiling = "collet_ceiling"
    fse_fast = "fse_fast"
    fse_m2 = "fse_m2"


class OutputFormat(str, Enum):
    json = "json"
    csv = "csv"
    plain = "plain"


class RunConfig(BaseModel):
    """Configuração de um `normalize`: algoritmo, alvo e exatamente uma fonte de entrada."""
    algorithm: AlgorithmName
    target: int = Field(..., gt=0)
    mode: ComparatorMode = ComparatorMode.float64
    counts: Optional[List[int]] = None
    counts_file: Optional[str] = None
    bytes_file: Optional[str] = None
    family: Optional[Family] = None
    dist_r: Optional[int] = None
    dist_n: Optional[int] = None
    p: Optional[float] = None
    s: Optional[float] = None
    output_format: OutputFormat = OutputFormat.json
    bits: bool = False

    @root_validator(skip_on_failure=True)
    def one_source(cls, values):
        sources = [values.get(k) is not None for k in ("counts", "counts_file", "bytes_file", "family")]
        if sum(sources) != 1:
            raise ValueError("exactly one input source is required (counts, counts file, byte file or generator spec)")
        if values.get("family") is not None and (values.get("dist_r") is None or values.get("dist_n") is None):
            raise ValueError("generator input needs --r and --N")
        return values


class NormalizeOut(BaseModel):
    """Esquema JSON emitido por `normalize`."""
    algorithm: str
    M: int
    N: int
    r: int
    freqs: List[int]
    phi: float
    kl_nats: float
    certificate_ok: bool
    op_counts: Dict[str, int] = {}
    kl_bits: Optional[float] = None
    pre_fixup_freqs: Optional[List[int]] = None
    fallback_taken: Optional[bool] = None


class RedundancyRow(BaseModel):
    """Gap de KL (nats por símbolo da fonte) de cada baseline contra o ótimo."""
    label: str
    dist: Optional[str] = None
    r: int
    N: int
    M: int
    opt_kl: Optional[float] = None
    gaps: Dict[str, Optional[float]] = Field(default_factory=dict)
    giesen_pre_fixup_kl: Optional[float] = None
    note: Optional[str] = None

    @property
    def skipped(self) -> bool:
        return self.opt_kl is None


class TimingStats(BaseModel):
    """Estatísticas de uma série de tempos (segundos)."""
    best: Optional[float] = None
    median: Optional[float] = None
    mean: Optional[float] = None
    p75: Optional[float] = None
    count: int = 0


class BenchRow(BaseModel):
    algorithm: str
    dist: str
    r: int
    N: int
    M: int
    repeats: int
    best_seconds: Optional[float] = None
    median_seconds: Optional[float] = None
    seconds_per_symbol: Optional[float] = None
    op_counts: Dict[str, int] = Field(default_factory=dict)
    note: Optional[str] = None


class CheckResult(BaseModel):
    name: str
    passed: bool
    cases: int = 0
    failures: List[str] = Field(default_factory=list)


class ValidationSummary(BaseModel):
    seed: int
    cases: int
    checks: List[CheckResult] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)
