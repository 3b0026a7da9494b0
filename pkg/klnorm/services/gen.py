"""
services/gen.py
Entradas: as sete distribuições sintéticas do sweep, histogramas de bytes de arquivos
reais, instâncias pequenas semeadas para o oráculo e o formato de arquivo de contagens.
"""
from __future__ import annotations

import io
import logging
from pathlib import Path
from typing import BinaryIO, List, Tuple, Union

import numpy as np

from ..errors import EmptyHistogramError, InputFormatError, InvalidDistributionError
from ..models import DistSpec, Histogram
from ..schemas import Family
from .core import build_histogram

logger = logging.getLogger("klnorm.gen")

BYTE_ALPHABET = 256
CHUNK_SIZE = 1 << 16
SEED_MASK = (1 << 64) - 1

# sparse_heavy: 90% da massa em ceil(r/8) símbolos quentes
HOT_FRACTION = 0.9


def _weights(spec: DistSpec) -> np.ndarray:
    r = spec.r
    idx = np.arange(r, dtype=np.float64)
    if spec.family == Family.geometric:
        return np.power(spec.p, idx)
    if spec.family == Family.zipf:
        return np.power(idx + 1.0, -spec.s)
    if spec.family == Family.gaussian:
        mu, sigma = (r - 1) / 2.0, r / 6.0
        return np.exp(-0.5 * ((idx - mu) / sigma) ** 2)
    if spec.family == Family.sparse_heavy:
        hot = -(-r // 8)
        w = np.empty(r, dtype=np.float64)
        w[:hot] = HOT_FRACTION / hot
        if r > hot:
            w[hot:] = (1.0 - HOT_FRACTION) / (r - hot)
        return w
    raise InvalidDistributionError(f"no weights for family {spec.family}")


def _floor_clamp(weights: np.ndarray, N: int) -> List[int]:
    """Pisos de w·(N − k), com k = número de símbolos que o piso zera (ponto fixo);
    depois piso 1 e o resíduo vai para a₁."""
    w = weights / weights.sum()
    k = 0
    while True:
        counts = np.floor(w * (N - k)).astype(np.int64)
        zeros = int((counts == 0).sum())
        if zeros <= k:
            break
        k = zeros
    counts = np.maximum(counts, 1)
    out = [int(c) for c in counts]
    out[0] += N - sum(out)
    return out


def generate(spec: DistSpec) -> Histogram:
    r, N = spec.r, spec.N
    if N < r:
        raise InvalidDistributionError(f"N={N} < r={r}: cannot give every symbol a positive count")
    if spec.family == Family.uniform:
        counts = [N // r] * r
        counts[0] += N - (N // r) * r
    else:
        counts = _floor_clamp(_weights(spec), N)
    h = build_histogram(counts)
    if h.total != N or h.support_size != r:
        raise InvalidDistributionError(f"generator broke conservation for {spec.label}")
    return h


def sweep_specs(r: int, N: int) -> List[DistSpec]:
    """As sete famílias do sweep: uniform, geom0.7, geom0.95, zipf1.0, zipf1.5, gaussian, sparse."""
    return [
        DistSpec(family=Family.uniform, r=r, N=N),
        DistSpec(family=Family.geometric, r=r, N=N, p=0.7),
        DistSpec(family=Family.geometric, r=r, N=N, p=0.95),
        DistSpec(family=Family.zipf, r=r, N=N, s=1.0),
        DistSpec(family=Family.zipf, r=r, N=N, s=1.5),
        DistSpec(family=Family.gaussian, r=r, N=N),
        DistSpec(family=Family.sparse_heavy, r=r, N=N),
    ]


def byte_histogram(data: Union[bytes, bytearray, BinaryIO], chunk_size: int = CHUNK_SIZE) -> Histogram:
    """Histograma de 256 posições dos valores de byte; aceita bytes ou um stream binário."""
    stream = io.BytesIO(data) if isinstance(data, (bytes, bytearray)) else data
    acc = np.zeros(BYTE_ALPHABET, dtype=np.int64)
    while True:
        chunk = stream.read(chunk_size)
        if not chunk:
            break
        acc += np.bincount(np.frombuffer(chunk, dtype=np.uint8), minlength=BYTE_ALPHABET)
    if not acc.any():
        raise EmptyHistogramError()
    return build_histogram(acc.tolist())


def byte_histogram_file(path: Union[str, Path]) -> Histogram:
    with open(path, "rb") as f:
        return byte_histogram(f)


def random_small_instance(seed: int, max_r: int = 6, max_M: int = 24, max_count: int = 50) -> Tuple[Histogram, int]:
    """Instância (h, M) determinística em função de `seed`: r <= max_r, r <= M <= max_M."""
    if max_r < 1 or max_M < max_r:
        raise ValueError("need max_r >= 1 and max_M >= max_r")
    rng = np.random.default_rng(seed & SEED_MASK)
    r = int(rng.integers(1, max_r + 1))
    counts = rng.integers(1, max_count + 1, size=r).tolist()
    M = int(rng.integers(r, max_M + 1))
    return build_histogram(counts), M


# ==================== Arquivo de contagens ====================

def read_counts(text: str) -> Histogram:
    """Inteiros decimais não negativos separados por espaço em branco."""
    tokens = text.split()
    if not tokens:
        raise InputFormatError("counts input is empty")
    try:
        values = [int(t, 10) for t in tokens]
    except ValueError as e:
        raise InputFormatError(f"malformed counts: {e}") from e
    return build_histogram(values)


def read_counts_file(path: Union[str, Path]) -> Histogram:
    text = Path(path).read_text()
    logger.debug(f"read counts file {path} ({len(text)} bytes)")
    return read_counts(text)


def format_counts(counts: List[int]) -> str:
    return " ".join(str(c) for c in counts)


def write_counts(counts: List[int], path: Union[str, Path]) -> None:
    Path(path).write_text(format_counts(counts) + "\n")
