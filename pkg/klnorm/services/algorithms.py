"""
services/algorithms.py
Registro nome -> normalizador, compartilhado pela CLI, pela validação, pelo relatório
de redundância e pelo benchmark.
"""
from typing import Callable, Dict

from ..models import Histogram, NormReport
from ..schemas import AlgorithmName, ComparatorMode
from . import baselines, exact

Normalizer = Callable[[Histogram, int, ComparatorMode], NormReport]

REGISTRY: Dict[AlgorithmName, Normalizer] = {
    AlgorithmName.bottom_up: exact.bottom_up,
    AlgorithmName.bloom_bidir: exact.bloom_bidirectional,
    AlgorithmName.linear_window: exact.linear_window,
    AlgorithmName.smart_collet: exact.smart_collet,
    AlgorithmName.threshold_window: exact.threshold_window,
    AlgorithmName.window_auto: exact.window_auto,
    AlgorithmName.giesen: baselines.giesen,
    AlgorithmName.bloom_onedir: baselines.bloom_one_direction,
    AlgorithmName.collet_ceiling: baselines.collet_ceiling,
    AlgorithmName.fse_fast: baselines.fse_fast,
    AlgorithmName.fse_m2: baselines.fse_normalize_m2,
}

# Os cinco algoritmos exatos (window_auto despacha para dois deles)
EXACT_ALGORITHMS = (
    AlgorithmName.bottom_up,
    AlgorithmName.bloom_bidir,
    AlgorithmName.linear_window,
    AlgorithmName.smart_collet,
    AlgorithmName.threshold_window,
)

# Colunas do relatório de redundância, na ordem da tabela
BASELINES = (
    AlgorithmName.giesen,
    AlgorithmName.bloom_onedir,
    AlgorithmName.fse_fast,
    AlgorithmName.collet_ceiling,
)

# Baselines que exigem M potência de dois
POWER_OF_TWO_ONLY = (AlgorithmName.fse_fast, AlgorithmName.fse_m2)


def run_algorithm(
    name: AlgorithmName,
    h: Histogram,
    M: int,
    mode: ComparatorMode = ComparatorMode.float64,
    registry: Dict[AlgorithmName, Normalizer] = None,
) -> NormReport:
    fn = (registry or REGISTRY)[AlgorithmName(name)]
    return fn(h, M, mode)
