"""
services/validation.py
Suíte de validação: testemunhas conhecidas, certificado, concordância entre os
algoritmos exatos, equivalência com o oráculo e contenção na janela.
"""
from __future__ import annotations

import itertools
import logging
import math
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from .. import config
from ..errors import KlnormError
from ..models import FreqTable, Histogram, NormReport
from ..schemas import AlgorithmName, CheckResult, ComparatorMode, ValidationSummary
from ..utils import Check, CheckEngine, FailureLog
from .algorithms import BASELINES, EXACT_ALGORITHMS, POWER_OF_TWO_ONLY, REGISTRY, Normalizer, run_algorithm
from .core import (
    build_histogram,
    certificate_mode_for,
    cross_check_comparators,
    expand_support,
    is_marginal_optimal,
    phi,
)
from .exact import window_bounds
from .gen import generate, random_small_instance, sweep_specs
from .oracle import brute_force_optimum, composition_count, compositions

logger = logging.getLogger("klnorm.validate")

# As seis instâncias contraexemplo das heurísticas: (rótulo, contagens, M)
WITNESSES: List[Tuple[str, Tuple[int, ...], int]] = [
    ("(1000,1,1)/256", (1000, 1, 1), 256),
    ("(3,2)/256", (3, 2), 256),
    ("(3046,2582,4294)/8", (3046, 2582, 4294), 8),
    ("(8,114,8)/23", (8, 114, 8), 23),
    ("(22,4x8)/16", (22,) + (4,) * 8, 16),
    ("(10,3,3)/8", (10, 3, 3), 8),
]

# Saídas conhecidas das heurísticas: (algoritmo, rótulo) -> tabela (a menos de permutação
# entre símbolos empatados); giesen_pre é a tabela anterior à correção
WITNESS_OUTPUTS: Dict[Tuple[str, str], Tuple[int, ...]] = {
    ("giesen_pre", "(1000,1,1)/256"): (255, 0, 1),
    ("giesen", "(1000,1,1)/256"): (254, 1, 1),
    ("giesen", "(3,2)/256"): (153, 103),
    ("bloom_onedir", "(3046,2582,4294)/8"): (3, 2, 3),
    ("bloom_onedir", "(8,114,8)/23"): (1, 20, 2),
    ("collet_ceiling", "(22,4x8)/16"): (7, 2, 1, 1, 1, 1, 1, 1, 1),
    ("fse_fast", "(10,3,3)/8"): (4, 2, 2),
}

# Exaustivo: r <= 4, contagens <= 12, M <= 12
EXHAUSTIVE_MAX_R = 4
EXHAUSTIVE_MAX_COUNT = 12
EXHAUSTIVE_MAX_M = 12
# Lemma de troca nos dois sentidos: só instâncias com poucas composições
LEMMA_MAX_COMPOSITIONS = 2000


def witness_instances() -> List[Tuple[str, Histogram, int]]:
    return [(label, build_histogram(counts), M) for label, counts, M in WITNESSES]


def _is_power_of_two(M: int) -> bool:
    return M > 0 and not M & (M - 1)


def _same_up_to_ties(h: Histogram, got: Sequence[int], expected: Sequence[int]) -> bool:
    """Igualdade a menos de permutação entre símbolos de mesma contagem."""
    if len(got) != len(expected):
        return False
    groups: Dict[int, List[int]] = {}
    for a, c in enumerate(h.counts):
        groups.setdefault(c, []).append(a)
    return all(sorted(got[a] for a in idx) == sorted(expected[a] for a in idx) for idx in groups.values())


def _phi_close(a: float, b: float) -> bool:
    return abs(a - b) <= config.PHI_ABS_TOL * max(1.0, abs(a), abs(b))


def _kl_close(a: float, b: float) -> bool:
    return math.isclose(a, b, rel_tol=config.KL_REL_TOL, abs_tol=1e-15)


def _certified(h: Histogram, report: NormReport) -> bool:
    return is_marginal_optimal(h, report.table, certificate_mode_for(h, report.table)).ok


def exhaustive_instances(
    max_r: int = EXHAUSTIVE_MAX_R,
    max_count: int = EXHAUSTIVE_MAX_COUNT,
    max_M: int = EXHAUSTIVE_MAX_M,
) -> Iterable[Tuple[Histogram, int]]:
    # Φ é invariante por permutação: basta contagens não decrescentes
    for r in range(1, max_r + 1):
        for counts in itertools.combinations_with_replacement(range(1, max_count + 1), r):
            h = build_histogram(counts)
            for M in range(r, max_M + 1):
                yield h, M


class WitnessCheck(Check):
    """Heurísticas reproduzem as saídas conhecidas; os exatos batem o oráculo nas seis."""

    name = "witnesses"

    def __init__(self, registry: Dict[AlgorithmName, Normalizer]):
        self.registry = registry

    def run(self) -> CheckResult:
        log = FailureLog(self.name)
        for label, h, M in witness_instances():
            oracle = brute_force_optimum(h, M)
            for algo in self.registry:
                if algo in POWER_OF_TWO_ONLY and not _is_power_of_two(M):
                    continue
                log.case()
                report = run_algorithm(algo, h, M, registry=self.registry)
                key = (algo.value, label)
                if key in WITNESS_OUTPUTS and not _same_up_to_ties(h, report.freqs, WITNESS_OUTPUTS[key]):
                    log.fail(f"{algo.value} on {label}: got {report.freqs}, expected {WITNESS_OUTPUTS[key]}")
                if algo == AlgorithmName.giesen:
                    pre = WITNESS_OUTPUTS.get(("giesen_pre", label))
                    if pre is not None and tuple(report.pre_fixup.freqs) != pre:
                        log.fail(f"giesen pre-fixup on {label}: got {report.pre_fixup.freqs}, expected {pre}")
                if algo in EXACT_ALGORITHMS or algo == AlgorithmName.window_auto:
                    if not _certified(h, report):
                        log.fail(f"{algo.value} on {label}: certificate fails for {report.freqs}")
                    if not _phi_close(report.phi, oracle.best_phi):
                        log.fail(f"{algo.value} on {label}: phi {report.phi!r} != oracle {oracle.best_phi!r}")
                elif report.phi > oracle.best_phi + config.PHI_ABS_TOL:
                    log.fail(f"{algo.value} on {label}: phi above the oracle optimum")
        return log.result()


class SweepCheck(Check):
    """Certificado, concordância de KL, contagens de operação e dominância das baselines
    na grade de distribuições sintéticas."""

    name = "sweep"

    def __init__(self, registry, sweep_r: Sequence[int], sweep_n: Sequence[int], sweep_m: Union[int, Sequence[int]]):
        self.registry = registry
        self.sweep_r = sweep_r
        self.sweep_n = sweep_n
        self.sweep_m = [sweep_m] if isinstance(sweep_m, int) else list(sweep_m)

    def run(self) -> CheckResult:
        log = FailureLog(self.name)
        for M, r, N in itertools.product(self.sweep_m, self.sweep_r, self.sweep_n):
            if r > M:
                logger.info(f"sweep: dropping r={r} > M={M}")
                continue
            for spec in sweep_specs(r, N):
                h = generate(spec)
                cell = f"{spec.label} r={r} N={N} M={M}"
                log.case()
                self._check_cell(log, cell, h, M)
        return log.result()

    def _check_cell(self, log: FailureLog, cell: str, h: Histogram, M: int) -> None:
        reports = {algo: run_algorithm(algo, h, M, registry=self.registry) for algo in EXACT_ALGORITHMS}
        ref = reports[AlgorithmName.linear_window]
        for algo, rep in reports.items():
            if not _certified(h, rep):
                log.fail(f"{algo.value} on {cell}: certificate fails")
            if not _kl_close(rep.kl, ref.kl):
                log.fail(f"{algo.value} on {cell}: kl {rep.kl!r} vs linear_window {ref.kl!r}")
        r = h.support_size
        w = window_bounds(h, M)
        ops = {algo: rep.op_counts for algo, rep in reports.items()}
        if ops[AlgorithmName.bottom_up].get("rounds") != M - r:
            log.fail(f"bottom_up on {cell}: rounds {ops[AlgorithmName.bottom_up].get('rounds')} != M - r")
        lw = ops[AlgorithmName.linear_window]
        if lw.get("tickets_emitted", 0) > 4 * r - 4 or lw.get("decrements_applied") != w.deficit:
            log.fail(f"linear_window on {cell}: op counts {lw} exceed 4r-4 or miss D={w.deficit}")
        if ops[AlgorithmName.smart_collet].get("downgrades") != w.deficit:
            log.fail(f"smart_collet on {cell}: downgrades != D={w.deficit}")
        for algo in BASELINES:
            if algo in POWER_OF_TWO_ONLY and not _is_power_of_two(M):
                continue
            try:
                base = run_algorithm(algo, h, M, registry=self.registry)
            except KlnormError as e:
                logger.warning(f"{algo.value} on {cell}: {e}")
                continue
            if base.kl < ref.kl - config.PHI_ABS_TOL:
                log.fail(f"{algo.value} on {cell}: kl {base.kl!r} below the optimum {ref.kl!r}")


class OracleCheck(Check):
    """Os exatos atingem o Φ do oráculo; todo ótimo cabe na janela de largura <= 4r - 4."""

    name = "oracle"

    def __init__(self, registry, seed: int, cases: int, exhaustive: bool = True):
        self.registry = registry
        self.seed = seed
        self.cases = cases
        self.exhaustive = exhaustive

    def instances(self) -> Iterable[Tuple[Histogram, int]]:
        if self.exhaustive:
            yield from exhaustive_instances()
        for k in range(self.cases):
            yield random_small_instance(self.seed + k)

    def run(self) -> CheckResult:
        log = FailureLog(self.name)
        for h, M in self.instances():
            log.case()
            oracle = brute_force_optimum(h, M)
            tag = f"{tuple(h.counts)}/{M}"
            for algo in EXACT_ALGORITHMS:
                rep = run_algorithm(algo, h, M, registry=self.registry)
                if not _phi_close(rep.phi, oracle.best_phi):
                    log.fail(f"{algo.value} on {tag}: phi {rep.phi!r} != oracle {oracle.best_phi!r}")
                elif not _certified(h, rep):
                    log.fail(f"{algo.value} on {tag}: certificate fails")
            w = window_bounds(h, M)
            if w.width > 4 * h.support_size - 4:
                log.fail(f"window on {tag}: width {w.width} > 4r - 4")
            for opt in oracle.optima:
                if not w.contains(opt.freqs):
                    log.fail(f"window on {tag}: optimum {opt.freqs} outside [L, U]")
        return log.result()


class ExchangeLemmaCheck(Check):
    """Uma tabela viável passa no certificado (modo exato) sse atinge o Φ do oráculo."""

    name = "exchange_lemma"

    def __init__(self, seed: int, cases: int, max_compositions: int = LEMMA_MAX_COMPOSITIONS):
        self.seed = seed
        self.cases = cases
        self.max_compositions = max_compositions

    def run(self) -> CheckResult:
        log = FailureLog(self.name)
        for k in range(self.cases):
            h, M = random_small_instance(self.seed + k)
            if composition_count(M, h.support_size) > self.max_compositions:
                continue
            log.case()
            best = brute_force_optimum(h, M).best_phi
            for parts in compositions(M, h.support_size):
                t = FreqTable(freqs=expand_support(h, parts), target=M)
                optimal = _phi_close(phi(h, t), best)
                if is_marginal_optimal(h, t, ComparatorMode.exact).ok != optimal:
                    log.fail(f"{tuple(h.counts)}/{M}: table {parts} certificate disagrees with oracle")
        return log.result()


class ComparatorCheck(Check):
    """Ordem float64 e ordem exata coincidem acima do gap de concordância."""

    name = "comparators"

    def __init__(self, seed: int, pairs: int):
        self.seed = seed
        self.pairs = pairs

    def run(self) -> CheckResult:
        agreement = cross_check_comparators(pairs=self.pairs, seed=self.seed)
        failures = [f"{agreement.disagreements} disagreements above the agreement gap"] if agreement.disagreements else []
        return CheckResult(name=self.name, passed=not failures, cases=agreement.pairs, failures=failures)


def validate_suite(
    seed: int = config.VALIDATE_SEED,
    cases: int = config.VALIDATE_CASES,
    sweep_r: Sequence[int] = tuple(config.VALIDATE_SWEEP_R),
    sweep_n: Sequence[int] = tuple(config.VALIDATE_SWEEP_N),
    sweep_m: Union[int, Sequence[int]] = tuple(config.VALIDATE_SWEEP_M),
    exhaustive: bool = True,
    lemma_cases: Optional[int] = None,
    registry: Optional[Dict[AlgorithmName, Normalizer]] = None,
) -> ValidationSummary:
    """Roda todas as verificações. `registry` permite trocar implementações (controle negativo)."""
    registry = registry or REGISTRY
    lemma_cases = min(cases, 500) if lemma_cases is None else lemma_cases
    engine = CheckEngine([
        WitnessCheck(registry),
        SweepCheck(registry, sweep_r, sweep_n, sweep_m),
        OracleCheck(registry, seed, cases, exhaustive=exhaustive),
        ExchangeLemmaCheck(seed, lemma_cases),
        ComparatorCheck(seed, pairs=cases),
    ])
    summary = ValidationSummary(seed=seed, cases=cases, checks=engine.run())
    logger.info(f"validation {'passed' if summary.passed else 'FAILED'} (seed={seed}, cases={cases})")
    return summary
