from klnorm import config
from klnorm.models import Histogram, NormReport
from klnorm.schemas import AlgorithmName, CheckResult, ComparatorMode
from klnorm.services.algorithms import REGISTRY
from klnorm.services.core import build_histogram, make_report
from klnorm.services.exact import linear_window
from klnorm.services.validation import (
    ExchangeLemmaCheck,
    OracleCheck,
    SweepCheck,
    WitnessCheck,
    exhaustive_instances,
    validate_suite,
)
from klnorm.utils import Check, CheckEngine, FailureLog


def _off_by_one(h: Histogram, M: int, mode: ComparatorMode = ComparatorMode.float64) -> NormReport:
    """linear_window com uma unidade movida do maior para o menor símbolo."""
    rep = linear_window(h, M, mode)
    m = list(rep.freqs)
    if h.support_size > 1:
        big = max(h.support, key=lambda a: m[a])
        small = min(h.support, key=lambda a: m[a])
        if m[big] >= 2:
            m[big] -= 1
            m[small] += 1
    return make_report("linear_window", h, m, M, mode, rep.op_counts)


def test_witness_check_passes():
    res = WitnessCheck(REGISTRY).run()
    assert res.passed, res.failures
    assert res.cases > 0


def test_corrupted_exact_algorithm_is_caught():
    registry = {**REGISTRY, AlgorithmName.linear_window: _off_by_one}
    res = WitnessCheck(registry).run()
    assert not res.passed
    assert any(msg.startswith("linear_window on") for msg in res.failures)


def test_oracle_check_catches_corruption_too():
    registry = {**REGISTRY, AlgorithmName.linear_window: _off_by_one}
    res = OracleCheck(registry, seed=3, cases=30, exhaustive=False).run()
    assert not res.passed
    assert res.cases == 30


def test_exhaustive_grid_size():
    instances = list(exhaustive_instances(max_r=2, max_count=3, max_M=4))
    # r=1: 3 contagens x M em 1..4; r=2: 6 pares x M em 2..4
    assert len(instances) == 3 * 4 + 6 * 3


def test_exchange_lemma():
    res = ExchangeLemmaCheck(seed=11, cases=40).run()
    assert res.passed, res.failures


def test_small_suite_passes():
    summary = validate_suite(seed=5, cases=25, sweep_r=[8], sweep_n=[1000], sweep_m=64, exhaustive=False, lemma_cases=10)
    assert summary.passed, [c.failures for c in summary.checks if not c.passed]


def test_suite_fails_with_corrupted_registry():
    registry = {**REGISTRY, AlgorithmName.smart_collet: _off_by_one}
    summary = validate_suite(seed=5, cases=10, sweep_r=[8], sweep_n=[1000], sweep_m=64, exhaustive=False, lemma_cases=2, registry=registry)
    assert not summary.passed
    failed = {c.name for c in summary.checks if not c.passed}
    assert {"witnesses", "sweep", "oracle"} <= failed


class _Raises(Check):
    name = "raises"

    def run(self) -> CheckResult:
        raise RuntimeError("broken")


def test_engine_turns_exceptions_into_failures():
    results = CheckEngine([_Raises()]).run()
    assert results[0].passed is False
    assert results[0].failures == ["raised RuntimeError: broken"]


def test_failure_log_keeps_a_bounded_sample():
    log = FailureLog("x")
    for k in range(25):
        log.case()
        log.fail(f"case {k}")
    res = log.result()
    assert res.cases == 25
    assert len(res.failures) == 21
    assert res.failures[-1] == "... and 5 more"


def test_sweep_check_drops_cells_wider_than_the_target():
    res = SweepCheck(REGISTRY, sweep_r=[8, 64], sweep_n=[1000], sweep_m=[32, 16]).run()
    assert res.passed, res.failures
    # r=64 cai nos dois alvos; r=8 roda em ambos
    assert res.cases == 2 * 7


def test_default_sweep_grid():
    assert config.VALIDATE_SWEEP_R == [64, 256, 1024, 4096]
    assert config.VALIDATE_SWEEP_N == [10**6, 10**9]
    assert config.VALIDATE_SWEEP_M == [1 << 20, 1 << 14]
