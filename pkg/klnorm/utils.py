"""
utils.py
Verificações determinísticas da suíte de validação.

- Cada Check tem uma responsabilidade única e devolve um CheckResult.
- Novas verificações entram criando subclasses de Check, sem modificar o CheckEngine.
"""
from __future__ import annotations

import logging
from abc import ABC, abstractmethod
from typing import List

from .schemas import CheckResult

logger = logging.getLogger("klnorm.validate")

# Falhas guardadas por verificação (o resto só é contado)
MAX_FAILURES_KEPT = 20


class Check(ABC):
    """Interface de uma verificação da suíte."""

    name: str = "check"

    @abstractmethod
    def run(self) -> CheckResult:
        pass


class FailureLog:
    """Acumula casos e mensagens de falha de uma verificação."""

    def __init__(self, name: str):
        self.name = name
        self.cases = 0
        self.failed = 0
        self.messages: List[str] = []

    def case(self) -> None:
        self.cases += 1

    def fail(self, message: str) -> None:
        self.failed += 1
        if len(self.messages) < MAX_FAILURES_KEPT:
            self.messages.append(message)
        logger.debug(f"{self.name}: {message}")

    def result(self) -> CheckResult:
        failures = list(self.messages)
        if self.failed > len(failures):
            failures.append(f"... and {self.failed - len(failures)} more")
        return CheckResult(name=self.name, passed=self.failed == 0, cases=self.cases, failures=failures)


class CheckEngine:
    """Executa as verificações em ordem; uma verificação que levanta exceção conta como falha."""

    def __init__(self, checks: List[Check]):
        self.checks = checks

    def run(self) -> List[CheckResult]:
        results: List[CheckResult] = []
        for check in self.checks:
            try:
                res = check.run()
            except Exception as e:
                logger.error(f"Error in check {check.name}: {e}")
                res = CheckResult(name=check.name, passed=False, failures=[f"raised {type(e).__name__}: {e}"])
            level = logging.INFO if res.passed else logging.WARNING
            logger.log(level, f"check {res.name}: {'pass' if res.passed else 'FAIL'} ({res.cases} cases)")
            results.append(res)
        return results
