"""
errors.py
Exceções do klnorm. A CLI converte KlnormError em código de saída 1.
"""


class KlnormError(Exception):
    """Base de todos os erros do pacote."""


class EmptyHistogramError(KlnormError, ValueError):
    def __init__(self, message: str = "empty histogram"):
        super().__init__(message)


class HistogramOverflowError(KlnormError, ValueError):
    pass


class InfeasibleTargetError(KlnormError, ValueError):
    """M < r: nenhuma tabela com KL finito existe."""

    def __init__(self, message: str = "no finite-KL solution"):
        super().__init__(message)


class InvalidTicketError(KlnormError, ValueError):
    pass


class InfeasibleTableError(KlnormError, ValueError):
    pass


class ExactBudgetError(KlnormError):
    def __init__(self, message: str = "exact comparison out of budget"):
        super().__init__(message)


class OracleLimitError(KlnormError):
    def __init__(self, message: str = "instance too large for oracle"):
        super().__init__(message)


class TargetNotPowerOfTwoError(KlnormError, ValueError):
    pass


class FallbackInfeasibleError(KlnormError):
    def __init__(self, message: str = "fallback infeasible"):
        super().__init__(message)


class InvalidDistributionError(KlnormError, ValueError):
    pass


class InputFormatError(KlnormError, ValueError):
    pass
