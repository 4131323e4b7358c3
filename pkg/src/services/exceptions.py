from typing import Any


class KernelException(Exception):
    """
    Base error of the library. Mirrors an HTTP error: a human readable
    ``detail`` plus the process ``exit_code`` the CLI reports.
    """

    exit_code = 1

    def __init__(self, detail: str, exit_code: int | None = None):
        super().__init__(detail)
        self.detail = detail
        if exit_code is not None:
            self.exit_code = exit_code


class DomainError(KernelException):
    exit_code = 2


class ParseError(DomainError):
    pass


class UnsupportedDimension(DomainError):
    pass


class RingMismatch(DomainError):
    pass


class UnitIdeal(DomainError):
    """A procedure produced a non-zero constant, so the generated ideal is the whole ring."""


class ContractViolation(KernelException):
    exit_code = 1

    def __init__(self, detail: str, item: Any = None):
        super().__init__(detail)
        self.item = item


class VerificationFailure(KernelException):
    exit_code = 1


class ProcedureAbort(KernelException):
    exit_code = 3

    def __init__(self, detail: str, transcript: list | None = None, partial: Any = None):
        super().__init__(detail)
        self.transcript = list(transcript or [])
        self.partial = partial


class OracleUnknown(ProcedureAbort):
    pass


class OracleInconsistency(ProcedureAbort):
    pass


class PoolExhausted(ProcedureAbort):
    pass


class ScanCapReached(ProcedureAbort):
    pass


class StepCapReached(ProcedureAbort):
    pass


class BudgetExhausted(Exception):
    """Raised inside evaluation when an intermediate outgrows the budget."""

    def __init__(self, reason: str, lower_bound: int = 0):
        super().__init__(reason)
        self.reason = reason
        self.lower_bound = lower_bound
