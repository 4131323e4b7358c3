import logging
from dataclasses import dataclass, field
from enum import Enum

from src.entity.bound_expr import BoundExpr, SymbolicResidue, format_expr
from src.services.evaluator import Budget, evaluator

logger = logging.getLogger(__name__)


class Verdict(str, Enum):
    holds = "HOLDS"
    fails = "FAILS"
    inconclusive = "INCONCLUSIVE"


@dataclass(frozen=True)
class DominanceRow:
    sample: dict
    lhs: int | SymbolicResidue
    rhs: int | SymbolicResidue
    verdict: Verdict

    def __str__(self) -> str:
        assignment = ", ".join(f"{k}={v}" for k, v in sorted(self.sample.items()))
        return f"{self.verdict.value} [{assignment}] lhs={self.lhs} rhs={self.rhs}"


@dataclass
class DominanceReport:
    lhs: BoundExpr
    rhs: BoundExpr
    rows: list[DominanceRow] = field(default_factory=list)

    @property
    def holds(self) -> bool:
        return all(row.verdict is not Verdict.fails for row in self.rows)

    @property
    def counterexamples(self) -> list[DominanceRow]:
        return [row for row in self.rows if row.verdict is Verdict.fails]

    def count(self, verdict: Verdict) -> int:
        return sum(row.verdict is verdict for row in self.rows)


def _verdict(lhs, rhs) -> Verdict:
    lhs_exact, rhs_exact = isinstance(lhs, int), isinstance(rhs, int)
    if lhs_exact and rhs_exact:
        return Verdict.holds if lhs <= rhs else Verdict.fails
    if lhs_exact:
        return Verdict.holds if lhs <= rhs.lower_bound else Verdict.inconclusive
    if rhs_exact and lhs.lower_bound > rhs:
        return Verdict.fails
    return Verdict.inconclusive


def dominates(
    lhs: BoundExpr, rhs: BoundExpr, samples: list[dict], bits: int | None = None, steps: int | None = None
) -> DominanceReport:
    """
    Checks lhs <= rhs on sample assignments of the free variables.

    A side that outgrows the budget is compared through its certified lower
    bound: an exact lhs below the rhs bound still holds, an lhs bound above
    an exact rhs fails, anything else is inconclusive. No symbolic proof is
    attempted.

    Args:
    - lhs (BoundExpr): The smaller side.
    - rhs (BoundExpr): The dominating side.
    - samples (list[dict]): Assignments of the free variables.
    - bits (int | None): Bit cap per evaluation.
    - steps (int | None): Step cap per evaluation.

    Returns:
    - DominanceReport: One row per sample.
    """
    report = DominanceReport(lhs, rhs)
    for sample in samples:
        caps = {k: v for k, v in (("bits", bits), ("steps", steps)) if v is not None}
        left = evaluator.evaluate(lhs, dict(sample), Budget(**caps))
        right = evaluator.evaluate(rhs, dict(sample), Budget(**caps))
        row = DominanceRow(dict(sample), left, right, _verdict(left, right))
        if row.verdict is Verdict.fails:
            logger.warning("%s <= %s fails: %s", format_expr(lhs), format_expr(rhs), row)
        report.rows.append(row)
    return report
