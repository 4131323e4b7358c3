"""
Autoreduced and coherent sets: minimal rank subsets, the autoreduction
procedure, Delta-S-polynomials and the coherence completion.
"""

import logging
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from src.config.config import COHERENCE_HORIZON
from src.entity.autoreduced import AutoreducedSet
from src.entity.bound_expr import format_expr
from src.entity.certificates import PseudoDivCert
from src.entity.derivative import Derivative, operators_upto
from src.entity.diffpoly import DiffPoly, DiffRing
from src.entity.ordinal import Comparison
from src.repository.catalogue import catalogue
from src.repository.pseudodivision import pseudodivide
from src.schemas.run_config import RunConfig, default_config
from src.services.evaluator import evaluator
from src.services.exceptions import ContractViolation, DomainError, StepCapReached, UnitIdeal

logger = logging.getLogger(__name__)


def minimal_autoreduced_subset(ring: DiffRing, polys: Iterable[DiffPoly]) -> AutoreducedSet:
    """
    A minimal rank autoreduced subset, chosen greedily: in ascending rank,
    keep each polynomial reduced with respect to everything kept so far.

    Args:
    - ring (DiffRing): The ring, needed when ``polys`` is empty.
    - polys (Iterable[DiffPoly]): Candidates; constants are skipped.

    Returns:
    - AutoreducedSet: The subset.
    """
    chosen: list[DiffPoly] = []
    for p in sorted((p for p in polys if not p.is_constant()), key=lambda p: p.rank_key()):
        if all(p.is_reduced(q) for q in chosen):
            chosen.append(p)
    return AutoreducedSet(ring, tuple(chosen))


def _descend(previous: AutoreducedSet, following: AutoreducedSet):
    if following.compare(previous) != Comparison.LESS:
        raise ContractViolation(f"rank did not drop from {previous.format()} to {following.format()}", following)


def _check_constant(r: DiffPoly):
    if not r.is_zero() and r.is_constant():
        raise UnitIdeal(f"a remainder reduced to the constant {r.format()}; the ideal is the whole ring")


def _stage_bounds(name: str, ring: DiffRing, b: int, stages: int, config: RunConfig) -> list[int | None]:
    """The control function values D(0..stages-1), None from the first one outgrowing the budget."""
    bounds: list[int | None] = []
    for i in range(stages):
        value = evaluator.evaluate(catalogue(name, b, ring.n, ring.m, i), budget=config.budget())
        if not isinstance(value, int):
            bounds.extend([None] * (stages - i))
            break
        bounds.append(value)
    return bounds


@dataclass
class ProcedureRun:
    """
    The output of autoreduce or coherent: the final set, the strictly
    descending chain that led there and the certificates that justify it.
    """

    result: AutoreducedSet
    chain: list[AutoreducedSet]
    certificates: list[PseudoDivCert] = field(default_factory=list)
    delta_certificates: list[PseudoDivCert] = field(default_factory=list)
    stage_bounds: list[int | None] = field(default_factory=list)
    bound_expr: str = ""

    @property
    def bound_checked(self) -> bool:
        return bool(self.stage_bounds) and None not in self.stage_bounds

    def to_dict(self) -> dict:
        return {
            "result": self.result.to_list(),
            "chain": [s.to_list() for s in self.chain],
            "certificates": [c.to_dict() for c in self.certificates],
            "delta_certificates": [c.to_dict() for c in self.delta_certificates],
            "bound_expr": self.bound_expr,
            "stage_bounds": self.stage_bounds,
            "bound_checked": self.bound_checked,
        }


def _check_stages(run: ProcedureRun, index_bound: int | None = None):
    """Stage i of the chain stays within the control function value D(i)."""
    for stage, bound in zip(run.chain, run.stage_bounds):
        for p in stage:
            if index_bound is not None and p.max_index() > index_bound:
                raise ContractViolation(f"{p.format()} uses a derivative beyond index {index_bound}", run)
            limit = p.total_degree() if index_bound is not None else p.bound()
            if bound is not None and limit > bound:
                raise ContractViolation(f"{p.format()} leaves the stage bound {bound}", run)


def autoreduce(polys: Sequence[DiffPoly], config: RunConfig | None = None) -> ProcedureRun:
    """
    Finds an autoreduced set whose saturation contains ``polys``.

    Starts from a minimal rank subset; while some input has a non-zero
    remainder, adds the remainder and passes to a minimal rank subset again.
    Every pass strictly lowers the rank.

    Args:
    - polys (list[DiffPoly]): Non-constant inputs from one ring.
    - config (RunConfig | None): Step cap and evaluation budget.

    Returns:
    - ProcedureRun: The set, its chain and one zero-remainder certificate per input.
    """
    config = config or default_config()
    if not polys:
        raise DomainError("autoreduce needs at least one polynomial")
    ring = polys[0].ring
    for p in polys:
        if p.is_constant():
            raise DomainError(f"the constant {p.format()} cannot be autoreduced")
    current = minimal_autoreduced_subset(ring, polys)
    chain = [current]
    while True:
        certificates = [pseudodivide(f, current) for f in polys]
        pending = next((c.remainder for c in certificates if not c.remainder.is_zero()), None)
        if pending is None:
            break
        _check_constant(pending)
        if len(chain) > config.procedure_step_cap:
            raise StepCapReached(f"autoreduce did not settle in {config.procedure_step_cap} passes", partial=current)
        following = minimal_autoreduced_subset(ring, list(current) + [pending])
        _descend(current, following)
        logger.debug("autoreduce pass %d: %s", len(chain), following.format())
        current = following
        chain.append(current)
    b = max(p.bound() for p in polys)
    stage_bounds = _stage_bounds("D_sat", ring, b, len(chain), config)
    bound_expr = format_expr(catalogue("i_sat", ring.n, ring.m, b))
    run = ProcedureRun(current, chain, certificates, stage_bounds=stage_bounds, bound_expr=bound_expr)
    _check_stages(run, b)
    return run


def common_leader(f: DiffPoly, g: DiffPoly) -> Derivative | None:
    u, w = f.leader(), g.leader()
    if u.indeterminate != w.indeterminate:
        return None
    return u.common_derivative(w)


def delta_s_poly(f: DiffPoly, g: DiffPoly, v: Derivative | None = None) -> DiffPoly:
    """
    S_g * theta_g(f) - S_f * theta_f(g), where theta_g(f) and theta_f(g) both
    have leader ``v``.

    Args:
    - f (DiffPoly): Non-constant.
    - g (DiffPoly): Non-constant.
    - v (Derivative | None): A common derivative of both leaders; the least one when omitted.

    Returns:
    - DiffPoly: The Delta-S-polynomial.
    """
    least = common_leader(f, g)
    if least is None:
        raise DomainError(f"the leaders of {f.format()} and {g.format()} share no common derivative")
    v = v or least
    if not v.is_derivative_of(least):
        raise DomainError(f"{v} is not a common derivative of {f.leader()} and {g.leader()}")
    theta_f = f.leader().operator_to(v)
    theta_g = g.leader().operator_to(v)
    return g.separant() * f.apply(theta_f) - f.separant() * g.apply(theta_g)


def common_derivatives(f: DiffPoly, g: DiffPoly, horizon: int = COHERENCE_HORIZON) -> list[Derivative]:
    """
    The common derivatives of the two leaders, from the least one up to
    ``horizon`` further orders, lowest first. Empty when the leaders belong
    to different indeterminates.
    """
    least = common_leader(f, g)
    if least is None:
        return []
    return [least.apply(theta) for theta in operators_upto(len(least.exponents), horizon)]


def delta_pairs(current: AutoreducedSet, horizon: int = COHERENCE_HORIZON) -> list[tuple[int, int, Derivative]]:
    return [
        (i, j, v)
        for i in range(len(current))
        for j in range(i + 1, len(current))
        for v in common_derivatives(current[i], current[j], horizon)
    ]


def delta_certificates(current: AutoreducedSet, horizon: int = COHERENCE_HORIZON) -> list[PseudoDivCert]:
    return [
        pseudodivide(delta_s_poly(current[i], current[j], v), current)
        for i, j, v in delta_pairs(current, horizon)
    ]


def is_coherent(current: AutoreducedSet, horizon: int = COHERENCE_HORIZON) -> bool:
    """
    Reduction-coherence: Delta(f, g, v) reduces to 0 for every pair sharing a
    leader indeterminate and every common derivative v within ``horizon``
    orders of the least one.
    """
    return all(c.remainder.is_zero() for c in delta_certificates(current, horizon))


def coherent(start: AutoreducedSet, containment: bool = False, config: RunConfig | None = None) -> ProcedureRun:
    """
    Completes an autoreduced set to a reduction-coherent one.

    Nonzero Delta-S remainders are added and a minimal rank subset taken
    until all of them vanish. With ``containment`` the elements of the
    starting set must also reduce to 0 against the result.

    Args:
    - start (AutoreducedSet): The starting set.
    - containment (bool): Whether to also keep the starting set in the saturation.
    - config (RunConfig | None): Step cap and evaluation budget.

    Returns:
    - ProcedureRun: The coherent set with its Delta-S certificates.
    """
    config = config or default_config()
    ring = start.ring
    current = start
    chain = [current]
    while True:
        deltas = delta_certificates(current)
        pending = [c.remainder for c in deltas if not c.remainder.is_zero()]
        certificates = [pseudodivide(f, current) for f in start] if containment and not pending else []
        if not pending:
            pending = [c.remainder for c in certificates if not c.remainder.is_zero()][:1]
        if not pending:
            break
        for r in pending:
            _check_constant(r)
        if len(chain) > config.procedure_step_cap:
            raise StepCapReached(f"coherent did not settle in {config.procedure_step_cap} passes", partial=current)
        following = minimal_autoreduced_subset(ring, list(current) + pending)
        _descend(current, following)
        logger.debug("coherence pass %d: %s", len(chain), following.format())
        current = following
        chain.append(current)
    b = start.bound()
    run = ProcedureRun(current, chain, certificates, deltas)
    if ring.m:
        run.stage_bounds = _stage_bounds("D_cohere", ring, b, len(chain), config)
        run.bound_expr = format_expr(catalogue("i_cohere", ring.n, ring.m, b))
        _check_stages(run)
    return run
