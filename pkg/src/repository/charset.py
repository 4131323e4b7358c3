"""
Characteristic sets of prime differential ideals given by a membership oracle.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Callable, Sequence

from src.entity.autoreduced import AutoreducedSet
from src.entity.bound_expr import format_expr
from src.entity.certificates import PseudoDivCert, Stratum
from src.entity.diffpoly import DiffPoly
from src.entity.ordinal import Comparison
from src.repository.autoreduction import delta_certificates, minimal_autoreduced_subset
from src.repository.catalogue import catalogue
from src.repository.pseudodivision import pseudodivide
from src.repository.stratified import stratified_membership
from src.schemas.run_config import RunConfig, default_config
from src.services.exceptions import (
    ContractViolation,
    DomainError,
    OracleInconsistency,
    OracleUnknown,
    PoolExhausted,
    ProcedureAbort,
    StepCapReached,
)

logger = logging.getLogger(__name__)

Oracle = Callable[..., bool | None]


class Repair(str, Enum):
    COHERENCE = "coherence"
    SATURATION = "saturation"
    SEPARANT_INITIAL = "initial-separant"
    PRIMALITY = "bounded-primality"
    REDUCED_ELEMENT = "reduced-element"


class _Session:
    """Asks the oracle, keeps the transcript and rejects contradictory answers."""

    def __init__(self, oracle: Oracle):
        self.oracle = oracle
        self.transcript: list[tuple[str, bool | None]] = []
        self.answers: dict[DiffPoly, bool] = {}
        self.partial: AutoreducedSet | None = None

    def ask(self, h: DiffPoly) -> bool:
        if h in self.answers:
            return self.answers[h]
        answer = self.oracle(h)
        self.transcript.append((h.format(), answer))
        if answer is None:
            raise OracleUnknown(f"the oracle cannot decide {h.format()}", self.transcript, self.partial)
        if h.is_constant() and answer != h.is_zero():
            raise OracleInconsistency(f"the oracle answered {answer} for the constant {h.format()}", self.transcript, self.partial)
        self.answers[h] = bool(answer)
        return self.answers[h]

    def require(self, h: DiffPoly, why: str):
        if not self.ask(h):
            raise OracleInconsistency(f"the oracle denies {h.format()}, which {why}", self.transcript, self.partial)


@dataclass
class CharSetRun:
    sigma: AutoreducedSet
    chain: list[AutoreducedSet]
    repairs: list[Repair]
    transcript: list[tuple[str, bool | None]]
    certificates: list[PseudoDivCert] = field(default_factory=list)
    bound_expr: str = ""

    def to_dict(self) -> dict:
        return {
            "sigma": self.sigma.to_list(),
            "chain": [s.to_list() for s in self.chain],
            "repairs": [r.value for r in self.repairs],
            "transcript": [[text, answer] for text, answer in self.transcript],
            "certificates": [c.to_dict() for c in self.certificates],
            "bound_expr": self.bound_expr,
        }


def _atoms(current: AutoreducedSet) -> list[DiffPoly]:
    ring = current.ring
    atoms = {ring.variable(index) for p in current for index in p.indices()}
    atoms |= {DiffPoly.from_dict(ring, {m: Fraction(1)}) for p in current for m, _ in p.terms if m}
    return sorted(atoms, key=lambda p: (p.total_degree(), p.max_index(), p.format()))


def monomial_support_pool(current: AutoreducedSet, limit: int) -> tuple[list[DiffPoly], bool]:
    """
    The derivatives and monomials occurring in the current elements and
    their pairwise products, truncated to ``limit``; the flag reports
    whether truncation happened.
    """
    atoms = _atoms(current)
    pool = atoms + [a * b for a, b in combinations_with_replacement(atoms, 2)]
    unique = list(dict.fromkeys(pool))
    return unique[:limit], len(unique) > limit


def _pair_pool(current: AutoreducedSet, limit: int) -> tuple[list[tuple[DiffPoly, DiffPoly]], bool]:
    pairs = list(combinations_with_replacement(_atoms(current), 2))
    return pairs[:limit], len(pairs) > limit


def _lower(current: AutoreducedSet, extra: Sequence[DiffPoly]) -> AutoreducedSet:
    following = minimal_autoreduced_subset(current.ring, list(current) + list(extra))
    if following.compare(current) != Comparison.LESS:
        raise ContractViolation(f"rank did not drop from {current.format()}", following)
    return following


def _stratum_index(current: AutoreducedSet, p: DiffPoly) -> int:
    return max(current.bound(), p.bound())


def _coherence(current: AutoreducedSet, session: _Session) -> list[DiffPoly]:
    pending = [c.remainder for c in delta_certificates(current) if not c.remainder.is_zero()]
    for r in pending:
        session.require(r, "is a Delta-S remainder of members")
    return pending


def _saturation(current: AutoreducedSet, generators: Sequence[DiffPoly], session: _Session) -> list[DiffPoly]:
    for f in generators:
        r = pseudodivide(f, current).remainder
        if not r.is_zero():
            session.require(r, f"is the remainder of the member {f.format()}")
            return [r]
    return []


def _initial_separant(current: AutoreducedSet, session: _Session) -> list[DiffPoly]:
    for p in current:
        for factor in (p.initial(), p.separant()):
            if factor.is_constant() or not session.ask(factor):
                continue
            r = pseudodivide(factor, current).remainder
            if r.is_zero():
                raise ProcedureAbort(
                    f"{factor.format()} is in P and reduces to 0; the rank cannot be lowered",
                    session.transcript,
                    current,
                )
            return [r]
    return []


def _primality(current: AutoreducedSet, session: _Session, config: RunConfig) -> list[DiffPoly]:
    pairs, truncated = _pair_pool(current, config.witness_pool_size)
    for f, g in pairs:
        product = f * g
        if not stratified_membership(product, list(current), _stratum_index(current, product), Stratum.SATURATED, config):
            continue
        in_f, in_g = session.ask(f), session.ask(g)
        if not (in_f or in_g):
            raise OracleInconsistency(
                f"{product.format()} is in P but neither {f.format()} nor {g.format()} is",
                session.transcript,
                current,
            )
        member = f if in_f else g
        r = pseudodivide(member, current).remainder
        if not r.is_zero():
            return [r]
    if truncated:
        raise PoolExhausted(f"bounded primality pool exceeds {config.witness_pool_size} candidates", session.transcript, current)
    return []


def _reduced_element(current: AutoreducedSet, session: _Session, config: RunConfig) -> list[DiffPoly]:
    candidates, truncated = monomial_support_pool(current, config.witness_pool_size)
    for c in candidates:
        if not current.contains_reduced(c):
            continue
        if stratified_membership(c, list(current), _stratum_index(current, c), Stratum.SATURATED, config):
            session.require(c, "lies in the saturation of members")
            return [c]
    if truncated:
        raise PoolExhausted(f"reduced element pool exceeds {config.witness_pool_size} candidates", session.transcript, current)
    return []


def char_set(generators: Sequence[DiffPoly], oracle: Oracle, config: RunConfig | None = None) -> CharSetRun:
    """
    Lowers an autoreduced subset of ``generators`` inside P until none of
    the five repairs applies: coherence, saturation of the generators, an
    initial or separant in P, a bounded primality failure, or a non-zero
    reduced element of the saturation.

    Args:
    - generators (list[DiffPoly]): Lambda, every element in P.
    - oracle (Callable): Membership in the prime differential ideal P.
    - config (RunConfig | None): Step cap, witness pool size and degree cap.

    Returns:
    - CharSetRun: Sigma with its chain, the repairs applied and the oracle transcript.
    """
    config = config or default_config()
    generators = list(generators)
    if not generators:
        raise DomainError("char_set needs at least one generator")
    ring = generators[0].ring
    session = _Session(oracle)
    for f in generators:
        session.require(f, "is a generator")
    current = minimal_autoreduced_subset(ring, generators)
    session.partial = current
    chain, repairs = [current], []
    while True:
        for repair, step in (
            (Repair.COHERENCE, lambda: _coherence(current, session)),
            (Repair.SATURATION, lambda: _saturation(current, generators, session)),
            (Repair.SEPARANT_INITIAL, lambda: _initial_separant(current, session)),
            (Repair.PRIMALITY, lambda: _primality(current, session, config)),
            (Repair.REDUCED_ELEMENT, lambda: _reduced_element(current, session, config)),
        ):
            extra = step()
            if extra:
                break
        else:
            break
        if any(p.is_constant() for p in extra):
            raise OracleInconsistency("a repair produced a non-zero constant inside P", session.transcript, current)
        if len(chain) > config.procedure_step_cap:
            raise StepCapReached(f"char_set did not settle in {config.procedure_step_cap} passes", session.transcript, current)
        current = _lower(current, extra)
        logger.debug("char_set %s repair: %s", repair.value, current.format())
        session.partial = current
        chain.append(current)
        repairs.append(repair)
    certificates = [pseudodivide(f, current) for f in generators]
    b = max(f.bound() for f in generators)
    bound_expr = format_expr(catalogue("i_char", ring.n, ring.m, max(b, 1))) if ring.m else ""
    return CharSetRun(current, chain, repairs, session.transcript, certificates, bound_expr)


def verify_char_set(run: CharSetRun, generators: Sequence[DiffPoly], oracle: Oracle) -> list[str]:
    """Independent replay; returns the failed checks (empty when Sigma stands)."""
    failures = []
    sigma = run.sigma
    if any(not c.remainder.is_zero() for c in delta_certificates(sigma)):
        failures.append("sigma is not reduction-coherent")
    if any(not pseudodivide(f, sigma).remainder.is_zero() for f in generators):
        failures.append("a generator does not reduce to 0")
    for p in sigma:
        if oracle(p) is not True:
            failures.append(f"{p.format()} is not confirmed in P")
        for factor in (p.initial(), p.separant()):
            if factor.is_constant():
                continue
            if oracle(factor) is not False:
                failures.append(f"{factor.format()} is not confirmed outside P")
    for previous, following in zip(run.chain, run.chain[1:]):
        if following.compare(previous) != Comparison.LESS:
            failures.append("the chain does not strictly descend")
    return failures
