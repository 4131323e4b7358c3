"""
Stabilization witnesses for chains of autoreduced sets and for ascending
chains of radical differential ideals.
"""

import logging
from dataclasses import dataclass, field
from typing import Sequence

from src.entity.autoreduced import AutoreducedSet
from src.entity.bound_expr import MonotoneFn, SymbolicResidue, format_expr
from src.entity.diffpoly import DiffPoly, DiffRing
from src.entity.ordinal import Comparison
from src.repository.catalogue import catalogue
from src.repository.frak_h import frak_h
from src.repository.noetherian import Stream, stream_item
from src.schemas.run_config import RunConfig, default_config
from src.services.evaluator import evaluator
from src.services.exceptions import ContractViolation, DomainError, OracleUnknown, ScanCapReached

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AutoreducedChainWitness:
    """
    Set ``index`` (1-based) is the first whose successor does not rank lower.
    ``checked`` says whether index <= h(D) was actually compared.
    """

    index: int
    ranks: tuple[tuple[tuple[int, int], ...], ...]
    bound: int | SymbolicResidue
    checked: bool

    def to_dict(self) -> dict:
        return {
            "index": self.index,
            "ranks": [[list(key) for key in rank] for rank in self.ranks],
            "bound": self.bound if isinstance(self.bound, int) else str(self.bound),
            "checked": self.checked,
        }


def _as_set(ring: DiffRing | None, item) -> AutoreducedSet:
    if isinstance(item, AutoreducedSet):
        return item
    items = list(item)
    if items:
        return AutoreducedSet(items[0].ring, tuple(items))
    if ring is None:
        raise DomainError("an empty stream element needs a ring")
    return AutoreducedSet(ring, ())


def _check_contained(i: int, polys, D: MonotoneFn):
    limit = D(i)
    for p in polys:
        if p.bound() > limit:
            raise DomainError(f"stream element {i} holds {p.format()} outside K{{X}}_<={limit}")


def autoreduced_chain_witness(
    stream: Stream, D: MonotoneFn, n: int, m: int, config: RunConfig | None = None, ring: DiffRing | None = None
) -> AutoreducedChainWitness:
    """
    Scans for the first i with rank(stream[i+1]) not lower than rank(stream[i]).

    Args:
    - stream (Stream): Autoreduced sets (or lists of polynomials), element i in K{X}_{<=D(i)}.
      A finite list repeats its last element.
    - D (MonotoneFn): The containment control.
    - n (int): Number of indeterminates.
    - m (int): Number of derivations.
    - config (RunConfig | None): Scan cap and the budget for h(D).
    - ring (DiffRing | None): Needed only when the stream starts with empty sets.

    Returns:
    - AutoreducedChainWitness: The 1-based index; index <= h(D) whenever h(D) evaluates.
    """
    config = config or default_config()
    previous = _as_set(ring, stream_item(stream, 0, hold_last=True))
    _check_contained(0, previous, D)
    ranks = [previous.rank_keys()]
    for i in range(config.scan_cap):
        following = _as_set(previous.ring, stream_item(stream, i + 1, hold_last=True))
        _check_contained(i + 1, following, D)
        ranks.append(following.rank_keys())
        if following.compare(previous) != Comparison.LESS:
            break
        previous = following
    else:
        raise ScanCapReached(f"rank kept dropping for {config.scan_cap} steps", partial=ranks)
    bound = frak_h(n, m, D, budget=config.budget())
    checked = isinstance(bound, int)
    if checked and i >= bound:
        raise ContractViolation(f"autoreduced chain witness {i + 1} exceeds h = {bound}", item=i)
    logger.info("autoreduced chain stops dropping at %d (h = %s)", i + 1, bound)
    return AutoreducedChainWitness(i + 1, tuple(ranks), bound, checked)


def brute_force_chain_index(stream: Sequence) -> int:
    """The same 1-based index by direct rank comparison over a finite list."""
    sets = [_as_set(None, item) for item in stream]
    for i, (previous, following) in enumerate(zip(sets, sets[1:])):
        if following.compare(previous) != Comparison.LESS:
            return i + 1
    return len(sets)


@dataclass
class RittWitness:
    """
    Every element of Lambda_{F(i)} was confirmed in the perfect ideal
    {Lambda u Lambda_i} at i = ``index``; ``transcript`` lists each oracle call.
    """

    index: int
    transcript: list[tuple[int, str, bool | None]] = field(default_factory=list)
    bound_expr: str = ""
    bound: int | SymbolicResidue | None = None

    @property
    def checked(self) -> bool:
        return isinstance(self.bound, int)

    def to_dict(self) -> dict:
        return {
            "index": self.index,
            "transcript": [[i, text, answer] for i, text, answer in self.transcript],
            "bound_expr": self.bound_expr,
            "bound": self.bound if isinstance(self.bound, int) else "not checked",
        }


def ritt_chain_witness(
    base: Sequence[DiffPoly],
    stream: Stream,
    D: MonotoneFn,
    F: MonotoneFn,
    i0: int,
    oracle,
    config: RunConfig | None = None,
) -> RittWitness:
    """
    Scans i = i0, i0+1, ... for Lambda_{F(i)} inside {Lambda u Lambda_i}.

    Args:
    - base (list[DiffPoly]): Lambda.
    - stream (Stream): Ascending Lambda_0, Lambda_1, ... with Lambda_i in K{X}_{<=D(i)}.
    - D (MonotoneFn): The containment control.
    - F (MonotoneFn): The look-ahead.
    - i0 (int): Where the scan starts.
    - oracle (Callable): Perfect ideal membership ``oracle(h, generators, index)``.
    - config (RunConfig | None): Scan cap and budget.

    Returns:
    - RittWitness: The first successful i, the transcript and the j bound.
    """
    config = config or default_config()
    base = list(base)
    if not base:
        raise DomainError("the Ritt scan needs a non-empty base set")
    ring = base[0].ring
    d = max(p.bound() for p in base)
    node = catalogue("j", F, ring.n, ring.m, i0, d)
    witness = RittWitness(i0, bound_expr=format_expr(node))
    for i in range(i0, i0 + config.scan_cap):
        current = list(stream_item(stream, i, hold_last=True))
        _check_contained(i, current, D)
        ahead_index = F(i)
        ahead = list(stream_item(stream, ahead_index, hold_last=True))
        _check_contained(ahead_index, ahead, D)
        generators = base + current
        confirmed = True
        for h in ahead:
            answer = oracle(h, generators, i)
            witness.transcript.append((i, h.format(), answer))
            if answer is None:
                raise OracleUnknown(f"the oracle cannot decide {h.format()} at {i}", witness.transcript, i)
            if not answer:
                confirmed = False
                break
        if confirmed:
            witness.index = i
            witness.bound = evaluator.evaluate(node, budget=config.budget())
            if witness.checked and i > witness.bound:
                raise ContractViolation(f"Ritt witness {i} exceeds j = {witness.bound}", item=witness)
            logger.info("Ritt chain confirmed at %d", i)
            return witness
    raise ScanCapReached(
        f"no confirmation within {config.scan_cap} indices from {i0}; bound {witness.bound_expr}",
        witness.transcript,
        witness,
    )


def replay_ritt_witness(witness: RittWitness, base: Sequence[DiffPoly], stream: Stream, F: MonotoneFn, oracle) -> bool:
    i = witness.index
    generators = list(base) + list(stream_item(stream, i, hold_last=True))
    return all(oracle(h, generators, i) is True for h in stream_item(stream, F(i), hold_last=True))
