"""
Membership in the strata of a differential ideal, decided by bounded
linear algebra in the polynomial ring of the derivatives that occur.
"""

import logging
from dataclasses import dataclass
from typing import Sequence

from src.entity.bound_expr import format_expr
from src.entity.certificates import NotFound, Stratum, StratifiedCert
from src.entity.derivative import operators_upto
from src.entity.diffpoly import DiffPoly, z_ring
from src.entity.poly import max_degree
from src.repository.catalogue import catalogue
from src.repository.membership import faithful_degree, membership_bounded
from src.schemas.run_config import RunConfig, default_config
from src.services.evaluator import evaluator
from src.services.exceptions import DomainError

logger = logging.getLogger(__name__)


def h_product(generators: Sequence[DiffPoly]) -> DiffPoly:
    """H = product of the initials and separants of the non-constant generators."""
    if not generators:
        raise DomainError("H of an empty set is undefined here; pass at least one generator")
    result = generators[0].ring.one()
    for g in generators:
        if not g.is_constant():
            result = result * g.initial() * g.separant()
    return result


def derived_generators(generators: Sequence[DiffPoly], k: int) -> list[tuple[tuple[int, tuple[int, ...]], DiffPoly]]:
    """Lambda_[k]: theta(lambda) for every operator theta of order at most k."""
    out = []
    for position, g in enumerate(generators):
        for theta in operators_upto(g.ring.m, k):
            out.append(((position, theta), g.apply(theta)))
    return out


def stratified_membership(
    g: DiffPoly,
    generators: Sequence[DiffPoly],
    k: int,
    stratum: Stratum,
    config: RunConfig | None = None,
) -> StratifiedCert | NotFound:
    """
    Decides g in Lambda_[k] (order stratum), Lambda^H_(k) or Lambda^H_[k].

    The H-strata only hold elements of K{X}_{<=k}; for them H^k * g is tested
    instead of g. The search degree is d_N(b) for the N derivatives that
    occur, clipped to ``membership_degree_cap``.

    Args:
    - g (DiffPoly): The candidate.
    - generators (list[DiffPoly]): Lambda.
    - k (int): The stratum index.
    - stratum (Stratum): Which stratum.
    - config (RunConfig | None): Supplies the degree cap.

    Returns:
    - StratifiedCert | NotFound: A verified certificate, or NotFound with the searched degree.
    """
    config = config or default_config()
    generators = list(generators)
    if k < 0:
        raise DomainError("strata are indexed from 0")
    stratum = Stratum(stratum)
    if stratum != Stratum.ORDER and g.bound() > k:
        logger.debug("%s lies outside K{X}_<=%d", g, k)
        return NotFound(-1)
    order = 0 if stratum == Stratum.SATURATED else k
    derived = derived_generators(generators, order)
    multiplier = g.ring.one() if stratum == Stratum.ORDER else h_product(generators) ** k
    target = multiplier * g
    size = max([target.max_index()] + [p.max_index() for _, p in derived])
    ring = z_ring(size)
    target_poly = target.to_poly(ring)
    gen_polys = [p.to_poly(ring) for _, p in derived]
    degree = faithful_degree(ring.n, max(target_poly.total_degree(), max_degree(gen_polys), 0), config.membership_degree_cap)
    found = membership_bounded(target_poly, gen_polys, degree)
    if not found:
        return found
    return StratifiedCert(stratum, k, g, multiplier, tuple(label for label, _ in derived), found)


@dataclass(frozen=True)
class RosenfeldExponent:
    """The least K with g in Lambda^H_(K), against the z^{b+d}(d, b) bound."""

    k: int
    certificate: StratifiedCert
    bound_expr: str
    bound: int | None

    @property
    def within_bound(self) -> bool | None:
        return None if self.bound is None else self.k <= self.bound

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "certificate": self.certificate.to_dict(),
            "bound_expr": self.bound_expr,
            "bound": self.bound,
            "within_bound": self.within_bound,
        }


def rosenfeld_exponent(
    g: DiffPoly, generators: Sequence[DiffPoly], d: int, cap: int, config: RunConfig | None = None
) -> RosenfeldExponent | None:
    """
    Searches K = bound(g) .. cap for g in Lambda^H_(K).

    Args:
    - g (DiffPoly): A partially reduced member of (Lambda^H_[d]).
    - generators (list[DiffPoly]): Lambda.
    - d (int): The stratum index g was found in.
    - cap (int): Largest K tried.
    - config (RunConfig | None): Budget and degree cap.

    Returns:
    - RosenfeldExponent | None: The least K found, or None when none up to ``cap`` works.
    """
    config = config or default_config()
    b = max(p.bound() for p in generators)
    node = catalogue("z_k", b + d, d, b)
    bound = evaluator.evaluate(node, budget=config.budget())
    for k in range(g.bound(), cap + 1):
        found = stratified_membership(g, generators, k, Stratum.SATURATED, config)
        if found:
            return RosenfeldExponent(k, found, format_expr(node), bound if isinstance(bound, int) else None)
    return None
