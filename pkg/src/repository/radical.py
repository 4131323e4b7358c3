"""
Radical membership: the splitting tree over non-prime ideals, powers of
the Rabinowitsch bound, and bounded primality checks.
"""

import logging
from dataclasses import dataclass, field
from itertools import combinations_with_replacement
from typing import Callable, Sequence

from src.entity.certificates import MembershipCert, NotFound, PowerCertificate
from src.entity.poly import Poly, PolyRing, max_degree
from src.repository.catalogue import catalogue
from src.repository.membership import faithful_degree, membership_bounded, module_membership, syzygy_generators
from src.schemas.run_config import RunConfig, default_config
from src.services.evaluator import evaluator
from src.services.exceptions import (
    DomainError,
    OracleInconsistency,
    OracleUnknown,
    ProcedureAbort,
    StepCapReached,
)
from src.services.linalg import monomials_up_to

logger = logging.getLogger(__name__)

FactorOracle = Callable[[tuple[Poly, ...]], tuple[Poly, Poly] | None]


@dataclass
class RadicalNode:
    generators: tuple[Poly, ...]
    path: tuple[int, ...] = ()
    certificate: MembershipCert | None = None
    split: tuple[Poly, Poly] | None = None
    split_certificate: MembershipCert | None = None
    children: list["RadicalNode"] = field(default_factory=list)

    @property
    def is_leaf(self) -> bool:
        return self.certificate is not None

    def leaves(self) -> list["RadicalNode"]:
        if self.is_leaf:
            return [self]
        return [leaf for child in self.children for leaf in child.leaves()]

    def depth(self) -> int:
        return max((child.depth() + 1 for child in self.children), default=0)

    def to_dict(self) -> dict:
        return {
            "path": "".join(map(str, self.path)),
            "generators": [g.format() for g in self.generators],
            "leaf": self.is_leaf,
            "split": [p.format() for p in self.split] if self.split else None,
            "children": [child.to_dict() for child in self.children],
        }


@dataclass(frozen=True)
class RadicalRepresentation:
    """f == sum coefficients[j] * radicals[j] with radicals[j] ** exponent in the ideal."""

    f: Poly
    coefficients: tuple[Poly, ...]
    radicals: tuple[Poly, ...]
    certificates: tuple[MembershipCert, ...]
    exponent: int
    depth: int
    tree: RadicalNode

    def recombine(self) -> Poly:
        total = self.f.ring.zero()
        for c, r in zip(self.coefficients, self.radicals):
            total = total + c * r
        return total


def _search_degree(polys: Sequence[Poly], config: RunConfig) -> int:
    return faithful_degree(polys[0].ring.n, max_degree(polys), config.membership_degree_cap)


def _grow(node: RadicalNode, f: Poly, oracle: FactorOracle, config: RunConfig, root: RadicalNode, counter: list[int]):
    counter[0] += 1
    if counter[0] > config.procedure_step_cap:
        raise StepCapReached(f"the splitting tree exceeded {config.procedure_step_cap} nodes", partial=root)
    degree = _search_degree([*node.generators, f], config)
    cert = membership_bounded(f, node.generators, degree)
    if cert:
        node.certificate = cert
        logger.debug("leaf %s", node.path)
        return
    split = oracle(node.generators)
    if split is None:
        raise OracleUnknown(f"no factor pair for the ideal at node {node.path or 'root'}", partial=root)
    g, h = split
    degree = _search_degree([*node.generators, g, h], config)
    product = membership_bounded(g * h, node.generators, degree)
    if not product:
        raise OracleInconsistency(f"({g})*({h}) is not certified in the ideal at node {node.path}", partial=root)
    for factor in (g, h):
        if membership_bounded(factor, node.generators, degree):
            raise OracleInconsistency(f"{factor} already lies in the ideal at node {node.path}", partial=root)
    node.split, node.split_certificate = (g, h), product
    logger.debug("split %s by (%s, %s)", node.path, g, h)
    for bit, factor in enumerate((g, h)):
        child = RadicalNode(node.generators + (factor,), node.path + (bit,))
        node.children.append(child)
        _grow(child, f, oracle, config, root, counter)


def _leaf_certificate(leaf: RadicalNode, r: Poly, vector: Sequence[Poly]) -> MembershipCert:
    return MembershipCert(r, leaf.generators, tuple(vector), max(max_degree(vector), 0))


def _power_certificate(node: RadicalNode, leaf_certs: dict[tuple[int, ...], MembershipCert]) -> MembershipCert:
    """
    Certificate of r^e in the node ideal, e the number of leaves below it.

    From r^a = A + g*u over (Gamma, g) and r^b = B + h*v over (Gamma, h)
    with gh = W over Gamma: r^(a+b) = u_i*(B + h*v) + v_i*g*u + w_i*u*v summed against Gamma.
    """
    if node.is_leaf:
        return leaf_certs[node.path]
    left, right = (_power_certificate(child, leaf_certs) for child in node.children)
    g, h = node.split
    *u_i, u = left.cofactors
    *v_i, v = right.cofactors
    B = left.target.ring.zero()
    for gamma, coefficient in zip(node.generators, v_i):
        B = B + gamma * coefficient
    w_i = node.split_certificate.cofactors
    cofactors = tuple(a * (B + h * v) + b * g * u + w * u * v for a, b, w in zip(u_i, v_i, w_i))
    return MembershipCert(left.target * right.target, node.generators, cofactors, max(max_degree(cofactors), 0))


def _combine_leaves(f: Poly, leaves: list[RadicalNode], config: RunConfig):
    first, rest = leaves[0], leaves[1:]
    widths = [len(leaf.generators) for leaf in leaves]
    offsets = [sum(widths[:k]) for k in range(len(leaves))]
    ring = f.ring
    total = sum(widths)
    system = []
    for k, leaf in enumerate(rest, start=1):
        row = [ring.zero()] * total
        row[: widths[0]] = list(first.generators)
        row[offsets[k] : offsets[k] + widths[k]] = [-g for g in leaf.generators]
        system.append(row)
    solution = [c for leaf in leaves for c in leaf.certificate.cofactors]
    start = max(max_degree(solution), 0)
    for degree in range(start, max(start, config.membership_degree_cap) + 1):
        syzygies = syzygy_generators(system, degree)
        coefficients = module_membership(solution, [s.entries for s in syzygies], degree)
        if coefficients is not None:
            return syzygies, coefficients, offsets, widths
    raise ProcedureAbort(
        f"the leaf representations of {f} are not combinations of syzygies up to degree {config.membership_degree_cap}"
    )


def radical_tree(
    Lambda: Sequence[Poly], f: Poly, k: int, oracle: FactorOracle, config: RunConfig | None = None
) -> RadicalRepresentation:
    """
    Writes f as sum c_j * r_j where every r_j has a certified power in (Lambda).

    Starting from Lambda, a node whose ideal does not contain f is split by
    the oracle into (Gamma, g) and (Gamma, h) with gh in (Gamma). At the
    leaves f is a member; the leaf representations are combined through the
    syzygies of the leaf generators, and the power certificates are pushed
    up the tree with the product rule.

    Args:
    - Lambda (list[Poly]): Ideal generators.
    - f (Poly): The candidate radical member.
    - k (int): An exponent with f^k in (Lambda).
    - oracle (FactorOracle): Returns (g, h) for a non-prime node ideal, or None.
    - config (RunConfig | None): Degree cap and node cap.

    Returns:
    - RadicalRepresentation: The decomposition with one certificate of
      r_j^e per radical, e the number of leaves (at most 2^depth).
    """
    config = config or default_config()
    Lambda = tuple(Lambda)
    if not Lambda:
        raise DomainError("radical membership needs at least one generator")
    power = f**k
    if not membership_bounded(power, Lambda, _search_degree([*Lambda, power], config)):
        raise DomainError(f"({f})^{k} is not certified in the ideal")
    root = RadicalNode(Lambda)
    _grow(root, f, oracle, config, root, [0])
    leaves = root.leaves()
    if len(leaves) == 1:
        return RadicalRepresentation(f, (f.ring.one(),), (f,), (root.certificate,), 1, 0, root)
    syzygies, coefficients, offsets, widths = _combine_leaves(f, leaves, config)
    radicals, weights, certificates = [], [], []
    for syzygy, weight in zip(syzygies, coefficients):
        if weight.is_zero():
            continue
        block = syzygy.entries[: widths[0]]
        r = f.ring.zero()
        for gamma, s in zip(leaves[0].generators, block):
            r = r + gamma * s
        if r.is_zero():
            continue
        leaf_certs = {
            leaf.path: _leaf_certificate(leaf, r, syzygy.entries[offsets[i] : offsets[i] + widths[i]])
            for i, leaf in enumerate(leaves)
        }
        radicals.append(r)
        weights.append(weight)
        certificates.append(_power_certificate(root, leaf_certs))
    representation = RadicalRepresentation(
        f, tuple(weights), tuple(radicals), tuple(certificates), len(leaves), root.depth(), root
    )
    if representation.recombine() != f:
        raise ProcedureAbort(f"the combined representation does not recover {f}", partial=root)
    return representation


def minimal_power(f: Poly, Lambda: Sequence[Poly], cap: int, config: RunConfig | None = None) -> tuple[int, MembershipCert] | None:
    """
    The least k <= cap with a certificate of f^k in (Lambda).

    Returns:
    - tuple[int, MembershipCert] | None: The exponent and its certificate.
    """
    config = config or default_config()
    power = f.ring.one()
    for k in range(1, cap + 1):
        power = power * f
        cert = membership_bounded(power, Lambda, _search_degree([*Lambda, power], config))
        if cert:
            return k, cert
    return None


def rabinowitsch_bound(n: int, d: int) -> int | None:
    """d_{n+1}(d+1) when it fits the default budget."""
    value = evaluator.evaluate(catalogue("d_n", n + 1, d + 1))
    return value if isinstance(value, int) else None


def rabinowitsch_bound_check(
    Lambda: Sequence[Poly],
    f: Poly,
    E: int | None = None,
    base: tuple[int, MembershipCert] | None = None,
    config: RunConfig | None = None,
) -> PowerCertificate:
    """
    Certifies f^E in (Lambda) by multiplying a certificate of some smaller power.

    Args:
    - Lambda (list[Poly]): Generators of degree at most d.
    - f (Poly): Degree at most d.
    - E (int | None): Target exponent; d_{n+1}(d+1) when omitted.
    - base (tuple[int, MembershipCert] | None): A known (k, certificate of f^k);
      searched with ``minimal_power`` up to the scan cap when omitted.
    - config (RunConfig | None): Degree and scan caps.

    Returns:
    - PowerCertificate: f^E as f^(E-k) times the base certificate.
    """
    config = config or default_config()
    Lambda = tuple(Lambda)
    if E is None:
        d = max(max_degree(Lambda), f.total_degree())
        E = rabinowitsch_bound(f.ring.n, d)
        if E is None:
            raise DomainError(f"d_{f.ring.n + 1}({d + 1}) is beyond the budget; pass the exponent explicitly")
    if E < 1:
        raise DomainError("the exponent must be positive")
    if base is None:
        base = minimal_power(f, Lambda, min(E, config.scan_cap), config)
    if base is None:
        raise DomainError(f"no power of {f} up to {min(E, config.scan_cap)} is certified in the ideal")
    k, cert = base
    if k > E:
        raise DomainError(f"base power {k} exceeds the exponent {E}")
    logger.debug("f^%d certified, extending to f^%d", k, E)
    return PowerCertificate(f, E, cert, k)


def monomial_pool(ring: PolyRing, b: int, limit: int | None = None) -> list[tuple[Poly, Poly]]:
    """Unordered pairs of monic monomials of degree 1..b."""
    monomials = [ring.monomial(m) for m in monomials_up_to(ring, b) if sum(m)]
    pairs = [(p, q) for p, q in combinations_with_replacement(monomials, 2)]
    return pairs[:limit] if limit else pairs


def prime_up_to_check(
    Lambda: Sequence[Poly], b: int, pool: Sequence[tuple[Poly, Poly]], config: RunConfig | None = None
) -> list[tuple[Poly, Poly]]:
    """
    Pairs (f, g) of the pool with fg in (Lambda) but neither f nor g in (Lambda).

    An empty answer means prime up to b relative to the pool only.

    Args:
    - Lambda (list[Poly]): Ideal generators.
    - b (int): Degree bound of the pool.
    - pool (list[tuple[Poly, Poly]]): Candidate pairs.
    - config (RunConfig | None): Membership degree cap.

    Returns:
    - list[tuple[Poly, Poly]]: The violations, in pool order.
    """
    config = config or default_config()
    Lambda = tuple(Lambda)
    if not Lambda:
        raise DomainError("prime checks need at least one generator")
    degree = faithful_degree(Lambda[0].ring.n, 2 * b, config.membership_degree_cap)
    violations = []
    for f, g in pool:
        if max(f.total_degree(), g.total_degree()) > b:
            raise DomainError(f"pool pair ({f}, {g}) exceeds degree {b}")
        if isinstance(membership_bounded(f * g, Lambda, degree), NotFound):
            continue
        if not membership_bounded(f, Lambda, degree) and not membership_bounded(g, Lambda, degree):
            violations.append((f, g))
    logger.debug("%d violations among %d pairs", len(violations), len(pool))
    return violations
