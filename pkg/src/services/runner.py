"""
Runs kernel procedures on input documents and replays result documents.
"""

import logging
from typing import Callable

from pydantic_core import to_jsonable_python

from src.entity.autoreduced import AutoreducedSet
from src.entity.bound_expr import MonotoneFn
from src.entity.certificates import MembershipCert, PseudoDivCert
from src.entity.diffpoly import DiffPoly, DiffRing
from src.entity.ordinal import Comparison
from src.entity.poly import PolyRing, max_degree
from src.repository.autoreduction import autoreduce, coherent, is_coherent
from src.repository.catalogue import function_argument
from src.repository.chains import autoreduced_chain_witness, ritt_chain_witness
from src.repository.charset import char_set, verify_char_set
from src.repository.membership import faithful_degree, is_syzygy, membership_bounded, syzygy_generators
from src.repository.noetherian import dickson_witness, hilbert_chain_witness
from src.repository.pseudodivision import pseudodivide, pseudodivision_bound, reduction_step, within_bounds
from src.schemas.documents import GeneratorEnum, InputDocument, OracleKindEnum, ProcedureEnum, ResultDocument
from src.schemas.run_config import RunConfig
from src.services.exceptions import ContractViolation, DomainError, KernelException
from src.services.generators import derivative_closure, greedy_descent, staircase
from src.services.oracles import BoundedPowerOracle, PseudodivisionOracle, TableOracle

logger = logging.getLogger(__name__)


def _bound(value) -> int | str:
    return value if isinstance(value, int) else str(value)


def diff_ring(doc: InputDocument) -> DiffRing:
    return DiffRing(doc.ring.n, doc.ring.m, tuple(doc.ring.names))


def poly_ring(doc: InputDocument) -> PolyRing:
    return PolyRing.of(doc.ring.names or doc.ring.n)


def _control(text: str) -> MonotoneFn:
    return function_argument(text)


def _target(doc: InputDocument) -> str:
    if doc.target is None:
        raise DomainError("this procedure needs a target polynomial")
    return doc.target


def build_oracle(doc: InputDocument, ring: DiffRing, config: RunConfig):
    schema = doc.oracle
    if schema is None:
        raise DomainError("this procedure needs an oracle")
    if schema.kind == OracleKindEnum.PSEUDODIVISION:
        if not schema.sigma:
            return PseudodivisionOracle()
        return PseudodivisionOracle(AutoreducedSet(ring, tuple(ring.parse(p) for p in schema.sigma)))
    if schema.kind == OracleKindEnum.BOUNDED_POWER:
        return BoundedPowerOracle(schema.cap, config)
    entries = [
        ((entry.index, entry.poly) if entry.index is not None else entry.poly, entry.answer)
        for entry in schema.entries
        if entry.answer is not None
    ]
    return TableOracle(ring, entries)


def _diff_stream(doc: InputDocument, ring: DiffRing, D: MonotoneFn, base: list[DiffPoly]):
    if doc.generated is None:
        if not doc.stream:
            raise DomainError("this procedure needs a stream or a generated stream")
        return [[ring.parse(p) for p in item] for item in doc.stream]
    if doc.generated.name == GeneratorEnum.DERIVATIVE_CLOSURE:
        return derivative_closure(base, doc.generated.length)
    if doc.generated.name == GeneratorEnum.GREEDY_DESCENT:
        return greedy_descent(ring, D, doc.generated.length)
    raise DomainError(f"{doc.generated.name.value} does not produce differential polynomials")


def _run_pseudodivide(doc: InputDocument, config: RunConfig) -> dict:
    ring = diff_ring(doc)
    f = ring.parse(_target(doc))
    divisors = [ring.parse(p) for p in doc.polynomials]
    cert = pseudodivide(f, divisors)
    steps = []
    for g in cert.divisors:
        step = reduction_step(f, g)
        if step is not None:
            steps.append({"divisor": g.format(), "kind": step.kind, "result": step.result.format()})
    bound = pseudodivision_bound(cert)
    return {
        "certificate": cert.to_dict(),
        "steps": steps,
        "bound": bound if bound is not None else "not checked",
        "within_bounds": within_bounds(cert),
    }


def _run_autoreduce(doc: InputDocument, config: RunConfig) -> dict:
    ring = diff_ring(doc)
    return autoreduce([ring.parse(p) for p in doc.polynomials], config).to_dict()


def _run_coherent(doc: InputDocument, config: RunConfig) -> dict:
    ring = diff_ring(doc)
    start = AutoreducedSet(ring, tuple(ring.parse(p) for p in doc.polynomials))
    return coherent(start, doc.containment, config).to_dict()


def _run_charset(doc: InputDocument, config: RunConfig) -> dict:
    ring = diff_ring(doc)
    generators = [ring.parse(p) for p in doc.polynomials]
    oracle = build_oracle(doc, ring, config)
    run = char_set(generators, oracle, config)
    result = run.to_dict()
    result["verification"] = verify_char_set(run, generators, oracle)
    return result


def _run_dickson(doc: InputDocument, config: RunConfig) -> dict:
    if not doc.vectors:
        raise DomainError("dickson needs a list of vectors")
    witness = dickson_witness(doc.vectors, _control(doc.D), doc.ring.n, config)
    return {"i": witness.i, "j": witness.j, "bound": _bound(witness.bound)}


def _run_hilbert_chain(doc: InputDocument, config: RunConfig) -> dict:
    ring = poly_ring(doc)
    if doc.generated is not None:
        if doc.generated.name != GeneratorEnum.STAIRCASE:
            raise DomainError(f"{doc.generated.name.value} does not produce ordinary polynomials")
        stream = staircase(ring, doc.generated.length)
    else:
        stream = [[ring.parse(p) for p in item] for item in doc.stream]
    witness = hilbert_chain_witness(stream, _control(doc.D), ring.n, config)
    return {
        "j": witness.j,
        "certificates": [c.to_dict() for c in witness.certificates],
        "leading_monomials": [list(m) for m in witness.leading_monomials],
        "bound": _bound(witness.bound),
    }


def _run_autoreduced_chain(doc: InputDocument, config: RunConfig) -> dict:
    ring = diff_ring(doc)
    D = _control(doc.D)
    stream = _diff_stream(doc, ring, D, [ring.parse(p) for p in doc.polynomials])
    return autoreduced_chain_witness(stream, D, ring.n, ring.m, config, ring).to_dict()


def _run_ritt_chain(doc: InputDocument, config: RunConfig) -> dict:
    ring = diff_ring(doc)
    D, F = _control(doc.D), _control(doc.F)
    base = [ring.parse(p) for p in doc.polynomials]
    stream = _diff_stream(doc, ring, D, base)
    oracle = build_oracle(doc, ring, config)
    return ritt_chain_witness(base, stream, D, F, doc.i0, oracle, config).to_dict()


def _membership_degree(doc: InputDocument, ring: PolyRing, polys, config: RunConfig) -> int:
    if doc.degree is not None:
        return doc.degree
    return faithful_degree(ring.n, max(max_degree(polys), 0), config.membership_degree_cap)


def _run_membership(doc: InputDocument, config: RunConfig) -> dict:
    ring = poly_ring(doc)
    h = ring.parse(_target(doc))
    gens = [ring.parse(p) for p in doc.polynomials]
    found = membership_bounded(h, gens, _membership_degree(doc, ring, [h, *gens], config))
    return found.to_dict()


def _run_syzygy(doc: InputDocument, config: RunConfig) -> dict:
    ring = poly_ring(doc)
    gens = [ring.parse(p) for p in doc.polynomials]
    degree = _membership_degree(doc, ring, gens, config)
    return {
        "degree": degree,
        "syzygies": [[e.format() for e in s.entries] for s in syzygy_generators(gens, degree)],
    }


PROCEDURES: dict[ProcedureEnum, Callable[[InputDocument, RunConfig], dict]] = {
    ProcedureEnum.PSEUDODIVIDE: _run_pseudodivide,
    ProcedureEnum.AUTOREDUCE: _run_autoreduce,
    ProcedureEnum.COHERENT: _run_coherent,
    ProcedureEnum.CHARSET: _run_charset,
    ProcedureEnum.DICKSON: _run_dickson,
    ProcedureEnum.HILBERT_CHAIN: _run_hilbert_chain,
    ProcedureEnum.AUTOREDUCED_CHAIN: _run_autoreduced_chain,
    ProcedureEnum.RITT_CHAIN: _run_ritt_chain,
    ProcedureEnum.MEMBERSHIP: _run_membership,
    ProcedureEnum.SYZYGY: _run_syzygy,
}


def run_procedure(procedure: ProcedureEnum, doc: InputDocument, config: RunConfig) -> ResultDocument:
    """
    Runs one procedure and wraps its output in a result document.

    Args:
    - procedure (ProcedureEnum): The procedure.
    - doc (InputDocument): The system and procedure inputs.
    - config (RunConfig): Caps and budget, already merged with ``doc.config``.

    Returns:
    - ResultDocument: The input, the effective config and the result with its certificates.
    """
    procedure = ProcedureEnum(procedure)
    logger.info("running %s", procedure.value)
    result = to_jsonable_python(PROCEDURES[procedure](doc, config))
    return ResultDocument(procedure=procedure, input=doc, config=config.model_dump(mode="json"), result=result)


def _pseudo_certificate(ring: DiffRing, data: dict) -> PseudoDivCert:
    divisors = AutoreducedSet(ring, tuple(ring.parse(p) for p in data["divisors"]))
    cofactors = {(c["divisor"], tuple(c["theta"])): ring.parse(c["cofactor"]) for c in data["cofactors"]}
    return PseudoDivCert(
        ring.parse(data["f"]),
        divisors,
        ring.parse(data["remainder"]),
        tuple(tuple(pair) for pair in data["exponents"]),
        cofactors,
    )


def _membership_certificate(ring: PolyRing, data: dict) -> MembershipCert:
    return MembershipCert(
        ring.parse(data["target"]),
        tuple(ring.parse(g) for g in data["generators"]),
        tuple(ring.parse(c) for c in data["cofactors"]),
        data["degree_bound"],
    )


def _certificate_checks(document: ResultDocument) -> list[str]:
    procedure, doc, result = document.procedure, document.input, document.result
    failures = []
    if procedure in (ProcedureEnum.PSEUDODIVIDE, ProcedureEnum.AUTOREDUCE, ProcedureEnum.COHERENT, ProcedureEnum.CHARSET):
        ring = diff_ring(doc)
        certificates = [result["certificate"]] if procedure == ProcedureEnum.PSEUDODIVIDE else result["certificates"]
        for data in certificates + result.get("delta_certificates", []):
            _pseudo_certificate(ring, data)
        if "chain" in result:
            chain = [AutoreducedSet(ring, tuple(ring.parse(p) for p in stage)) for stage in result["chain"]]
            if any(b.compare(a) != Comparison.LESS for a, b in zip(chain, chain[1:])):
                failures.append("the recorded chain does not strictly descend")
        if procedure == ProcedureEnum.COHERENT:
            if not is_coherent(AutoreducedSet(ring, tuple(ring.parse(p) for p in result["result"]))):
                failures.append("the recorded set is not reduction-coherent")
    elif procedure in (ProcedureEnum.MEMBERSHIP, ProcedureEnum.HILBERT_CHAIN):
        ring = poly_ring(doc)
        certificates = result.get("certificates", [result] if "cofactors" in result else [])
        for data in certificates:
            _membership_certificate(ring, data)
    elif procedure == ProcedureEnum.SYZYGY:
        ring = poly_ring(doc)
        gens = [ring.parse(p) for p in doc.polynomials]
        for entries in result["syzygies"]:
            if not is_syzygy([ring.parse(e) for e in entries], gens):
                failures.append(f"({', '.join(entries)}) is not a syzygy")
    elif procedure == ProcedureEnum.DICKSON:
        i, j = result["i"], result["j"]
        if not all(a <= b for a, b in zip(doc.vectors[i - 1], doc.vectors[j - 1])):
            failures.append(f"vector {i} is not below vector {j}")
    return failures


def replay(document: ResultDocument) -> list[str]:
    """
    Checks a result document: every certificate is rebuilt (which re-expands
    it exactly) and the procedure is run again on the recorded input and
    config, which must reproduce the recorded result.

    Args:
    - document (ResultDocument): A document written by ``run``.

    Returns:
    - list[str]: The failed checks; empty when everything replays.
    """
    failures = []
    try:
        failures.extend(_certificate_checks(document))
    except ContractViolation as err:
        failures.append(f"certificate does not replay: {err.detail}")
    except (KeyError, TypeError) as err:
        failures.append(f"malformed result: {err!r}")
    config = RunConfig.model_validate(document.config)
    try:
        fresh = to_jsonable_python(PROCEDURES[document.procedure](document.input, config))
    except KernelException as err:
        failures.append(f"the procedure no longer completes: {err.detail}")
    else:
        if fresh != document.result:
            failures.append("a fresh run differs from the recorded result")
    logger.info("replayed %s: %d failures", document.procedure.value, len(failures))
    return failures
