from enum import Enum

from pydantic import BaseModel, ConfigDict, Field, model_validator


class ProcedureEnum(str, Enum):
    PSEUDODIVIDE = "pseudodivide"
    AUTOREDUCE = "autoreduce"
    COHERENT = "coherent"
    CHARSET = "charset"
    DICKSON = "dickson"
    HILBERT_CHAIN = "hilbert-chain"
    AUTOREDUCED_CHAIN = "autoreduced-chain"
    RITT_CHAIN = "ritt-chain"
    MEMBERSHIP = "membership"
    SYZYGY = "syzygy"


class GeneratorEnum(str, Enum):
    DERIVATIVE_CLOSURE = "derivative-closure"
    STAIRCASE = "staircase"
    GREEDY_DESCENT = "greedy-descent"


class OracleKindEnum(str, Enum):
    PSEUDODIVISION = "pseudodivision"
    TABLE = "table"
    BOUNDED_POWER = "bounded-power"


class RingSchema(BaseModel):
    n: int = Field(ge=1)
    m: int = Field(default=0, ge=0)
    names: list[str] = []

    model_config = ConfigDict(extra="forbid")


class OracleEntrySchema(BaseModel):
    poly: str
    answer: bool | None
    index: int | None = Field(default=None, ge=0)

    model_config = ConfigDict(extra="forbid")


class OracleSchema(BaseModel):
    kind: OracleKindEnum
    sigma: list[str] = []
    entries: list[OracleEntrySchema] = []
    cap: int = Field(default=2, ge=1)

    model_config = ConfigDict(extra="forbid")


class GeneratedStreamSchema(BaseModel):
    name: GeneratorEnum
    length: int = Field(ge=1)

    model_config = ConfigDict(extra="forbid")


class InputDocument(BaseModel):
    """
    A system for ``run``: the ring, polynomials as strings and whatever the
    chosen procedure reads (a target, a degree, a stream, an oracle table).
    """

    ring: RingSchema
    polynomials: list[str] = []
    target: str | None = None
    degree: int | None = Field(default=None, ge=0)
    vectors: list[list[int]] = []
    stream: list[list[str]] = []
    generated: GeneratedStreamSchema | None = None
    D: str = "i+2"
    F: str = "i+1"
    i0: int = Field(default=0, ge=0)
    oracle: OracleSchema | None = None
    containment: bool = False
    config: dict = {}

    model_config = ConfigDict(extra="forbid")

    @model_validator(mode="after")
    def check_names(self):
        if self.ring.names and len(self.ring.names) != self.ring.n:
            raise ValueError(f"ring declares n={self.ring.n} but names {self.ring.names}")
        return self


class ResultDocument(BaseModel):
    procedure: ProcedureEnum
    input: InputDocument
    config: dict
    result: dict

    model_config = ConfigDict(extra="forbid")
