from enum import Enum

from pydantic import BaseModel, ConfigDict, Field

from src.config.config import settings


class RankingEnum(str, Enum):
    ORDERLY = "orderly"


class RunConfig(BaseModel):
    budget_bits: int = Field(default=settings.budget_bits, ge=1)
    step_cap: int = Field(default=settings.step_cap, ge=1)
    witness_pool_size: int = Field(default=settings.witness_pool_size, ge=1)
    scan_cap: int = Field(default=settings.scan_cap, ge=1)
    membership_degree_cap: int = Field(default=settings.membership_degree_cap, ge=1)
    procedure_step_cap: int = Field(default=settings.procedure_step_cap, ge=1)
    ranking: RankingEnum = RankingEnum(settings.ranking)
    seed: int = settings.seed
    monotone_samples: int = Field(default=settings.monotone_samples, ge=1)

    model_config = ConfigDict(frozen=True, extra="forbid")

    def budget(self):
        from src.services.evaluator import Budget

        return Budget(self.budget_bits, self.step_cap)

    def override(self, **changes) -> "RunConfig":
        """A copy with every non-None value in ``changes`` applied."""
        values = self.model_dump()
        values.update({k: v for k, v in changes.items() if v is not None})
        return RunConfig.model_validate(values)


def default_config() -> RunConfig:
    return RunConfig()
