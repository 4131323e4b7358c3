import logging

from pydantic_settings import BaseSettings
from dotenv import load_dotenv

load_dotenv()


class Settings(BaseSettings):
    budget_bits: int = 1 << 20
    step_cap: int = 200_000
    witness_pool_size: int = 64
    scan_cap: int = 64
    membership_degree_cap: int = 6
    procedure_step_cap: int = 64
    ranking: str = "orderly"
    seed: int = 7
    monotone_samples: int = 32
    coherence_horizon: int = 1
    log_level: str = "WARNING"

    class Config:
        extra = "ignore"
        env_file = ".env"
        env_file_encoding = "utf-8"


settings = Settings()

# межа розміру проміжних значень (у бітах)
BUDGET_BITS = settings.budget_bits
STEP_CAP = settings.step_cap

# межі для процедур пошуку
WITNESS_POOL_SIZE = settings.witness_pool_size
SCAN_CAP = settings.scan_cap
MEMBERSHIP_DEGREE_CAP = settings.membership_degree_cap
PROCEDURE_STEP_CAP = settings.procedure_step_cap

# кількість пар для перевірки монотонності
MONOTONE_SAMPLES = settings.monotone_samples

# на скільки порядків вище найменшої спільної похідної перевіряється когерентність
COHERENCE_HORIZON = settings.coherence_horizon

DOC_HEADER = "# diffbounds-doc v1"
LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def configure_logging(level: str | None = None):
    logging.basicConfig(level=(level or settings.log_level).upper(), format=LOG_FORMAT)
