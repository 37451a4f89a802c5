"""Runtime configuration"""
from functools import lru_cache

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Numerical tolerances and defaults, overridable via CVVPRO_* env vars or .env"""

    model_config = SettingsConfigDict(env_prefix="CVVPRO_", env_file=".env", extra="ignore")

    # Projection solver
    qp_tolerance: float = Field(1e-9, gt=0, description="KKT tolerance of the active-set solver")
    qp_iteration_factor: int = Field(50, ge=1, description="Iteration cap is factor*(k+q+1)")
    gram_regularization: float = Field(1e-12, ge=0, description="Diagonal shift of the Gram matrix")
    oracle_max_size: int = Field(8, ge=1, description="Largest n and k+q the brute-force oracle accepts")

    # Diagnostics
    lemma_tolerance: float = Field(1e-7, gt=0, description="Slack for structural inequality checks")
    membership_tolerance: float = Field(1e-8, gt=0, description="Slack for intersection membership")
    feasible_samples: int = Field(50, ge=1, description="Feasible samples per checked round")

    # Hindsight benchmark
    benchmark_iterations: int = Field(2000, ge=1, description="Projected-gradient iteration budget")
    benchmark_tolerance: float = Field(1e-6, gt=0, description="Required benchmark KKT residual")

    # Logging
    log_level: str = Field("INFO", description="Root log level")


@lru_cache()
def get_settings() -> Settings:
    """Cached settings instance"""
    return Settings()
