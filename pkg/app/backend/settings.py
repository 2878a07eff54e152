from __future__ import annotations

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    model_config = SettingsConfigDict(env_file=".env", env_file_encoding="utf-8", extra="ignore")

    log_level: str = Field(default="INFO", alias="LOG_LEVEL")

    # Expansion limits
    max_order: int = Field(default=64, ge=1, le=170, alias="LERCH_MAX_ORDER")
    convergent_max_order: int = Field(default=20000, ge=1, alias="LERCH_CONVERGENT_MAX_ORDER")
    series_max_terms: int = Field(default=1_000_000, ge=1, alias="LERCH_SERIES_MAX_TERMS")
    hurwitz_direct_terms: int = Field(default=1_000_000, ge=1, alias="LERCH_HURWITZ_DIRECT_TERMS")

    # Coefficient tables are settled in mpmath before being rounded to doubles.
    coefficient_dps: int = Field(default=32, ge=16, alias="LERCH_COEFFICIENT_DPS")
    coefficient_max_dps: int = Field(default=512, ge=16, alias="LERCH_COEFFICIENT_MAX_DPS")
    coefficient_cache_size: int = Field(default=256, ge=1, alias="LERCH_COEFFICIENT_CACHE_SIZE")

    # Quadrature oracle
    quad_abs_tol: float = Field(default=1e-12, gt=0, alias="LERCH_QUAD_ABS_TOL")
    quad_rel_tol: float = Field(default=1e-10, gt=0, alias="LERCH_QUAD_REL_TOL")
    quad_max_subdivisions: int = Field(default=200, ge=1, alias="LERCH_QUAD_MAX_SUBDIVISIONS")
    quad_singularity_window: float = Field(default=1e-5, ge=0, alias="LERCH_QUAD_SINGULARITY_WINDOW")

    reference_dps: int = Field(default=30, ge=15, alias="LERCH_REFERENCE_DPS")

    workers: int = Field(default=4, ge=1, alias="LERCH_WORKERS")


settings = Settings()
