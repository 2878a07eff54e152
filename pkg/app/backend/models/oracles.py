from __future__ import annotations

from pydantic import BaseModel, Field

from settings import settings


class QuadratureSettings(BaseModel):
    abs_tol: float = Field(default_factory=lambda: settings.quad_abs_tol, gt=0)
    rel_tol: float = Field(default_factory=lambda: settings.quad_rel_tol, gt=0)
    max_subdivisions: int = Field(default_factory=lambda: settings.quad_max_subdivisions, ge=1)
    singularity_window: float = Field(default_factory=lambda: settings.quad_singularity_window, ge=0)


class EulerMaclaurinResult(BaseModel):
    value: float
    bound: float = Field(ge=0)
