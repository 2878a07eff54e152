from __future__ import annotations

from typing import List

from pydantic import BaseModel, ConfigDict, Field, model_validator

from models.common import ComplexScalar


class ExpansionResult(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    value: ComplexScalar
    order_used: int = Field(alias="order", ge=0)
    remainder_estimate: float = Field(ge=0)
    terms: List[ComplexScalar] = Field(default_factory=list)
    diagnostics: List[str] = Field(default_factory=list)

    @model_validator(mode="after")
    def _order_matches_terms(self) -> "ExpansionResult":
        if self.terms and self.order_used != len(self.terms):
            raise ValueError("order must equal the number of terms")
        return self


class SplitResult(BaseModel):
    """The z-only part and the exponentially small z^(1-a) part of the expansion."""

    leading: ComplexScalar
    exponential: ComplexScalar
    order: int = Field(ge=1)

    @property
    def total(self) -> complex:
        return self.leading + self.exponential
