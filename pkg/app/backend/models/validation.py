from __future__ import annotations

from enum import Enum
from typing import List, Literal, Optional

from pydantic import BaseModel, Field

from models.common import ComplexScalar


class ReferenceMethod(str, Enum):
    direct = "direct"
    quadrature = "quadrature"
    precise = "precise"
    # per-cell choice used by the error table: direct for integer a, precise otherwise
    mixed = "mixed"


class ValidationRow(BaseModel):
    z: ComplexScalar
    s: ComplexScalar
    a: ComplexScalar
    order: int = Field(ge=1)
    reference: ComplexScalar
    approximation: ComplexScalar
    rel_error: float = Field(ge=0)
    published: Optional[float] = Field(default=None, gt=0)
    passed: bool = False


class ReportMetadata(BaseModel):
    reference_method: ReferenceMethod
    tolerance_policy: str
    timestamp: Optional[str] = None


class ValidationReport(BaseModel):
    rows: List[ValidationRow]
    metadata: ReportMetadata

    @property
    def all_passed(self) -> bool:
        return all(r.passed for r in self.rows)

    @property
    def max_rel_error(self) -> float:
        return max((r.rel_error for r in self.rows), default=0.0)


class SweepRow(BaseModel):
    abscissa: float
    reference: Optional[ComplexScalar] = None
    approximations: List[Optional[ComplexScalar]] = Field(default_factory=list)
    rel_errors: List[Optional[float]] = Field(default_factory=list)
    note: Optional[str] = None


class SweepDataset(BaseModel):
    axis: Literal["z", "a"]
    z: Optional[ComplexScalar] = None
    s: ComplexScalar
    a: Optional[ComplexScalar] = None
    orders: List[int] = Field(min_length=1)
    rows: List[SweepRow] = Field(default_factory=list)
    diagnostics: List[str] = Field(default_factory=list)

    @property
    def max_rel_error(self) -> List[Optional[float]]:
        out: List[Optional[float]] = []
        for i in range(len(self.orders)):
            vals = [r.rel_errors[i] for r in self.rows if i < len(r.rel_errors) and r.rel_errors[i] is not None]
            out.append(max(vals) if vals else None)
        return out

    @property
    def mean_rel_error(self) -> List[Optional[float]]:
        out: List[Optional[float]] = []
        for i in range(len(self.orders)):
            vals = [r.rel_errors[i] for r in self.rows if i < len(r.rel_errors) and r.rel_errors[i] is not None]
            out.append(sum(vals) / len(vals) if vals else None)
        return out


class CheckOutcome(BaseModel):
    name: str
    passed: bool
    cases: int = Field(ge=0)
    worst: Optional[float] = None
    detail: Optional[str] = None
