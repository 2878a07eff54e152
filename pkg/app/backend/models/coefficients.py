from __future__ import annotations

from enum import Enum
from typing import List

import orjson
from pydantic import BaseModel, ConfigDict, Field, model_validator

from models.common import ComplexScalar, is_positive_integer


class CoefficientPath(str, Enum):
    explicit = "explicit"
    recurrence = "recurrence"
    integer_direct = "integer-direct"
    auto = "auto"


class CoefficientTable(BaseModel):
    """Dense prefixes of c_n(z), p_n(z,a) and C_n(z,a) for one (z, a, path)."""

    model_config = ConfigDict(populate_by_name=True, frozen=True)

    z: ComplexScalar
    a: ComplexScalar
    path: CoefficientPath
    c: List[ComplexScalar] = Field(default_factory=list)
    p: List[ComplexScalar] = Field(default_factory=list)
    big_c: List[ComplexScalar] = Field(alias="C")
    working_dps: int = Field(default=0, ge=0)
    notes: List[str] = Field(default_factory=list)

    @model_validator(mode="after")
    def _check(self) -> "CoefficientTable":
        if self.path == CoefficientPath.auto:
            raise ValueError("a table is always built on a concrete path")
        if self.path == CoefficientPath.integer_direct:
            if not is_positive_integer(self.a):
                raise ValueError("integer-direct tables need a positive integer a")
            if self.c:
                raise ValueError("integer-direct tables carry no c_n")
        if self.z == 1 and self.c:
            raise ValueError("c_n is undefined at z=1")
        return self

    @property
    def order(self) -> int:
        return len(self.big_c)

    def dump_json(self) -> bytes:
        payload = {
            "z": [self.z.real, self.z.imag],
            "a": [self.a.real, self.a.imag],
            "path": self.path.value,
            "C": [[v.real, v.imag] for v in self.big_c],
        }
        return orjson.dumps(payload)
