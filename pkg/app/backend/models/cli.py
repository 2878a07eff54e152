from __future__ import annotations

from enum import Enum
from typing import List, Literal, Optional, Tuple

from pydantic import BaseModel, Field, field_validator

from models.coefficients import CoefficientPath
from models.common import ComplexScalar


class Command(str, Enum):
    eval_f = "eval-f"
    eval_eta = "eval-eta"
    eval_phi = "eval-phi"
    coeffs = "coeffs"
    error_table = "error-table"
    sweep = "sweep"
    check = "check"


COMMAND_ALIASES = {"table1": Command.error_table.value}


class OutputFormat(str, Enum):
    human = "human"
    json = "json"
    csv = "csv"


class CliRequest(BaseModel):
    command: Command
    z: Optional[ComplexScalar] = None
    s: Optional[ComplexScalar] = None
    a: Optional[ComplexScalar] = None
    m: Optional[int] = None
    order: Optional[int] = Field(default=None, ge=1)
    method: Optional[str] = None
    path: CoefficientPath = CoefficientPath.auto
    tol: float = Field(default=1e-14, gt=0)
    split: bool = False

    axis: Optional[Literal["z", "a"]] = None
    samples: int = Field(default=91, ge=2)
    range: Optional[Tuple[float, float]] = None
    orders: Optional[List[int]] = None
    workers: Optional[int] = Field(default=None, ge=1)
    stamp: bool = False

    output: OutputFormat = OutputFormat.human
    out_path: Optional[str] = None
    verbose: bool = False

    @field_validator("command", mode="before")
    @classmethod
    def _command_alias(cls, v):
        return COMMAND_ALIASES.get(v, v)
