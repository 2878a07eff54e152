from __future__ import annotations

import cmath
import math
import re
from typing import Annotated, Any

from pydantic import PlainSerializer, PlainValidator

_REAL = r"[+-]?(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?"
_COMPLEX_RE = re.compile(
    rf"^(?P<re>{_REAL})?(?:(?P<im>[+-](?:{_REAL})?|(?:{_REAL}))[ij])?$"
)


def parse_complex(text: str) -> complex:
    """Parse `re`, `re+imi`, `re-imi` or `imi` (also `j`) into a complex.

    `10+1i` -> (10+1j), `-2.5e3` -> (-2500+0j), `3i` -> 3j, `1-i` -> (1-1j).
    """
    raw = str(text).strip().replace(" ", "")
    m = _COMPLEX_RE.match(raw)
    if not raw or not m or (m.group("re") is None and m.group("im") is None):
        raise ValueError(f"not a complex literal: {text!r}")
    re_part = float(m.group("re")) if m.group("re") is not None else 0.0
    im_txt = m.group("im")
    if im_txt is None:
        im_part = 0.0
    elif im_txt in {"+", "-"}:
        im_part = 1.0 if im_txt == "+" else -1.0
    else:
        im_part = float(im_txt)
    value = complex(re_part, im_part)
    return ensure_finite(value)


def ensure_finite(value: complex) -> complex:
    if not cmath.isfinite(value):
        raise ValueError(f"non-finite value: {value!r}")
    return value


def _coerce_complex(value: Any) -> complex:
    if isinstance(value, complex):
        out = value
    elif isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise ValueError("complex pair must be [re, im]")
        out = complex(float(value[0]), float(value[1]))
    elif isinstance(value, str):
        out = parse_complex(value)
    elif isinstance(value, (int, float)) and not isinstance(value, bool):
        out = complex(value)
    else:
        raise ValueError(f"not a complex value: {value!r}")
    return ensure_finite(out)


def _serialize_complex(value: complex) -> list[float]:
    return [float(value.real), float(value.imag)]


ComplexScalar = Annotated[
    complex,
    PlainValidator(_coerce_complex),
    PlainSerializer(_serialize_complex, return_type=list),
]


def format_complex(value: complex, digits: int | None = None) -> str:
    """Human form: real values print bare, complex ones as `a+bi`.

    `digits=None` uses the shortest round-trip representation.
    """

    def fmt(x: float) -> str:
        if digits is None:
            return repr(float(x))
        return f"{x:.{digits}g}"

    if value.imag == 0.0:
        return fmt(value.real)
    sign = "-" if math.copysign(1.0, value.imag) < 0 else "+"
    return f"{fmt(value.real)}{sign}{fmt(abs(value.imag))}i"


def is_positive_integer(value: complex) -> bool:
    return value.imag == 0.0 and value.real >= 1 and float(value.real).is_integer()
