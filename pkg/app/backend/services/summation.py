from __future__ import annotations

from typing import Iterable


def two_sum(u: float, v: float) -> tuple[float, float]:
    # Error-free transformation: u + v == s + t exactly.
    s = u + v
    up = s - v
    vpp = s - up
    up -= u
    vpp -= v
    return s, -(up + vpp)


class ComplexAccumulator:
    """Running compensated sum of complex terms.

    Real and imaginary parts are carried separately, each as a leading sum plus
    the accumulated rounding error of every addition.
    """

    __slots__ = ("_re", "_re_err", "_im", "_im_err")

    def __init__(self, start: complex = 0j) -> None:
        start = complex(start)
        self._re, self._re_err = start.real, 0.0
        self._im, self._im_err = start.imag, 0.0

    def add(self, value: complex) -> None:
        value = complex(value)
        self._re, err = two_sum(self._re, value.real)
        self._re_err += err
        self._im, err = two_sum(self._im, value.imag)
        self._im_err += err

    def extend(self, values: Iterable[complex]) -> "ComplexAccumulator":
        for v in values:
            self.add(v)
        return self

    @property
    def value(self) -> complex:
        return complex(self._re + self._re_err, self._im + self._im_err)


def compensated_sum(values: Iterable[complex]) -> complex:
    return ComplexAccumulator().extend(values).value
