#!/usr/bin/env python3
"""
Точные коэффициенты: гауссовы рациональные числа a + b·i, a, b ∈ ℚ
Комбинаторика Вика и ряды S-матрицы считаются без округлений
"""

from dataclasses import dataclass
from typing import Union

import sympy

Number = Union[int, float, complex, sympy.Rational, "GaussianRational"]


def _rational(value) -> sympy.Rational:
    """float переводится точно (двоичное значение), без округления к ближайшей простой дроби"""
    if isinstance(value, sympy.Rational):
        return value
    if isinstance(value, int):
        return sympy.Integer(value)
    return sympy.Rational(float(value))


@dataclass(frozen=True)
class GaussianRational:
    re: sympy.Rational = sympy.S.Zero
    im: sympy.Rational = sympy.S.Zero

    @classmethod
    def coerce(cls, value: Number) -> "GaussianRational":
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, complex):
            return cls(_rational(value.real), _rational(value.imag))
        return cls(_rational(value), sympy.S.Zero)

    def as_expr(self) -> sympy.Expr:
        return self.re + sympy.I * self.im

    def __add__(self, other: Number) -> "GaussianRational":
        other = GaussianRational.coerce(other)
        return GaussianRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other: Number) -> "GaussianRational":
        other = GaussianRational.coerce(other)
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __rsub__(self, other: Number) -> "GaussianRational":
        return GaussianRational.coerce(other) - self

    def __neg__(self) -> "GaussianRational":
        return GaussianRational(-self.re, -self.im)

    def __mul__(self, other: Number) -> "GaussianRational":
        other = GaussianRational.coerce(other)
        return GaussianRational(self.re * other.re - self.im * other.im,
                                self.re * other.im + self.im * other.re)

    __rmul__ = __mul__

    def __truediv__(self, other: Number) -> "GaussianRational":
        other = GaussianRational.coerce(other)
        norm = other.re * other.re + other.im * other.im
        if norm == 0:
            raise ZeroDivisionError("division by zero coefficient")
        num = self * other.conjugate()
        return GaussianRational(num.re / norm, num.im / norm)

    def __pow__(self, exponent: int) -> "GaussianRational":
        if exponent < 0:
            return ONE / (self ** -exponent)
        result = ONE
        for _ in range(exponent):
            result = result * self
        return result

    def __bool__(self) -> bool:
        return self.re != 0 or self.im != 0

    def __eq__(self, other) -> bool:
        try:
            other = GaussianRational.coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self) -> int:
        return hash((self.re, self.im))

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def to_dict(self) -> dict:
        return {"re": float(self.re), "im": float(self.im), "exact": str(self)}

    def __str__(self) -> str:
        return str(self.as_expr())


ZERO = GaussianRational()
ONE = GaussianRational(sympy.S.One)
IMAG_UNIT = GaussianRational(sympy.S.Zero, sympy.S.One)


def minus_i_power(k: int) -> GaussianRational:
    """(-i)^k"""
    return (-IMAG_UNIT) ** k
