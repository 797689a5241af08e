"""Extended rationals: exact Fractions plus two signed infinities.

Infinities compare against Fractions and ints with the usual total order.
Adding opposite infinities, or multiplying an infinity by zero, raises
``ExtendedArithmeticError`` instead of guessing a value.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Union


class ExtendedArithmeticError(ArithmeticError):
    """Undefined operation on extended rationals (e.g. +inf + -inf)."""


class _Inf:
    __slots__ = ("sign",)

    def __init__(self, sign: int):
        self.sign = sign

    def __repr__(self):
        return "POS_INF" if self.sign > 0 else "NEG_INF"

    def __str__(self):
        return "inf" if self.sign > 0 else "-inf"

    def __hash__(self):
        return hash(("extended-inf", self.sign))

    def __eq__(self, other):
        return isinstance(other, _Inf) and other.sign == self.sign

    def __ne__(self, other):
        return not self.__eq__(other)

    def _cmp(self, other):
        if isinstance(other, _Inf):
            return (self.sign > other.sign) - (self.sign < other.sign)
        if isinstance(other, (int, Fraction)):
            return self.sign
        return NotImplemented

    def __lt__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c < 0

    def __le__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c <= 0

    def __gt__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c > 0

    def __ge__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c >= 0

    def __neg__(self):
        return NEG_INF if self.sign > 0 else POS_INF

    def __pos__(self):
        return self

    def __add__(self, other):
        if isinstance(other, _Inf):
            if other.sign != self.sign:
                raise ExtendedArithmeticError("inf - inf is undefined")
            return self
        if isinstance(other, (int, Fraction)):
            return self
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, (_Inf, int, Fraction)):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, (int, Fraction)):
            return -self
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, _Inf):
            return POS_INF if self.sign == other.sign else NEG_INF
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ExtendedArithmeticError("inf * 0 is undefined")
            return self if other > 0 else -self
        return NotImplemented

    __rmul__ = __mul__


POS_INF = _Inf(1)
NEG_INF = _Inf(-1)

Ext = Union[Fraction, _Inf]


def is_inf(x) -> bool:
    return isinstance(x, _Inf)


def is_finite(x) -> bool:
    return not isinstance(x, _Inf)


def pos(x):
    """Positive part x+ (works for infinities)."""
    return x if x > 0 else Fraction(0)


def neg(x):
    """Negative part x- = max(-x, 0)."""
    return -x if x < 0 else Fraction(0)


def parse_ext(text) -> Ext:
    """Parse "p/q", an integer, "inf" or "-inf"."""
    if isinstance(text, _Inf):
        return text
    if isinstance(text, (int, Fraction)) and not isinstance(text, bool):
        return Fraction(text)
    if not isinstance(text, str):
        raise ValueError(f"not a rational string: {text!r}")
    s = text.strip()
    if s in ("inf", "+inf"):
        return POS_INF
    if s == "-inf":
        return NEG_INF
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"malformed rational {text!r}") from exc


def fmt(x) -> str:
    """Canonical text for an extended rational; None prints as 'masked'."""
    if x is None:
        return "masked"
    if isinstance(x, _Inf):
        return str(x)
    return str(Fraction(x))
