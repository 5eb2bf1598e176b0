"""Exact scalars: rationals, Gaussian rationals and the rings Z/2^m.

Rationals are plain :class:`fractions.Fraction` objects.  ``Scalar`` wraps a
pair of them.  Arithmetic mixes freely with ``int`` and ``Fraction``.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational as _RationalABC
from typing import Union

Rational = Fraction
Number = Union[int, Fraction, "Scalar"]


def rational_to_str(q: Fraction | int) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def parse_rational(text: str | int) -> Fraction:
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str):
        raise ValueError(f"rational must be a string 'p/q', got {text!r}")
    s = text.strip()
    num, sep, den = s.partition("/")
    try:
        if sep:
            return Fraction(int(num), int(den))
        return Fraction(int(num))
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"malformed rational {text!r}") from exc


class Scalar:
    """Gaussian rational ``re + i*im`` with exact components."""

    __slots__ = ("re", "im")

    def __init__(self, re: Number = 0, im: Number = 0):
        if isinstance(re, Scalar):
            re, im = re.re, re.im + Fraction(im)
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))

    def __setattr__(self, key, value):
        raise AttributeError("Scalar is immutable")

    def __reduce__(self):
        return (Scalar, (self.re, self.im))

    @staticmethod
    def coerce(x: Number) -> "Scalar":
        if isinstance(x, Scalar):
            return x
        if isinstance(x, (int, _RationalABC)):
            return Scalar(x)
        if isinstance(x, complex):
            raise TypeError("floating complex values are not exact")
        raise TypeError(f"cannot coerce {type(x).__name__} to Scalar")

    def is_real(self) -> bool:
        return self.im == 0

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def conjugate(self) -> "Scalar":
        return Scalar(self.re, -self.im)

    def __add__(self, other):
        if isinstance(other, Scalar):
            return Scalar(self.re + other.re, self.im + other.im)
        if isinstance(other, (int, Fraction)):
            return Scalar(self.re + other, self.im)
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return Scalar(-self.re, -self.im)

    def __pos__(self):
        return self

    def __sub__(self, other):
        if isinstance(other, Scalar):
            return Scalar(self.re - other.re, self.im - other.im)
        if isinstance(other, (int, Fraction)):
            return Scalar(self.re - other, self.im)
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, (int, Fraction)):
            return Scalar(other - self.re, -self.im)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, Scalar):
            a, b, c, d = self.re, self.im, other.re, other.im
            if b == 0 and d == 0:
                return Scalar(a * c)
            return Scalar(a * c - b * d, a * d + b * c)
        if isinstance(other, (int, Fraction)):
            return Scalar(self.re * other, self.im * other)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("Scalar division by zero")
            return Scalar(self.re / other, self.im / other)
        if isinstance(other, Scalar):
            if other.im == 0:
                return self / other.re
            den = other.re * other.re + other.im * other.im
            num = self * other.conjugate()
            return Scalar(num.re / den, num.im / den)
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return Scalar(other) / self
        return NotImplemented

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return Scalar(1) / (self ** (-k))
        result, base = Scalar(1), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, Scalar):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return not self.is_zero()

    def __repr__(self):
        return f"Scalar({self})"

    def __str__(self):
        if self.im == 0:
            return rational_to_str(self.re)
        if self.re == 0:
            return f"{rational_to_str(self.im)}i"
        sign = "+" if self.im > 0 else "-"
        return f"{rational_to_str(self.re)}{sign}{rational_to_str(abs(self.im))}i"

    def to_json(self) -> dict:
        out = {"re": rational_to_str(self.re)}
        if self.im != 0:
            out["im"] = rational_to_str(self.im)
        return out

    @staticmethod
    def from_json(obj) -> "Scalar":
        """Accept ``{"re": .., "im": ..}``, a rational string, or an int."""
        if isinstance(obj, dict):
            extra = set(obj) - {"re", "im"}
            if extra or "re" not in obj:
                raise ValueError(f"malformed scalar object {obj!r}")
            return Scalar(parse_rational(obj["re"]), parse_rational(obj.get("im", "0")))
        if isinstance(obj, bool):
            raise ValueError("booleans are not scalars")
        return Scalar(parse_rational(obj))


I = Scalar(0, 1)
ZERO = Scalar(0)
ONE = Scalar(1)


def as_scalar(x: Number) -> Scalar:
    return Scalar.coerce(x)


def scalar_to_json(x: Number):
    return as_scalar(x).to_json()


class ModScalar:
    """Element of Z/2^m.  Ring operations only; there is no division."""

    __slots__ = ("value", "modulus_log")

    def __init__(self, value: int, modulus_log: int):
        if modulus_log < 1:
            raise ValueError("modulus_log must be positive")
        object.__setattr__(self, "modulus_log", int(modulus_log))
        object.__setattr__(self, "value", int(value) % (1 << modulus_log))

    def __setattr__(self, key, value):
        raise AttributeError("ModScalar is immutable")

    def __reduce__(self):
        return (ModScalar, (self.value, self.modulus_log))

    @property
    def modulus(self) -> int:
        return 1 << self.modulus_log

    def _other(self, other) -> int:
        if isinstance(other, ModScalar):
            if other.modulus_log != self.modulus_log:
                raise ValueError("ModScalar moduli differ")
            return other.value
        if isinstance(other, int):
            return other
        if isinstance(other, Fraction) and other.denominator == 1:
            return other.numerator
        if isinstance(other, Scalar) and other.im == 0 and other.re.denominator == 1:
            return other.re.numerator
        raise TypeError(f"cannot reduce {other!r} into Z/2^{self.modulus_log}")

    def __add__(self, other):
        return ModScalar(self.value + self._other(other), self.modulus_log)

    __radd__ = __add__

    def __sub__(self, other):
        return ModScalar(self.value - self._other(other), self.modulus_log)

    def __rsub__(self, other):
        return ModScalar(self._other(other) - self.value, self.modulus_log)

    def __neg__(self):
        return ModScalar(-self.value, self.modulus_log)

    def __mul__(self, other):
        return ModScalar(self.value * self._other(other), self.modulus_log)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("ModScalar powers need a nonnegative integer exponent")
        return ModScalar(pow(self.value, k, self.modulus), self.modulus_log)

    def __truediv__(self, other):
        raise TypeError("division is not defined in Z/2^m")

    def __eq__(self, other):
        if isinstance(other, ModScalar):
            return self.modulus_log == other.modulus_log and self.value == other.value
        if isinstance(other, int):
            return self.value == other % self.modulus
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.modulus_log))

    def __repr__(self):
        return f"ModScalar({self.value} mod 2^{self.modulus_log})"

    def __str__(self):
        return str(self.value)
