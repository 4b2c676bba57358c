"""Exact Gaussian-rational scalars ``a + b i`` with ``a, b`` in Q."""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational


class Scalar:
    __slots__ = ("real", "imag")

    def __init__(self, real=0, imag=0):
        self.real = real if type(real) is Fraction else Fraction(real)
        self.imag = imag if type(imag) is Fraction else Fraction(imag)

    @classmethod
    def coerce(cls, value) -> "Scalar":
        if isinstance(value, Scalar):
            return value
        if isinstance(value, (int, Rational)):
            return cls(Fraction(value))
        if isinstance(value, complex):
            raise TypeError("floating-point complex scalars are not exact; use Scalar(a, b)")
        raise TypeError(f"cannot interpret {value!r} as an exact scalar")

    def __bool__(self) -> bool:
        return bool(self.real) or bool(self.imag)

    def __eq__(self, other) -> bool:
        if isinstance(other, Scalar):
            return self.real == other.real and self.imag == other.imag
        if isinstance(other, (int, Rational)):
            return self.imag == 0 and self.real == other
        return NotImplemented

    def __hash__(self) -> int:
        if not self.imag:
            return hash(self.real)
        return hash((self.real, self.imag))

    def __add__(self, other):
        o = _lift(other)
        if o is None:
            return NotImplemented
        return Scalar(self.real + o.real, self.imag + o.imag)

    __radd__ = __add__

    def __sub__(self, other):
        o = _lift(other)
        if o is None:
            return NotImplemented
        return Scalar(self.real - o.real, self.imag - o.imag)

    def __rsub__(self, other):
        o = _lift(other)
        if o is None:
            return NotImplemented
        return o - self

    def __neg__(self):
        return Scalar(-self.real, -self.imag)

    def __mul__(self, other):
        o = _lift(other)
        if o is None:
            return NotImplemented
        if not self.imag and not o.imag:
            return Scalar(self.real * o.real)
        return Scalar(
            self.real * o.real - self.imag * o.imag,
            self.real * o.imag + self.imag * o.real,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = _lift(other)
        if o is None:
            return NotImplemented
        if not o:
            raise ZeroDivisionError("division by zero scalar")
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = _lift(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        out, base = ONE, self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def conjugate(self) -> "Scalar":
        return Scalar(self.real, -self.imag)

    def norm2(self) -> Fraction:
        """``|z|^2``, exact."""
        return self.real * self.real + self.imag * self.imag

    def inverse(self) -> "Scalar":
        n = self.norm2()
        if not n:
            raise ZeroDivisionError("zero scalar has no inverse")
        return Scalar(self.real / n, -self.imag / n)

    @property
    def is_real(self) -> bool:
        return not self.imag

    def __repr__(self) -> str:
        return f"Scalar({self})"

    def __str__(self) -> str:
        if not self.imag:
            return str(self.real)
        if not self.real:
            return f"{self.imag}i"
        sign = "-" if self.imag < 0 else "+"
        return f"{self.real}{sign}{abs(self.imag)}i"


def _lift(value) -> Scalar | None:
    if isinstance(value, Scalar):
        return value
    if isinstance(value, (int, Rational)):
        return Scalar(Fraction(value))
    return None


ZERO = Scalar(0)
ONE = Scalar(1)
I = Scalar(0, 1)
