"""Exact coefficient fields: prime fields F_l and the rationals.

Scalars are plain Python values: ``int`` residues in ``[0, l)`` for F_l and
:class:`fractions.Fraction` for characteristic 0.  A :class:`Field` knows how
to normalise and combine them; no floating point is involved anywhere.
"""

from __future__ import annotations

from fractions import Fraction

from .config import is_prime


class FieldError(ValueError):
    pass


class Field:
    __slots__ = ("char",)

    def __init__(self, char: int):
        if char != 0 and not is_prime(char):
            raise FieldError(f"characteristic must be 0 or prime, got {char}")
        self.char = char

    def __eq__(self, other):
        return isinstance(other, Field) and other.char == self.char

    def __hash__(self):
        return hash(("Field", self.char))

    def __repr__(self):
        return "Q" if self.char == 0 else f"F_{self.char}"

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def __call__(self, value):
        """Coerce an int, Fraction or ``"a/b"`` string into this field."""
        if isinstance(value, str):
            value = Fraction(value)
        if self.char == 0:
            return Fraction(value)
        if isinstance(value, Fraction):
            if value.denominator % self.char == 0:
                raise FieldError(f"{value} has no image in {self!r}")
            return value.numerator * pow(value.denominator, -1, self.char) % self.char
        return int(value) % self.char

    def is_normalized(self, value) -> bool:
        if self.char == 0:
            return isinstance(value, Fraction)
        return isinstance(value, int) and 0 <= value < self.char

    def add(self, a, b):
        return a + b if self.char == 0 else (a + b) % self.char

    def sub(self, a, b):
        return a - b if self.char == 0 else (a - b) % self.char

    def neg(self, a):
        return -a if self.char == 0 else (-a) % self.char

    def mul(self, a, b):
        return a * b if self.char == 0 else a * b % self.char

    def inv(self, a):
        if not a:
            raise ZeroDivisionError(f"0 is not invertible in {self!r}")
        if self.char == 0:
            return 1 / a
        return pow(a, -1, self.char)

    def format(self, a) -> str:
        return str(a)

    def parse(self, token: str):
        return self(token)
