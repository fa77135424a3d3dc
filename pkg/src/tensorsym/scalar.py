"""Exact field arithmetic: prime fields GF(p) and arbitrary-precision rationals.

Field elements are plain Python values in canonical form -- an ``int`` in
``[0, p)`` for GF(p), a reduced ``Fraction`` for the rationals -- and a
``FieldSpec`` supplies the operations.  Keeping elements unboxed lets the
linear algebra put them straight into numpy arrays (int64 for GF(p), object
dtype for rationals).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from numbers import Integral

from .errors import UsageError, ValidationError

RATIONAL = "rational"
PRIME_FIELD = "prime-field"

MAX_CHARACTERISTIC = 2 ** 31  # residues stay single-word, products fit int64


def is_prime(n: int) -> bool:
    """Trial division; fine for the bounded range p < 2**31."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    for d in range(3, isqrt(n) + 1, 2):
        if n % d == 0:
            return False
    return True


@dataclass(frozen=True)
class FieldSpec:
    """An exact coefficient field: GF(p) or the rationals."""

    kind: str
    characteristic: int = 0  # 0 for the rationals

    @property
    def is_prime_field(self) -> bool:
        return self.kind == PRIME_FIELD

    def __str__(self):
        return f"gf({self.characteristic})" if self.is_prime_field else "rational"

    # -- element construction --------------------------------------------

    @property
    def zero(self):
        return 0 if self.is_prime_field else Fraction(0)

    @property
    def one(self):
        return 1 if self.is_prime_field else Fraction(1)

    def coerce(self, x):
        """Canonicalize x (int, Fraction, or scalar of this field) into the field."""
        if self.is_prime_field:
            p = self.characteristic
            if isinstance(x, Integral):
                return int(x) % p
            if isinstance(x, Fraction):
                if x.denominator % p == 0:
                    raise ZeroDivisionError(f"denominator {x.denominator} is 0 mod {p}")
                return x.numerator * pow(x.denominator, -1, p) % p
            raise UsageError(f"cannot coerce {type(x).__name__} into {self}")
        if isinstance(x, Fraction):
            return x
        if isinstance(x, Integral):
            return Fraction(int(x))
        raise UsageError(f"cannot coerce {type(x).__name__} into {self}")

    # -- arithmetic -------------------------------------------------------

    def add(self, a, b):
        return (a + b) % self.characteristic if self.is_prime_field else a + b

    def sub(self, a, b):
        return (a - b) % self.characteristic if self.is_prime_field else a - b

    def mul(self, a, b):
        return a * b % self.characteristic if self.is_prime_field else a * b

    def neg(self, a):
        return -a % self.characteristic if self.is_prime_field else -a

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError(f"inverse of zero in {self}")
        if self.is_prime_field:
            return pow(int(a), self.characteristic - 2, self.characteristic)
        return Fraction(1) / a

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def eq(self, a, b) -> bool:
        return a == b

    # -- text form (used by the tensor file format) -----------------------

    def parse(self, text: str):
        """Parse the textual scalar syntax: decimal int, or 'n/d' for rationals."""
        text = text.strip()
        try:
            if self.is_prime_field:
                return int(text, 10) % self.characteristic
            if "/" in text:
                num, _, den = text.partition("/")
                d = int(den, 10)
                if d == 0:
                    raise ZeroDivisionError("zero denominator")
                return Fraction(int(num, 10), d)
            return Fraction(int(text, 10))
        except ValueError:
            raise ValidationError(f"bad scalar literal {text!r} for {self}") from None

    def format(self, value) -> str:
        if self.is_prime_field:
            return str(value)
        if value.denominator == 1:
            return str(value.numerator)
        return f"{value.numerator}/{value.denominator}"


def make_field(kind: str, characteristic: int | None = None) -> FieldSpec:
    """Validated field constructor; the characteristic must be prime."""
    if kind == RATIONAL:
        if characteristic not in (None, 0):
            raise ValidationError("rational field takes no characteristic")
        return FieldSpec(RATIONAL, 0)
    if kind == PRIME_FIELD:
        if characteristic is None:
            raise ValidationError("prime field needs a characteristic")
        if not (2 <= characteristic < MAX_CHARACTERISTIC):
            raise ValidationError(
                f"characteristic {characteristic} outside [2, 2**31)"
            )
        if not is_prime(characteristic):
            raise ValidationError(f"{characteristic} is not prime")
        return FieldSpec(PRIME_FIELD, characteristic)
    raise ValidationError(f"unknown field kind {kind!r}")


def rationals() -> FieldSpec:
    return make_field(RATIONAL)


def gf(p: int) -> FieldSpec:
    return make_field(PRIME_FIELD, p)


_BINARY = {"add", "sub", "mul", "div"}
_UNARY = {"neg", "inv"}


def arith(field: FieldSpec, op: str, a, b=None):
    """Single-entry arithmetic dispatcher over canonical field elements."""
    if op in _BINARY:
        if b is None:
            raise UsageError(f"{op} needs two operands")
        return getattr(field, op)(a, b)
    if op in _UNARY:
        if b is not None:
            raise UsageError(f"{op} takes one operand")
        return getattr(field, op)(a)
    if op == "eq":
        return field.eq(a, b)
    raise UsageError(f"unknown operation {op!r}")
