"""
Exact rational arithmetic helpers, negative continued fractions and Farey slopes.

Rationals are plain ``fractions.Fraction`` values.  Negative continued
fractions are stored with positive entries, so that

    [a0, a1, ..., ak] = a0 - 1/(a1 - 1/(... - 1/ak))

and plumbing weights / surgery coefficients carry their sign explicitly.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

Rational = Fraction
RationalLike = Union[int, Fraction, str]

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*([+-]?\d+))?\s*$")


class DomainError(ValueError):
    """An input violates the mathematical precondition of an operation."""


def parse_rational(text: RationalLike) -> Fraction:
    """Parse ``"p/q"`` or ``"n"`` into a Fraction.  Decimals are rejected."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    m = _RATIONAL_RE.match(text)
    if m is None:
        raise DomainError(f"malformed rational {text!r}; expected 'p/q' or 'n'")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise DomainError(f"zero denominator in {text!r}")
    return Fraction(num, den)


def format_rational(x: Fraction) -> str:
    """Canonical ``"p/q"`` form; integers are written ``"n/1"``."""
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def cf_expand(x: RationalLike, allow_head_one: bool = False) -> list[int]:
    """
    Negative continued fraction of x with all tail entries >= 2.

    In canonical mode x must be > 1 and every entry is >= 2.  With
    ``allow_head_one`` any x > 0 is accepted and the head may be 1; this is
    the form used for the head of a surgery chain (e.g. 1/2 = [1, 2]).
    """
    x = parse_rational(x)
    if allow_head_one:
        if x <= 0:
            raise DomainError(f"continued fraction needs x > 0, got {x}")
    elif x <= 1:
        raise DomainError(f"canonical continued fraction needs x > 1, got {x}")
    coeffs = []
    while True:
        a = -((-x.numerator) // x.denominator)  # ceil
        coeffs.append(a)
        if a == x:
            return coeffs
        x = 1 / (a - x)


def cf_eval(coeffs: Sequence[int]) -> Fraction:
    """Evaluate [a0, ..., ak] = a0 - 1/(a1 - ...) exactly."""
    if not coeffs:
        raise DomainError("empty continued fraction")
    value = Fraction(coeffs[-1])
    for a in reversed(coeffs[:-1]):
        if value == 0:
            raise DomainError(f"zero denominator while evaluating {list(coeffs)}")
        value = a - 1 / value
    return value


def i_invariant(x: RationalLike) -> int:
    """Sum of (a_i - 3) over the canonical expansion of x > 1."""
    return sum(a - 3 for a in cf_expand(x))


def mod_inverse(q: int, p: int) -> int:
    """The unique 0 < q* < p with q q* = 1 mod p."""
    if p < 2 or not 0 < q < p:
        raise DomainError(f"mod_inverse needs 0 < q < p, got q={q}, p={p}")
    if math.gcd(q, p) != 1:
        raise DomainError(f"{q} is not invertible mod {p}")
    return pow(q, -1, p)


@dataclass(frozen=True, order=True)
class Slope:
    """
    A vertex of the Farey graph, b/a stored as the coprime pair (num=b, den=a).

    The sign lives on the numerator, den >= 0, and infinity is (1, 0).
    """

    num: int
    den: int

    def __post_init__(self):
        b, a = self.num, self.den
        if a == 0 and b == 0:
            raise DomainError("0/0 is not a slope")
        g = math.gcd(b, a)
        b, a = b // g, a // g
        if a < 0 or (a == 0 and b < 0):
            b, a = -b, -a
        object.__setattr__(self, "num", b)
        object.__setattr__(self, "den", a)

    @classmethod
    def from_vector(cls, vec: tuple[int, int]) -> "Slope":
        """Slope of an integer vector (den, num); the sign of the vector is dropped."""
        return cls(vec[1], vec[0])

    @classmethod
    def parse(cls, text: str) -> "Slope":
        text = text.strip()
        if text in ("inf", "oo", "1/0", "-1/0"):
            return INFINITY
        x = parse_rational(text)
        return cls(x.numerator, x.denominator)

    @property
    def is_infinite(self) -> bool:
        return self.den == 0

    def vector(self) -> tuple[int, int]:
        return (self.den, self.num)

    def to_fraction(self) -> Fraction:
        if self.is_infinite:
            raise DomainError("infinity has no rational value")
        return Fraction(self.num, self.den)

    def __str__(self):
        return "inf" if self.is_infinite else f"{self.num}/{self.den}"

    def __repr__(self):
        return f"Slope({self})"


INFINITY = Slope(1, 0)
ZERO = Slope(0, 1)


def as_slope(x) -> Slope:
    if isinstance(x, Slope):
        return x
    if isinstance(x, str):
        return Slope.parse(x)
    x = Fraction(x)
    return Slope(x.numerator, x.denominator)


def farey_sum(s, t) -> Slope:
    """Mediant b/a (+) d/c = (b+d)/(a+c) of the normalized representatives."""
    s, t = as_slope(s), as_slope(t)
    return Slope(s.num + t.num, s.den + t.den)


def det2(u: tuple[int, int], v: tuple[int, int]) -> int:
    return u[0] * v[1] - u[1] * v[0]


def has_edge(s, t) -> bool:
    """Farey adjacency |a d - b c| = 1."""
    s, t = as_slope(s), as_slope(t)
    return abs(s.den * t.num - s.num * t.den) == 1
