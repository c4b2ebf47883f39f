"""Exact counting primitives and log-scale carriers used by every other module.

Counts are plain Python integers (already arbitrary precision) and exact
probabilities are `fractions.Fraction`.  Quantities on the Stirling scale,
which overflow floats long before the interesting parameter ranges end,
travel as `LogReal`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import accumulate

_LN2 = math.log(2.0)


def binom(a: int, b: int) -> int:
    """Exact binomial coefficient C(a, b); returns 0 when b > a."""
    if a < 0 or b < 0:
        raise ValueError("binom expects non-negative arguments")
    if b > a:
        return 0
    return math.comb(a, b)


def ln_fraction(q: Fraction) -> float:
    """Natural log of a positive rational, safe for huge numerator/denominator."""
    if q <= 0:
        raise ValueError("ln_fraction needs a positive rational")
    return math.log(q.numerator) - math.log(q.denominator)


@dataclass(frozen=True, order=True)
class LogReal:
    """A non-negative real r carried as ln(r); log_value == -inf encodes r = 0.

    Ordering, multiplication, division, and powers all act on the log scale,
    so values like exp(m) for m in the hundreds stay representable.
    """

    log_value: float

    @property
    def sign(self) -> int:
        """1 for positive values, 0 for exact zero."""
        return 0 if self.log_value == -math.inf else 1

    @classmethod
    def zero(cls) -> "LogReal":
        return cls(-math.inf)

    @classmethod
    def one(cls) -> "LogReal":
        return cls(0.0)

    @classmethod
    def from_ln(cls, log_value: float) -> "LogReal":
        return cls(float(log_value))

    @classmethod
    def from_value(cls, x) -> "LogReal":
        """Build from an int, Fraction, or float; ints/Fractions of any size work."""
        if isinstance(x, Fraction):
            if x < 0:
                raise ValueError("LogReal represents non-negative reals only")
            if x == 0:
                return cls.zero()
            return cls(ln_fraction(x))
        if isinstance(x, int):
            if x < 0:
                raise ValueError("LogReal represents non-negative reals only")
            if x == 0:
                return cls.zero()
            return cls(math.log(x))
        xf = float(x)
        if xf < 0:
            raise ValueError("LogReal represents non-negative reals only")
        if xf == 0.0:
            return cls.zero()
        return cls(math.log(xf))

    def to_float(self) -> float:
        """exp(log_value); math.inf flags overflow past the float range."""
        if self.log_value == -math.inf:
            return 0.0
        try:
            return math.exp(self.log_value)
        except OverflowError:
            return math.inf

    @property
    def overflows_float(self) -> bool:
        return self.log_value != -math.inf and math.isinf(self.to_float())

    def log2(self) -> float:
        """log2 of the represented value (-inf for zero)."""
        return self.log_value / _LN2

    def ceil_int(self) -> int | None:
        """Ceiling of the represented value, or None when it overflows floats."""
        f = self.to_float()
        if math.isinf(f):
            return None
        return math.ceil(f)

    def __mul__(self, other: "LogReal") -> "LogReal":
        if self.sign == 0 or other.sign == 0:
            return LogReal.zero()
        return LogReal(self.log_value + other.log_value)

    def __truediv__(self, other: "LogReal") -> "LogReal":
        if other.sign == 0:
            raise ZeroDivisionError("LogReal division by zero")
        if self.sign == 0:
            return LogReal.zero()
        return LogReal(self.log_value - other.log_value)

    def __pow__(self, exponent) -> "LogReal":
        e = float(exponent)
        if self.sign == 0:
            if e <= 0:
                raise ZeroDivisionError("0 ** non-positive power")
            return LogReal.zero()
        return LogReal(self.log_value * e)


@dataclass(frozen=True)
class StirlingBracket:
    """Two-sided Robbins-style bracket for k!, carried in log scale.

    Invariant: lower.log_value <= ln(k!) <= upper.log_value, with gap
    exactly 1/(12k) - 1/(12k+1).
    """

    lower: LogReal
    upper: LogReal

    @property
    def width(self) -> float:
        return self.upper.log_value - self.lower.log_value


def stirling_bracket(k: int) -> StirlingBracket:
    """Bracket ln(k!) between the two classical correction terms.

    lower = ln(sqrt(2*pi*k) * (k/e)^k) + 1/(12k+1), upper uses 1/(12k).
    """
    if k < 1:
        raise ValueError("stirling_bracket needs k >= 1; 0! = 1 needs no bracket")
    base = 0.5 * math.log(2.0 * math.pi * k) + k * (math.log(k) - 1.0)
    return StirlingBracket(
        lower=LogReal.from_ln(base + 1.0 / (12 * k + 1)),
        upper=LogReal.from_ln(base + 1.0 / (12 * k)),
    )


def composition_count(n: int, m: int, d: int) -> int:
    """Number of tuples (l_1..l_m) with 0 <= l_i <= d and sum n, exactly.

    Dynamic program over parts with a prefix-sum window, O(n*m): the row for
    j parts at sum s is the window sum of the previous row over [s-d, s].
    """
    if n < 1 or m < 1:
        raise ValueError("composition_count needs n >= 1 and m >= 1")
    if d < 0:
        raise ValueError("composition_count needs d >= 0")
    if n > m * d:
        return 0
    row = [1] + [0] * n
    for _ in range(m):
        prefix = list(accumulate(row))
        row = [
            prefix[s] - (prefix[s - d - 1] if s - d - 1 >= 0 else 0)
            for s in range(n + 1)
        ]
    return row[n]
