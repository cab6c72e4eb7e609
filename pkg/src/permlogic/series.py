"""Truncated formal power series with exact rational coefficients."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

DEFAULT_ORDER = 64


@dataclass(frozen=True)
class TruncatedSeries:
    """Power series known exactly up to and including ``z**order``."""

    coefficients: tuple[Fraction, ...]
    order: int

    def __post_init__(self):
        if self.order < 0:
            raise ValueError("order must be nonnegative")
        coeffs = tuple(Fraction(c) for c in self.coefficients[: self.order + 1])
        coeffs += (Fraction(0),) * (self.order + 1 - len(coeffs))
        object.__setattr__(self, "coefficients", coeffs)

    @classmethod
    def from_coefficients(cls, coeffs: Iterable, order: int = DEFAULT_ORDER) -> "TruncatedSeries":
        return cls(tuple(coeffs), order)

    @classmethod
    def constant(cls, c, order: int = DEFAULT_ORDER) -> "TruncatedSeries":
        return cls((Fraction(c),), order)

    @classmethod
    def z(cls, order: int = DEFAULT_ORDER) -> "TruncatedSeries":
        return cls((Fraction(0), Fraction(1)), order)

    def __getitem__(self, n: int) -> Fraction:
        if n < 0:
            return Fraction(0)
        if n > self.order:
            raise IndexError(f"coefficient {n} beyond truncation order {self.order}")
        return self.coefficients[n]

    def _coerce(self, other) -> "TruncatedSeries":
        if isinstance(other, TruncatedSeries):
            return other
        return TruncatedSeries.constant(other, self.order)

    def __add__(self, other):
        other = self._coerce(other)
        order = min(self.order, other.order)
        return TruncatedSeries(
            tuple(self.coefficients[i] + other.coefficients[i] for i in range(order + 1)), order
        )

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries(tuple(-c for c in self.coefficients), self.order)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, TruncatedSeries):
            c = Fraction(other)
            return TruncatedSeries(tuple(c * a for a in self.coefficients), self.order)
        order = min(self.order, other.order)
        a, b = self.coefficients, other.coefficients
        out = [Fraction(0)] * (order + 1)
        for i in range(order + 1):
            if a[i]:
                ai = a[i]
                for j in range(order + 1 - i):
                    if b[j]:
                        out[i + j] += ai * b[j]
        return TruncatedSeries(tuple(out), order)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative powers are not supported")
        result = TruncatedSeries.constant(1, self.order)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        order = min(self.order, other.order)
        return self.coefficients[: order + 1] == other.coefficients[: order + 1]

    def __hash__(self):
        return hash((self.coefficients, self.order))


def sqrt_one_minus(c, order: int = DEFAULT_ORDER) -> TruncatedSeries:
    """sqrt(1 - c*z) via the binomial series, exact to ``order``."""
    c = Fraction(c)
    coeffs = [Fraction(1)]
    # binom(1/2, n+1) = binom(1/2, n) * (1/2 - n) / (n + 1)
    b = Fraction(1)
    for n in range(order):
        b = b * (Fraction(1, 2) - n) / (n + 1)
        coeffs.append(b * (-c) ** (n + 1))
    return TruncatedSeries(tuple(coeffs), order)


def catalan_branch(order: int = DEFAULT_ORDER) -> TruncatedSeries:
    """B(z) = (1 - sqrt(1 - 4z)) / 2, so that [z^n] B = C_{n-1}."""
    return (1 - sqrt_one_minus(4, order)) * Fraction(1, 2)
