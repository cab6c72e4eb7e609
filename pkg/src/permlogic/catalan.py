"""Exact Catalan and ballot-number combinatorics.

Everything here works on Python integers and :class:`fractions.Fraction`,
so there is no overflow and no rounding.  Tables are memoized; the caches
only ever hold immutable ints, so concurrent readers are safe.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Sequence

from .series import DEFAULT_ORDER, catalan_branch


def _exact_div(num: int, den: int) -> int:
    q, rem = divmod(num, den)
    assert rem == 0, f"{num} is not divisible by {den}"
    return q


@lru_cache(maxsize=None)
def catalan(n: int) -> int:
    """C_n = binom(2n, n) / (n + 1)."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    return _exact_div(comb(2 * n, n), n + 1)


@lru_cache(maxsize=None)
def ballot(n: int, r: int) -> int:
    """Number of length-n 321-avoiders with r insertion slots.

    q_{n,r} = (r-1)/n * binom(2n-r, n-1) for 2 <= r <= n+1, and 0 elsewhere
    so that sums over loose ranges stay safe.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if not 2 <= r <= n + 1:
        return 0
    return _exact_div((r - 1) * comb(2 * n - r, n - 1), n)


def ballot_row(n: int) -> list[int]:
    """Row ``[q_{n,2}, ..., q_{n,n+1}]``."""
    return [ballot(n, r) for r in range(2, n + 2)]


@lru_cache(maxsize=None)
def descendants(N: int, r: int) -> int:
    """f(N, r): leaves N-1 levels below a vertex with r children.

    f(1, r) is the vertex itself.
    """
    if N < 1 or r < 2:
        raise ValueError("need N >= 1 and r >= 2")
    if N == 1:
        return 1
    return _exact_div(r * comb(2 * N + r - 3, N - 2), N - 1)


def delta_coefficients(s: int) -> list[int]:
    """Coefficients (-1)^i binom(s-i-2, i), i = 0..floor((s-2)/2)."""
    if s < 2:
        raise ValueError("s must be at least 2")
    return [(-1) ** i * comb(s - i - 2, i) for i in range((s - 2) // 2 + 1)]


def delta(s: int, window: Sequence[int]) -> int:
    """Alternating sum Delta_s applied at the head of a descending window.

    ``window`` is ``(a_n, a_{n-1}, ...)``.
    """
    coeffs = delta_coefficients(s)
    if len(window) < len(coeffs):
        raise ValueError(
            f"insufficient history: Delta_{s} needs {len(coeffs)} terms, got {len(window)}"
        )
    return sum(c * a for c, a in zip(coeffs, window))


def delta_window(s: int, window: Sequence[int]) -> list[int]:
    """Apply Delta_s at every index of ``window`` that has enough history.

    Returns a shorter descending window, so operators can be composed:
    ``delta(t, delta_window(s, w))`` is Delta_t(Delta_s(a_n)).
    """
    need = (s - 2) // 2 + 1
    if len(window) < need:
        raise ValueError(f"insufficient history: Delta_{s} needs {need} terms, got {len(window)}")
    return [delta(s, window[j:]) for j in range(len(window) - need + 1)]


def catalan_window(n: int, length: int) -> list[int]:
    """``(C_n, C_{n-1}, ..., C_{n-length+1})``."""
    if length > n + 1:
        raise ValueError("window reaches below C_0")
    return [catalan(n - i) for i in range(length)]


def series_ballot_coeff(n: int, r: int, order: int = DEFAULT_ORDER) -> Fraction:
    """[z^n] B(z)^r with B(z) = (1 - sqrt(1 - 4z)) / 2, by series arithmetic."""
    if n < 1 or r < 1:
        raise ValueError("need n >= 1 and r >= 1")
    return _branch_power(max(order, n), r)[n]


@lru_cache(maxsize=256)
def _branch_power(order: int, r: int):
    if r == 1:
        return catalan_branch(order)
    return _branch_power(order, r - 1) * catalan_branch(order)


def expected_positions(m: int, s: int) -> Fraction:
    """Expected slot count after m insertions starting from a vertex with s slots."""
    if m < 1 or s < 2:
        raise ValueError("need m >= 1 and s >= 2")
    return Fraction((2 * m + s + 2) * (2 * m + s + 1), (m + s + 1) * (m + 2))


@lru_cache(maxsize=None)
def _generalized_level(n: int, s: int) -> tuple[tuple[int, int], ...]:
    # Multiplicity of each branch count at depth n below a root with s branches.
    if n == 0:
        return ((s, 1),)
    counts: dict[int, int] = {}
    for r, mult in _generalized_level(n - 1, s):
        for child in range(2, r + 2):
            counts[child] = counts.get(child, 0) + mult
    return tuple(sorted(counts.items()))


def generalized_ballot_oracle(n: int, k: int, s: int) -> int:
    """Vertices at depth n with k branches in the tree grown from an s-branch root.

    Enumerates the branch-count tree level by level (depth 0 is the root
    itself).  A vertex with r branches has one child of each branch count
    2..r+1.
    """
    if n < 0 or s < 2:
        raise ValueError("need n >= 0 and s >= 2")
    if n + s > 20:
        raise ValueError("generalized ballot oracle is limited to n + s <= 20")
    return dict(_generalized_level(n, s)).get(k, 0)


@dataclass
class OffsetReport:
    """Which index shifts make ``gen(n,k,s) == Delta_k(q_{n+s+d, s})`` hold."""

    tested: int
    agreeing_offsets: list[int]
    mismatches: dict[int, int] = field(default_factory=dict)


def delta_on_ballot_column(k: int, m: int, s: int) -> int | None:
    """Delta_k applied to the column ``q_{m,s}, q_{m-1,s}, ...``; None if history runs out."""
    need = (k - 2) // 2 + 1
    if m - need + 1 < 1:
        return None
    return delta(k, [ballot(m - i, s) for i in range(need)])


def coefficient_offset_report(
    n_max: int = 8, s_values: Sequence[int] = (2, 3, 4, 5), offsets: Sequence[int] = range(-3, 4)
) -> OffsetReport:
    """Compare tree enumeration against the Delta_k ballot-column expression.

    For every candidate offset d the report counts cases where the two
    disagree; offsets with zero mismatches agree on the whole tested range.
    """
    mismatches = {d: 0 for d in offsets}
    tested = 0
    for s in s_values:
        for n in range(1, n_max + 1):
            if n + s > 20:
                continue
            for kk in range(2, n + s + 2):
                tested += 1
                truth = generalized_ballot_oracle(n, kk, s)
                for d in offsets:
                    value = delta_on_ballot_column(kk, n + s + d, s)
                    if value is None or value != truth:
                        mismatches[d] += 1
    agreeing = [d for d in offsets if mismatches[d] == 0]
    return OffsetReport(tested, agreeing, mismatches)
