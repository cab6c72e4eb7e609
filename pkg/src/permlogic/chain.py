"""The ballot symbolic chain on states {2, 3, ...}.

State i (a vertex with i insertion slots) has an edge to each of 2..i+1.
Exact path counts use Python integers; the normalized power iteration uses
float64 numpy vectors truncated at ``v_max``.
"""

from __future__ import annotations

import random
from bisect import bisect_right
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import accumulate

import numpy as np

from .catalan import descendants


@dataclass
class SimplexVector:
    """Nonnegative weights on states 2..v_max (``weights[0]`` is state 2)."""

    weights: np.ndarray
    v_max: int
    lost_mass: float = 0.0

    def __post_init__(self):
        self.weights = np.asarray(self.weights, dtype=float)
        if self.weights.shape != (self.v_max - 1,):
            raise ValueError(f"expected {self.v_max - 1} weights for states 2..{self.v_max}")
        if (self.weights < 0).any():
            raise ValueError("weights must be nonnegative")

    @classmethod
    def point(cls, state: int, v_max: int) -> "SimplexVector":
        w = np.zeros(v_max - 1)
        w[state - 2] = 1.0
        return cls(w, v_max)

    @classmethod
    def geometric_eigenvector(cls, v_max: int) -> "SimplexVector":
        """(v-1)/2^v on 2..v_max, renormalized after truncation."""
        v = np.arange(2, v_max + 1, dtype=float)
        w = (v - 1) / 2.0**v
        return cls(w / w.sum(), v_max)

    def __getitem__(self, state: int) -> float:
        return float(self.weights[state - 2])

    @property
    def states(self) -> np.ndarray:
        return np.arange(2, self.v_max + 1)

    def total(self) -> float:
        return float(self.weights.sum())


def adjacency_apply(w: SimplexVector | np.ndarray, v_max: int | None = None) -> np.ndarray:
    """Row vector times A, over states 2..v_max+1.

    (wA)_j = sum over i >= max(j-1, 2) of w_i.  The last entry (state
    v_max+1) is where truncation loses mass.
    """
    if isinstance(w, SimplexVector):
        weights = w.weights
    else:
        weights = np.asarray(w)
    tail = np.cumsum(weights[::-1])[::-1]
    out = np.empty(len(weights) + 1, dtype=tail.dtype)
    out[0] = tail[0]
    out[1:] = tail
    return out


@dataclass
class IterationResult:
    vector: SimplexVector
    growth_factor: float
    iterations: int
    converged: bool
    growth_history: list[float] = field(repr=False, default_factory=list)


def normalize_iterate(
    w0: SimplexVector, tol: float = 1e-12, max_iters: int = 100_000, record: bool = False
) -> IterationResult:
    """Iterate w -> wA / |wA|_1 until the l1 change drops below ``tol``.

    The growth factor is |wA|_1 before truncation, the running estimate of
    the Perron value.  Mass pushed past ``v_max`` is dropped, the vector is
    renormalized, and the loss is accumulated in ``lost_mass``.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    v_max = w0.v_max
    w = w0.weights / w0.weights.sum()
    lost = w0.lost_mass
    growth = float("nan")
    history = []
    for it in range(1, max_iters + 1):
        u = adjacency_apply(w)
        growth = float(u.sum())
        if record:
            history.append(growth)
        lost += float(u[-1]) / growth
        u = u[:-1]
        u /= u.sum()
        change = float(np.abs(u - w).sum())
        w = u
        if change < tol:
            return IterationResult(SimplexVector(w, v_max, lost), growth, it, True, history)
    return IterationResult(SimplexVector(w, v_max, lost), growth, max_iters, False, history)


def _row_step(row: list[int]) -> list[int]:
    # row[j-2] = count at state j; result has one more state
    tail = list(accumulate(reversed(row)))[::-1]
    return [tail[0]] + tail


def matrix_power_entry(i: int, j: int, n: int) -> int:
    """t_ij(n) = A^n(i, j): number of length-n paths from i to j.

    Each step raises the state by at most one, so sizing the state space to
    n + max(i, j) + 1 makes the count exact.
    """
    if i < 2 or j < 2 or n < 0:
        raise ValueError("need i, j >= 2 and n >= 0")
    size = n + max(i, j) + 1
    row = [0] * (size - 1)
    row[i - 2] = 1
    for _ in range(n):
        row = _row_step(row)[: size - 1]
    return row[j - 2]


def path_counts(i: int, n_max: int) -> list[int]:
    """[t_ii(0), ..., t_ii(n_max)] in one sweep."""
    size = n_max + i + 1
    row = [0] * (size - 1)
    row[i - 2] = 1
    out = [1]
    for _ in range(n_max):
        row = _row_step(row)[: size - 1]
        out.append(row[i - 2])
    return out


def first_return_counts(i: int, n_max: int, j: int | None = None) -> list[int]:
    """[f_ij(0), ..., f_ij(n_max)]: paths i -> j that reach j only at the end.

    First-passage recursion f_ij(n+1) = sum over k != j of A(i,k) f_kj(n),
    run for every start state at once.
    """
    j = i if j is None else j
    size = i + n_max + 1
    # g[k-2] = f_kj(n) for start states k = 2..size
    g = [1 if j <= k + 1 else 0 for k in range(2, size + 1)]  # f_kj(1) = A(k, j)
    out = [0, g[i - 2]]
    for _ in range(n_max - 1):
        masked = [0 if k == j else g[k - 2] for k in range(2, size + 1)]
        prefix = list(accumulate(masked))
        # f_kj(n+1) = sum_{l=2}^{k+1}, l != j, of f_lj(n)
        g = [prefix[min(k + 1, size) - 2] for k in range(2, size + 1)]
        out.append(g[i - 2])
    return out[: n_max + 1]


def first_return(i: int, n: int) -> int:
    if i < 2 or n < 0:
        raise ValueError("need i >= 2 and n >= 0")
    return first_return_counts(i, max(n, 1))[n]


def path_series_partial(i: int, z, N: int, exact: bool | None = None):
    """Partial sum of T_ii(z) = sum_n t_ii(n) z^n up to n = N.

    Exact (a Fraction) by default for N <= 2000.  Larger N switch to a
    float64 sweep that carries z^n inside the state vector.
    """
    if N < 0:
        raise ValueError("N must be nonnegative")
    if exact is None:
        exact = N <= 2000
    if exact:
        z = Fraction(z)
        total = Fraction(0)
        power = Fraction(1)
        for t in path_counts(i, N):
            total += t * power
            power *= z
        return total
    z = float(z)
    size = N + i + 1
    row = np.zeros(size - 1)
    row[i - 2] = 1.0
    total = 1.0
    for _ in range(N):
        tail = np.cumsum(row[::-1])[::-1]
        row = np.concatenate(([tail[0]], tail))[: size - 1] * z
        total += row[i - 2]
    return total


def right_eigenvector_terms(count: int) -> list[int]:
    """r_n = 4 (r_{n-1} - r_{n-2}) from r_1 = 1, r_2 = 3."""
    r = [1, 3]
    while len(r) < count:
        r.append(4 * (r[-1] - r[-2]))
    return r[:count]


def homogeneous_prob(r: int, i: int) -> Fraction:
    """p(r, i) = i / (r 2^(r-i+2)) for i in 2..r+1."""
    if r < 2:
        raise ValueError("r must be at least 2")
    if not 2 <= i <= r + 1:
        return Fraction(0)
    return Fraction(i, r * 2 ** (r - i + 2))


def homogeneous_row(r: int) -> dict[int, Fraction]:
    return {i: homogeneous_prob(r, i) for i in range(2, r + 2)}


def kernel_prob(i: int, r: int, N: int) -> Fraction:
    """p^N(i | r) = f(N, i) / f(N+1, r)."""
    if r < 2 or N < 1:
        raise ValueError("need r >= 2 and N >= 1")
    if not 2 <= i <= r + 1:
        return Fraction(0)
    return Fraction(descendants(N, i), descendants(N + 1, r))


def recprob_closed_form(i: int, r: int, N: int) -> Fraction | None:
    """Closed forms for i = r+1 and i = r; None for the other branches."""
    if i == r + 1:
        return Fraction(r + 1, r) * (Fraction(1, 2) - Fraction(r - 1, 2 * (2 * N + r - 1)))
    if i == r:
        return (
            Fraction(1, 4)
            * (1 - Fraction(r - 1, 2 * (2 * N + r - 1)))
            * (1 + Fraction(r + 2, 2 * (2 * N + r - 2)))
        )
    return None


@lru_cache(maxsize=100_000)
def _kernel_cdf(r: int, N: int) -> tuple[tuple[int, ...], int]:
    weights = [descendants(N, i) for i in range(2, r + 2)]
    cum = tuple(accumulate(weights))
    total = descendants(N + 1, r)
    assert cum[-1] == total
    return cum, total


@lru_cache(maxsize=4096)
def _homogeneous_cdf(r: int) -> tuple[tuple[int, ...], int]:
    # p(r, i) = i 2^(i-2) / (r 2^r)
    cum = tuple(accumulate(i * 2 ** (i - 2) for i in range(2, r + 2)))
    total = r * 2**r
    assert cum[-1] == total
    return cum, total


def _draw(cdf: tuple[tuple[int, ...], int], rng: random.Random) -> int:
    cum, total = cdf
    return 2 + bisect_right(cum, rng.randrange(total))


def inhomogeneous_step(r: int, N: int, rng: random.Random) -> int:
    """Child branch count drawn exactly from p^N(. | r)."""
    if r < 2 or N < 1:
        raise ValueError("need r >= 2 and N >= 1")
    return _draw(_kernel_cdf(r, N), rng)


def homogeneous_step(r: int, rng: random.Random) -> int:
    """Child branch count drawn exactly from p(r, .)."""
    if r < 2:
        raise ValueError("r must be at least 2")
    return _draw(_homogeneous_cdf(r), rng)


@dataclass
class ReturnTimeStats:
    start: int
    trials: int
    horizons: list[int]
    return_fraction: list[float]
    mean_return_time: list[float | None]


def return_time_stats(r0: int, horizons, trials: int, rng: random.Random) -> ReturnTimeStats:
    """Fraction of homogeneous-chain runs from r0 that are back at r0 by each horizon.

    ``mean_return_time[h]`` averages the first return time over the runs
    that returned by horizon h.
    """
    if r0 < 2:
        raise ValueError("r0 must be at least 2")
    horizons = sorted(int(h) for h in horizons)
    limit = horizons[-1]
    times = []
    for _ in range(trials):
        state = r0
        hit = None
        for t in range(1, limit + 1):
            state = homogeneous_step(state, rng)
            if state == r0:
                hit = t
                break
        times.append(hit)
    fractions, means = [], []
    for h in horizons:
        back = [t for t in times if t is not None and t <= h]
        fractions.append(len(back) / trials)
        means.append(sum(back) / len(back) if back else None)
    return ReturnTimeStats(r0, trials, horizons, fractions, means)
