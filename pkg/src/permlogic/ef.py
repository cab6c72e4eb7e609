"""Ehrenfeucht-Fraisse games on finite structures with binary relations."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

from .perm import Permutation, as_permutation


class SignatureMismatchError(ValueError):
    pass


@dataclass(frozen=True)
class RelationalStructure:
    """Domain {1..n} with named binary relations.

    ``linear_order`` marks structures that are a single strict linear order
    on 1..n; the solver then plays on interval lengths instead of elements.
    """

    domain_size: int
    relations: tuple[tuple[str, frozenset[tuple[int, int]]], ...]
    linear_order: bool = field(default=False, compare=False)

    def __post_init__(self):
        for name, pairs in self.relations:
            for a, b in pairs:
                if not (1 <= a <= self.domain_size and 1 <= b <= self.domain_size):
                    raise ValueError(f"pair {(a, b)} of {name} is outside 1..{self.domain_size}")

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.relations)

    def relation(self, name: str) -> frozenset[tuple[int, int]]:
        for n, pairs in self.relations:
            if n == name:
                return pairs
        raise KeyError(name)

    @property
    def matrices(self) -> tuple[tuple[tuple[bool, ...], ...], ...]:
        return _matrices(self)


@lru_cache(maxsize=4096)
def _matrices(s: RelationalStructure):
    n = s.domain_size
    out = []
    for _, pairs in s.relations:
        out.append(tuple(tuple((a, b) in pairs for b in range(1, n + 1)) for a in range(1, n + 1)))
    return tuple(out)


def permutation_structure(perm) -> RelationalStructure:
    """Positions 1..n with <P (position order) and <V (value order)."""
    perm = as_permutation(perm)
    n, v = perm.n, perm.values
    pos = frozenset((i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1))
    val = frozenset((i, j) for i in range(1, n + 1) for j in range(1, n + 1) if v[i - 1] < v[j - 1])
    return RelationalStructure(n, (("<P", pos), ("<V", val)))


def linear_order_structure(n: int) -> RelationalStructure:
    if n < 1:
        raise ValueError("n must be positive")
    less = frozenset((i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1))
    return RelationalStructure(n, (("<", less),), linear_order=True)


def is_strict_linear_order(s: RelationalStructure, name: str = "<") -> bool:
    """Irreflexive, antisymmetric, transitive and total on the domain."""
    r = s.relation(name)
    dom = range(1, s.domain_size + 1)
    if any((a, a) in r for a in dom):
        return False
    for a in dom:
        for b in dom:
            if a != b and ((a, b) in r) == ((b, a) in r):
                return False
            for c in dom:
                if (a, b) in r and (b, c) in r and (a, c) not in r:
                    return False
    return True


def _check_signature(A: RelationalStructure, B: RelationalStructure) -> None:
    if A.names != B.names:
        raise SignatureMismatchError(f"relation names differ: {A.names} vs {B.names}")


def _compatible(MA, MB, a: int, b: int, pairs: Iterable[tuple[int, int]]) -> bool:
    # 0-based a, b; pairs 0-based
    for RA, RB in zip(MA, MB):
        if RA[a][a] != RB[b][b]:
            return False
    for a2, b2 in pairs:
        if (a == a2) != (b == b2):
            return False
        for RA, RB in zip(MA, MB):
            if RA[a][a2] != RB[b][b2] or RA[a2][a] != RB[b2][b]:
                return False
    return True


def partial_isomorphism(A: RelationalStructure, B: RelationalStructure, mapping: Sequence[tuple[int, int]]) -> bool:
    """True iff ``mapping`` (1-based pairs) is a bijection preserving every relation."""
    _check_signature(A, B)
    MA, MB = A.matrices, B.matrices
    chosen: list[tuple[int, int]] = []
    for a, b in mapping:
        if not (1 <= a <= A.domain_size and 1 <= b <= B.domain_size):
            return False
        if not _compatible(MA, MB, a - 1, b - 1, chosen):
            return False
        chosen.append((a - 1, b - 1))
    return True


class EFSolver:
    """Exhaustive minimax for EF_k[A, B] with a memo keyed on the set of chosen pairs."""

    def __init__(self, A: RelationalStructure, B: RelationalStructure):
        _check_signature(A, B)
        self.A, self.B = A, B
        self.MA, self.MB = A.matrices, B.matrices
        self.memo: dict[tuple[frozenset, int], bool] = {}

    def duplicator_wins(self, k: int) -> bool:
        if k < 0:
            raise ValueError("k must be nonnegative")
        if self.A.linear_order and self.B.linear_order:
            return _linear_win(self.A.domain_size, self.B.domain_size, k)
        return self._win(frozenset(), k)

    def _win(self, pairs: frozenset, rounds: int) -> bool:
        if rounds == 0:
            return True
        key = (pairs, rounds)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        nA, nB = self.A.domain_size, self.B.domain_size
        usedA = {a for a, _ in pairs}
        usedB = {b for _, b in pairs}
        result = True
        # Spoiler gains nothing by replaying a chosen element.
        for a in range(nA):
            if a in usedA:
                continue
            if not any(
                _compatible(self.MA, self.MB, a, b, pairs) and self._win(pairs | {(a, b)}, rounds - 1)
                for b in range(nB)
                if b not in usedB
            ):
                result = False
                break
        if result:
            for b in range(nB):
                if b in usedB:
                    continue
                if not any(
                    _compatible(self.MA, self.MB, a, b, pairs) and self._win(pairs | {(a, b)}, rounds - 1)
                    for a in range(nA)
                    if a not in usedA
                ):
                    result = False
                    break
        self.memo[key] = result
        return result


@lru_cache(maxsize=None)
def _linear_win(m: int, n: int, k: int) -> bool:
    """EF_k on linear orders of sizes m and n (either may be 0).

    A chosen point splits both orders into a left and a right part and the
    rest of the game is played independently on the two sides, so a
    position is described by the pair of interval lengths.
    """
    if k == 0:
        return True
    if m == n:
        return True
    if m == 0 or n == 0:
        return False
    for a in range(m):
        if not any(_linear_win(a, b, k - 1) and _linear_win(m - 1 - a, n - 1 - b, k - 1) for b in range(n)):
            return False
    for b in range(n):
        if not any(_linear_win(a, b, k - 1) and _linear_win(m - 1 - a, n - 1 - b, k - 1) for a in range(m)):
            return False
    return True


def ef_win(A, B, k: int) -> bool:
    """Does Duplicator win the k-round game on A and B?

    Permutations are converted with :func:`permutation_structure`.
    """
    A = A if isinstance(A, RelationalStructure) else permutation_structure(A)
    B = B if isinstance(B, RelationalStructure) else permutation_structure(B)
    return EFSolver(A, B).duplicator_wins(k)


@lru_cache(maxsize=200_000)
def perm_equivalent(p: Permutation, q: Permutation, k: int) -> bool:
    """Cached :func:`ef_win` for permutations."""
    if p == q:
        return True
    if q < p:
        p, q = q, p
    return EFSolver(permutation_structure(p), permutation_structure(q)).duplicator_wins(k)


def equiv_classes(structures: Sequence, k: int) -> list[list[int]]:
    """Partition indices of ``structures`` into k-equivalence classes.

    Each structure is compared only against the first member of every
    class found so far.
    """
    classes: list[list[int]] = []
    for i, s in enumerate(structures):
        for cls in classes:
            if ef_win(structures[cls[0]], s, k):
                cls.append(i)
                break
        else:
            classes.append([i])
    return classes


def linear_threshold(k: int, max_size: int | None = None) -> int:
    """Smallest t with L_m equivalent to L_n for all m, n >= t (measured by the solver)."""
    if max_size is None:
        max_size = 2 ** (k + 1) + 2
    best = max_size
    for t in range(max_size, 0, -1):
        if all(_linear_win(m, n, k) for m in range(t, max_size + 1) for n in range(t, max_size + 1)):
            best = t
        else:
            break
    return best
