"""Permutations, 321-avoidance, insertion slots and tail configurations.

Positions and values are 1-based throughout, matching one-line notation.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterator, Sequence

DEFAULT_ENUMERATION_BOUND = 14


class NotAvoidingError(ValueError):
    """Raised when an operation needs a 321-avoiding permutation."""


class IllegalSlotError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class Permutation:
    values: tuple[int, ...]

    def __post_init__(self):
        values = tuple(int(v) for v in self.values)
        if not values:
            raise ValueError("permutation must be nonempty")
        if sorted(values) != list(range(1, len(values) + 1)):
            raise ValueError(f"{values} is not a permutation of 1..{len(values)}")
        object.__setattr__(self, "values", values)

    @property
    def n(self) -> int:
        return len(self.values)

    def __len__(self):
        return len(self.values)

    def __getitem__(self, position: int) -> int:
        """Value at a 1-based position."""
        if not 1 <= position <= len(self.values):
            raise IndexError(position)
        return self.values[position - 1]

    def __str__(self):
        if self.n <= 9:
            return "".join(map(str, self.values))
        return " ".join(map(str, self.values))

    @classmethod
    def parse(cls, text: str) -> "Permutation":
        """Accept "2 4 1 3", "2,4,1,3" or the compact "2413" (n <= 9)."""
        text = text.strip()
        if not text:
            raise ValueError("empty permutation text")
        parts = [p for p in re.split(r"[\s,]+", text) if p]
        if len(parts) == 1 and len(parts[0]) > 1:
            if not parts[0].isdigit():
                raise ValueError(f"cannot parse permutation {text!r}")
            parts = list(parts[0])
        try:
            return cls(tuple(int(p) for p in parts))
        except ValueError as exc:
            raise ValueError(f"cannot parse permutation {text!r}: {exc}") from None

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(1, n + 1)))


def as_permutation(p) -> Permutation:
    if isinstance(p, Permutation):
        return p
    if isinstance(p, str):
        return Permutation.parse(p)
    return Permutation(tuple(p))


def _pattern_of(seq: Sequence[int]) -> tuple[int, ...]:
    order = sorted(range(len(seq)), key=seq.__getitem__)
    ranks = [0] * len(seq)
    for rank, idx in enumerate(order, 1):
        ranks[idx] = rank
    return tuple(ranks)


def contains_pattern(perm, pattern) -> bool:
    """Naive search for an order-isomorphic subsequence."""
    perm, pattern = as_permutation(perm), as_permutation(pattern)
    if pattern.n > perm.n:
        return False
    target = pattern.values
    return any(_pattern_of(sub) == target for sub in combinations(perm.values, pattern.n))


def is_321_avoiding(perm) -> bool:
    """True iff no entry has a larger entry before it and a smaller one after it."""
    values = as_permutation(perm).values
    n = len(values)
    suffix_min = [n + 1] * (n + 1)
    for i in range(n - 1, -1, -1):
        suffix_min[i] = min(values[i], suffix_min[i + 1])
    prefix_max = 0
    for i, v in enumerate(values):
        if prefix_max > v > suffix_min[i + 1]:
            return False
        prefix_max = max(prefix_max, v)
    return True


def rightmost_descent(perm) -> int:
    """Largest position i with p_i > p_{i+1}, or 0 when there is none."""
    values = as_permutation(perm).values
    for i in range(len(values) - 1, 0, -1):
        if values[i - 1] > values[i]:
            return i
    return 0


def _require_avoider(perm: Permutation) -> None:
    if not is_321_avoiding(perm):
        raise NotAvoidingError(f"{perm} contains the pattern 321")


@dataclass(frozen=True)
class InsertionSlot:
    """A legal place for the new maximum.

    ``position`` is where the new entry ends up in the longer permutation.
    """

    label: str
    position: int

    @property
    def is_right(self) -> bool:
        return self.label == "R"

    @property
    def index(self) -> int:
        """j for P_j; one past the last P for R."""
        return int(self.label[1:]) if self.label != "R" else -1


def insertion_slots(perm) -> list[InsertionSlot]:
    """Slots P_1..P_m, R strictly right of the rightmost descent, by position."""
    perm = as_permutation(perm)
    _require_avoider(perm)
    d = rightmost_descent(perm)
    m = perm.n - d
    slots = [InsertionSlot(f"P{j}", d + j) for j in range(1, m + 1)]
    slots.append(InsertionSlot("R", perm.n + 1))
    return slots


def q_statistic(perm) -> int:
    """Number of insertion slots: entries right of the rightmost descent, plus one."""
    perm = as_permutation(perm)
    _require_avoider(perm)
    return perm.n - rightmost_descent(perm) + 1


def resolve_slot(perm: Permutation, slot) -> InsertionSlot:
    """Turn a slot label ("P2", "R") or an InsertionSlot into a checked slot."""
    slots = insertion_slots(perm)
    label = slot.label if isinstance(slot, InsertionSlot) else str(slot).replace("_", "").upper()
    for s in slots:
        if s.label == label:
            if isinstance(slot, InsertionSlot) and slot.position != s.position:
                raise IllegalSlotError(f"slot {slot} does not match {perm}")
            return s
    raise IllegalSlotError(f"{label} is not a legal slot of {perm} (legal: {[s.label for s in slots]})")


def insert_max(perm, slot) -> Permutation:
    """perm with n+1 spliced in at ``slot``."""
    perm = as_permutation(perm)
    s = resolve_slot(perm, slot)
    values = list(perm.values)
    values.insert(s.position - 1, perm.n + 1)
    return Permutation(tuple(values))


def child_slot_count(r: int, label: str) -> int:
    """Slots of the child produced by ``label`` from a vertex with r slots.

    P_j puts the new maximum directly before r-j entries of the old tail,
    which become the new tail; R extends the tail by one.
    """
    if label == "R":
        return r + 1
    j = int(label[1:])
    if not 1 <= j <= r - 1:
        raise IllegalSlotError(f"P{j} is not a slot of a vertex with {r} slots")
    return r - j + 1


def slot_for_child_count(r: int, i: int) -> str:
    """Inverse of :func:`child_slot_count`."""
    if i == r + 1:
        return "R"
    if not 2 <= i <= r:
        raise IllegalSlotError(f"no slot of an r={r} vertex yields {i} slots")
    return f"P{r + 1 - i}"


def enumerate_avoiders(n: int, bound: int = DEFAULT_ENUMERATION_BOUND) -> Iterator[Permutation]:
    """Depth-first growth of AV_n(321) from "1", slots visited P_1..P_m, R."""
    if n < 1:
        raise ValueError("n must be positive")
    if n > bound:
        raise ValueError(f"enumeration of length {n} exceeds the bound {bound}")

    def grow(values: list[int], d: int):
        m = len(values)
        if m == n:
            yield Permutation(tuple(values))
            return
        for pos in range(d + 1, m + 2):
            child = values[:]
            child.insert(pos - 1, m + 1)
            # the new max is a descent top unless appended
            yield from grow(child, pos if pos <= m else d)

    yield from grow([1], 0)


def avoiders_by_level(n_max: int, bound: int = DEFAULT_ENUMERATION_BOUND) -> list[list[Permutation]]:
    """``levels[n]`` is the list of AV_n(321) in enumeration order (levels[0] empty)."""
    return [[]] + [list(enumerate_avoiders(n, bound)) for n in range(1, n_max + 1)]


Entry = tuple[int, int]  # (position, value)


@dataclass(frozen=True)
class TailConfiguration:
    """Boxes psi_1..psi_k of an avoider's tail.

    ``source`` is the permutation the boxes were read from; it does not take
    part in equality.  Use :meth:`normal_form` to compare configurations of
    different permutations.
    """

    k: int
    boxes: tuple[frozenset[Entry], ...]
    source_length: int
    source: Permutation | None = field(default=None, compare=False, repr=False)

    def box(self, i: int) -> frozenset[Entry]:
        return self.boxes[i - 1]

    def entries(self) -> frozenset[Entry]:
        return frozenset().union(*self.boxes)

    @property
    def size(self) -> int:
        return sum(len(b) for b in self.boxes)

    def box_of_value(self) -> dict[int, int]:
        return {v: i for i, b in enumerate(self.boxes, 1) for _, v in b}

    def normal_form(self) -> tuple:
        """Box labels and value ranks of the box entries, read by position."""
        labelled = sorted((p, v, i) for i, b in enumerate(self.boxes, 1) for p, v in b)
        ranks = _pattern_of([v for _, v, _ in labelled])
        return (self.k, tuple(zip((i for _, _, i in labelled), ranks)))


def _boxes(values: Sequence[int], k: int) -> list[set[int]]:
    # Boxes as sets of 0-based indices.
    n = len(values)
    d = rightmost_descent(Permutation(tuple(values)))
    psi1 = set(range(d, n))
    boxes = [psi1]
    if k >= 2:
        low = min(values[i] for i in psi1)
        boxes.append({i for i in range(n) if i not in psi1 and values[i] > low})
    # inversion tops: entries with a smaller entry somewhere to their right
    suffix_min = [n + 1] * (n + 1)
    for i in range(n - 1, -1, -1):
        suffix_min[i] = min(values[i], suffix_min[i + 1])
    tops = {i for i in range(n) if values[i] > suffix_min[i + 1]}
    i = 2
    while len(boxes) < k:
        used = set().union(*boxes[: 2 * i - 2])
        phi = tops - used
        if phi:
            last = max(phi)
            odd = {x for x in range(last + 1, n) if x not in used}
        else:
            odd = set()
        boxes.append(odd)
        if len(boxes) < k:
            if odd:
                low = min(values[x] for x in odd)
                boxes.append({x for x in phi if values[x] > low})
            else:
                boxes.append(set())
        i += 1
    return boxes[:k]


def tail_configuration(perm, k: int) -> TailConfiguration:
    """Boxes psi_1..psi_k read off directly from the permutation.

    psi_1 is everything right of the rightmost descent (all entries when
    there is none), psi_2 the remaining entries above some psi_1 value.  For
    i >= 2, phi_2i collects the unboxed entries that have a smaller entry
    to their right, psi_{2i-1} the unboxed entries right of all of phi_2i,
    and psi_2i the phi_2i entries above some psi_{2i-1} value.  A box whose
    defining phi_2i is empty stays empty.
    """
    perm = as_permutation(perm)
    _require_avoider(perm)
    if k < 1:
        raise ValueError("k must be at least 1")
    vals = perm.values
    boxes = tuple(frozenset((i + 1, vals[i]) for i in b) for b in _boxes(vals, k))
    return TailConfiguration(k, boxes, perm.n, perm)


def tail_insert(config: TailConfiguration, slot, new_value: int | None = None) -> TailConfiguration:
    """Configuration after inserting the new maximum at ``slot``.

    R keeps psi_2..psi_k and appends the new entry to psi_1.  Any P slot
    rebuilds the boxes of the longer permutation, which needs ``config.source``.
    """
    n = config.source_length
    if new_value is None:
        new_value = n + 1
    if new_value != n + 1:
        raise IllegalSlotError(f"the inserted entry must be {n + 1}, got {new_value}")
    m = len(config.boxes[0])
    label = slot.label if isinstance(slot, InsertionSlot) else str(slot).replace("_", "").upper()
    legal = [f"P{j}" for j in range(1, m + 1)] + ["R"]
    if label not in legal:
        raise IllegalSlotError(f"{label} is inconsistent with |psi_1| = {m}")
    if label == "R":
        first = config.boxes[0] | {(n + 1, new_value)}
        source = insert_max(config.source, "R") if config.source is not None else None
        return TailConfiguration(config.k, (first,) + config.boxes[1:], n + 1, source)
    if config.source is None:
        raise ValueError("a P-slot update needs the source permutation of the configuration")
    return tail_configuration(insert_max(config.source, label), config.k)
