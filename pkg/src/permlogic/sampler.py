"""Exactly uniform 321-avoiders by walking the Catalan tree."""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from .catalan import ballot, catalan
from .chain import inhomogeneous_step, kernel_prob
from .perm import (
    IllegalSlotError,
    Permutation,
    child_slot_count,
    insert_max,
    q_statistic,
    slot_for_child_count,
)


@dataclass(frozen=True)
class SampleRun:
    """One walk from "1" to length n; ``path`` holds (slots before, chosen slot)."""

    n: int
    seed: int | None
    permutation: Permutation
    path: tuple[tuple[int, str], ...]


def sample_avoider(n: int, rng: random.Random, seed: int | None = None) -> SampleRun:
    """Uniform element of AV_n(321).

    At length m the current vertex has r slots and N = n - m levels remain;
    the child's slot count i is drawn from f(N, i) / f(N+1, r) and mapped
    to the unique slot that produces it.
    """
    if n < 1:
        raise ValueError("n must be positive")
    values = [1]
    d = 0
    r = 2
    path = []
    for m in range(1, n):
        i = inhomogeneous_step(r, n - m, rng)
        label = slot_for_child_count(r, i)
        pos = m + 1 if label == "R" else d + int(label[1:])
        values.insert(pos - 1, m + 1)
        if label != "R":
            d = pos
        path.append((r, label))
        r = i
    return SampleRun(n, seed, Permutation(tuple(values)), tuple(path))


def replay(path) -> Permutation:
    perm = Permutation((1,))
    for r, label in path:
        if q_statistic(perm) != r:
            raise IllegalSlotError(f"path claims {r} slots at {perm}")
        perm = insert_max(perm, label)
    return perm


def path_probability(run: SampleRun) -> Fraction:
    """Exact probability the sampler assigns to ``run.path``."""
    if replay(run.path) != run.permutation or run.permutation.n != run.n:
        raise ValueError("run is inconsistent with its path")
    prob = Fraction(1)
    for m, (r, label) in enumerate(run.path, 1):
        i = child_slot_count(r, label)
        prob *= kernel_prob(i, r, run.n - m)
    return prob


def all_runs(n: int) -> Iterator[tuple[SampleRun, Fraction]]:
    """Every path to length n with its exact probability."""

    def walk(perm: Permutation, r: int, path: tuple, prob: Fraction):
        m = perm.n
        if m == n:
            yield SampleRun(n, None, perm, path), prob
            return
        for i in range(2, r + 2):
            label = slot_for_child_count(r, i)
            yield from walk(insert_max(perm, label), i, path + ((r, label),), prob * kernel_prob(i, r, n - m))

    yield from walk(Permutation((1,)), 2, (), Fraction(1))


def q_distribution(n: int, mode: str = "exact", samples: int = 0, rng: random.Random | None = None) -> dict[int, Fraction | float]:
    """Distribution of the slot count Q_n of a uniform avoider.

    ``exact`` uses ballot ratios (n <= 500); ``mc`` counts sampler output.
    """
    if mode == "exact":
        if n > 500:
            raise ValueError("exact mode is limited to n <= 500")
        c = catalan(n)
        return {r: Fraction(ballot(n, r), c) for r in range(2, n + 2)}
    if mode == "mc":
        if rng is None or samples < 1:
            raise ValueError("mc mode needs an rng and a positive sample count")
        counts = Counter(q_statistic(sample_avoider(n, rng).permutation) for _ in range(samples))
        return {r: counts[r] / samples for r in range(2, n + 2)}
    raise ValueError(f"unknown mode {mode!r}")
