"""Seeded random sentences for cross-checking the game solver."""

from __future__ import annotations

import random

from .syntax import FALSE, RELATIONS, TRUE, And, Atom, Exists, Forall, Formula, Not, Or, node_count

VARS = ("x", "y", "z", "u", "w", "s", "t", "r")


def random_sentence(qr_bound: int, size_bound: int, seed: int) -> Formula:
    """A closed formula with quantifier rank <= qr_bound and <= size_bound nodes.

    With ``qr_bound == 0`` there are no variables to talk about, so the
    result is a boolean combination of ``true`` and ``false``.
    """
    if qr_bound < 0 or size_bound < 1:
        raise ValueError("need qr_bound >= 0 and size_bound >= 1")
    rng = random.Random(seed)

    def gen(scope: tuple[str, ...], qr: int, budget: int) -> Formula:
        leaf_only = budget < 2
        choices = ["leaf"]
        if not leaf_only:
            choices.append("not")
            if budget >= 3:
                choices += ["and", "or"]
            if qr > 0 and len(scope) < len(VARS):
                choices += ["exists", "forall"] * (4 if not scope else 2)
        kind = rng.choice(choices)
        if kind == "leaf":
            if not scope:
                return TRUE if rng.random() < 0.5 else FALSE
            left = rng.choice(scope)
            others = [v for v in scope if v != left]
            right = rng.choice(others) if others and rng.random() < 0.85 else left
            return Atom(left, rng.choice(RELATIONS), right)
        if kind == "not":
            return Not(gen(scope, qr, budget - 1))
        if kind in ("and", "or"):
            left_budget = rng.randint(1, budget - 2)
            left = gen(scope, qr, left_budget)
            right = gen(scope, qr, budget - 1 - node_count(left))
            return (And if kind == "and" else Or)(left, right)
        var = VARS[len(scope)]
        body = gen(scope + (var,), qr - 1, budget - 1)
        return (Exists if kind == "exists" else Forall)(var, body)

    return gen((), qr_bound, size_bound)


def sentence_battery(qr_bound: int, count: int, seed: int, size_bound: int = 14) -> list[Formula]:
    """``count`` distinct random sentences of rank at most ``qr_bound``."""
    out: list[Formula] = []
    seen = set()
    s = seed
    attempts = 0
    while len(out) < count and attempts < 50 * count:
        f = random_sentence(qr_bound, size_bound, s)
        s += 1
        attempts += 1
        if f not in seen:
            seen.add(f)
            out.append(f)
    return out
