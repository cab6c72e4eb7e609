"""Tarskian evaluation on permutations viewed as two linear orders.

The domain is the set of positions.  ``x <P y`` compares positions and
``x <V y`` compares the values at those positions.  Formulas are compiled
once into closures over a slot array; cost is O(n^qr) per evaluation.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Callable, Mapping

from ..perm import Permutation, as_permutation
from .syntax import And, Atom, Const, Exists, Forall, Formula, Not, Or, free_variables

Compiled = Callable[[tuple[int, ...], list], bool]


def _compile(f: Formula, scope: dict[str, int], depth: int) -> Compiled:
    if isinstance(f, Const):
        value = f.value
        return lambda vals, env: value
    if isinstance(f, Atom):
        a, b = scope[f.left], scope[f.right]
        if f.rel == "=":
            return lambda vals, env: env[a] == env[b]
        if f.rel == "<P":
            return lambda vals, env: env[a] < env[b]
        return lambda vals, env: vals[env[a]] < vals[env[b]]
    if isinstance(f, Not):
        body = _compile(f.body, scope, depth)
        return lambda vals, env: not body(vals, env)
    if isinstance(f, And):
        left, right = _compile(f.left, scope, depth), _compile(f.right, scope, depth)
        return lambda vals, env: left(vals, env) and right(vals, env)
    if isinstance(f, Or):
        left, right = _compile(f.left, scope, depth), _compile(f.right, scope, depth)
        return lambda vals, env: left(vals, env) or right(vals, env)
    slot = depth
    body = _compile(f.body, {**scope, f.var: slot}, depth + 1)
    if isinstance(f, Exists):

        def exists(vals, env):
            for x in range(len(vals)):
                env[slot] = x
                if body(vals, env):
                    return True
            return False

        return exists

    def forall(vals, env):
        for x in range(len(vals)):
            env[slot] = x
            if not body(vals, env):
                return False
        return True

    return forall


def _depth(f: Formula) -> int:
    if isinstance(f, (Atom, Const)):
        return 0
    if isinstance(f, Not):
        return _depth(f.body)
    if isinstance(f, (And, Or)):
        return max(_depth(f.left), _depth(f.right))
    return 1 + _depth(f.body)


class CompiledFormula:
    """A formula compiled for repeated evaluation.

    ``free`` fixes the order in which free variables are supplied.
    """

    def __init__(self, formula: Formula, free: tuple[str, ...] | None = None):
        fv = free_variables(formula)
        if free is None:
            free = tuple(sorted(fv))
        missing = fv - set(free)
        if missing:
            raise ValueError(f"valuation does not bind {', '.join(sorted(missing))}")
        self.formula = formula
        self.free = free
        scope = {v: i for i, v in enumerate(free)}
        self._fn = _compile(formula, scope, len(free))
        self._size = len(free) + _depth(formula)

    def __call__(self, perm, *point: int) -> bool:
        """Evaluate with free variables bound to 1-based positions."""
        vals = perm.values if isinstance(perm, Permutation) else tuple(perm)
        if len(point) != len(self.free):
            raise ValueError(f"expected {len(self.free)} free-variable positions")
        env = [p - 1 for p in point] + [0] * (self._size - len(point))
        return self._fn(vals, env)

    def satisfying_positions(self, perm) -> set[int]:
        if len(self.free) != 1:
            raise ValueError("pointwise evaluation needs exactly one free variable")
        n = len(perm.values if isinstance(perm, Permutation) else perm)
        return {p for p in range(1, n + 1) if self(perm, p)}


@lru_cache(maxsize=256)
def compiled(formula: Formula) -> CompiledFormula:
    return CompiledFormula(formula)


def evaluate(sentence: Formula, perm, valuation: Mapping[str, int] | None = None) -> bool:
    """Truth of ``sentence`` in ``perm``; ``valuation`` maps free variables to positions."""
    perm = as_permutation(perm)
    if valuation:
        names = tuple(sorted(valuation))
        return CompiledFormula(sentence, names)(perm, *(valuation[v] for v in names))
    return compiled(sentence)(perm)


def satisfying_positions(formula: Formula, perm) -> set[int]:
    """Positions x at which a one-free-variable formula holds."""
    return compiled(formula).satisfying_positions(as_permutation(perm))
