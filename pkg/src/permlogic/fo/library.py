"""Built-in sentences and the box formulas of tail configurations."""

from __future__ import annotations

from itertools import count

from .parser import parse
from .syntax import And, Atom, Exists, Forall, Formula, Not, Or, conj, disj, implies

PHI1_TEXT = "!(E x. E y. E z. (x <P y & y <P z & y <V x & z <V y))"
PHI2_TEXT = "E x. E y. (x <P y & y <V x)"
HAS_MAX_TEXT = "E x. A y. (x = y | y <V x)"


class UnknownBuiltinError(KeyError):
    pass


class _Fresh:
    def __init__(self):
        self._c = count(1)

    def __call__(self) -> str:
        return f"v{next(self._c)}"


def _ltr_max(x: str, fresh: _Fresh) -> Formula:
    # everything to the left is smaller
    y = fresh()
    return Forall(y, implies(Atom(y, "<P", x), Atom(y, "<V", x)))


def _inversion_top(x: str, fresh: _Fresh) -> Formula:
    # some entry to the right is smaller
    y = fresh()
    return Exists(y, And(Atom(x, "<P", y), Atom(y, "<V", x)))


def omega(x: str, fresh: _Fresh | None = None) -> Formula:
    """x is the top of the rightmost descent.

    A left-to-right maximum with a smaller entry after it, such that no
    later entry has both properties.
    """
    fresh = fresh or _Fresh()
    w = fresh()
    later = Exists(w, conj(_ltr_max(w, fresh), _inversion_top(w, fresh), Atom(x, "<P", w)))
    return conj(_ltr_max(x, fresh), _inversion_top(x, fresh), Not(later))


class BoxFormulas:
    """psi_1..psi_k as formulas in one free variable, built with fresh names."""

    def __init__(self):
        self.fresh = _Fresh()

    def psi(self, i: int, x: str) -> Formula:
        if i < 1:
            raise ValueError("boxes are numbered from 1")
        f = self.fresh
        if i == 1:
            y = f()
            has_descent = Exists(y, omega(y, f))
            y2 = f()
            right_of = Exists(y2, And(omega(y2, f), Atom(y2, "<P", x)))
            return Or(right_of, Not(has_descent))
        if i == 2:
            y = f()
            return And(Exists(y, And(self.psi(1, y), Atom(y, "<V", x))), Not(self.psi(1, x)))
        if i % 2 == 1:
            half = (i + 1) // 2
            y, y2 = f(), f()
            return conj(
                Exists(y, self.phi(half, y)),
                Forall(y2, implies(self.phi(half, y2), Atom(y2, "<P", x))),
                Not(self._earlier(2 * half - 2, x)),
            )
        half = i // 2
        y = f()
        return And(self.phi(half, x), Exists(y, And(self.psi(i - 1, y), Atom(y, "<V", x))))

    def phi(self, half: int, x: str) -> Formula:
        """phi_{2*half}: unboxed entries with a smaller entry to their right."""
        if half < 2:
            raise ValueError("phi_2i is defined for i >= 2")
        y = self.fresh()
        top = Exists(y, And(Atom(x, "<P", y), Atom(y, "<V", x)))
        return And(top, Not(self._earlier(2 * half - 2, x)))

    def _earlier(self, upto: int, x: str) -> Formula:
        return disj(*(self.psi(j, x) for j in range(1, upto + 1)))


def psi(i: int, var: str = "x") -> Formula:
    return BoxFormulas().psi(i, var)


def box_nonempty(i: int) -> Formula:
    """Closed sentence: box i has an element."""
    return Exists("x", psi(i, "x"))


def builtin(name: str, *params) -> Formula:
    """Look up a built-in formula.

    ``phi1`` (321-avoidance), ``phi2`` (an inversion exists), ``has_max``,
    ``omega`` and ``psi`` (one free variable ``x``; ``psi`` takes the box
    number) and ``box-membership`` (the closed sentence "box i is nonempty").
    """
    key = name.lower().replace("_", "-")
    if key == "phi1":
        return parse(PHI1_TEXT)
    if key == "phi2":
        return parse(PHI2_TEXT)
    if key == "has-max":
        return parse(HAS_MAX_TEXT)
    if key == "omega":
        return omega("x")
    if key == "psi":
        (i,) = params
        return psi(int(i))
    if key in ("box-membership", "box-nonempty"):
        (i,) = params
        return box_nonempty(int(i))
    raise UnknownBuiltinError(name)
