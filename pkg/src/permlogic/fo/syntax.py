"""Formula trees over the signature {<P, <V, =}.

Implication and biconditional are not node types: the parser rewrites
them into negation, conjunction and disjunction.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

RELATIONS = ("<P", "<V", "=")


class Formula:
    __slots__ = ()

    def __str__(self):
        return to_text(self)


@dataclass(frozen=True)
class Const(Formula):
    value: bool


@dataclass(frozen=True)
class Atom(Formula):
    left: str
    rel: str
    right: str

    def __post_init__(self):
        if self.rel not in RELATIONS:
            raise ValueError(f"unknown relation {self.rel!r}")


@dataclass(frozen=True)
class Not(Formula):
    body: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Forall(Formula):
    var: str
    body: Formula


@dataclass(frozen=True)
class Exists(Formula):
    var: str
    body: Formula


TRUE = Const(True)
FALSE = Const(False)


def implies(a: Formula, b: Formula) -> Formula:
    return Or(Not(a), b)


def iff(a: Formula, b: Formula) -> Formula:
    return And(Or(Not(a), b), Or(Not(b), a))


def conj(*parts: Formula) -> Formula:
    return reduce(And, parts) if parts else TRUE


def disj(*parts: Formula) -> Formula:
    return reduce(Or, parts) if parts else FALSE


def quantifier_rank(f: Formula) -> int:
    if isinstance(f, (Atom, Const)):
        return 0
    if isinstance(f, Not):
        return quantifier_rank(f.body)
    if isinstance(f, (And, Or)):
        return max(quantifier_rank(f.left), quantifier_rank(f.right))
    if isinstance(f, (Forall, Exists)):
        return quantifier_rank(f.body) + 1
    raise TypeError(f"not a formula: {f!r}")


def free_variables(f: Formula) -> frozenset[str]:
    if isinstance(f, Atom):
        return frozenset((f.left, f.right))
    if isinstance(f, Const):
        return frozenset()
    if isinstance(f, Not):
        return free_variables(f.body)
    if isinstance(f, (And, Or)):
        return free_variables(f.left) | free_variables(f.right)
    if isinstance(f, (Forall, Exists)):
        return free_variables(f.body) - {f.var}
    raise TypeError(f"not a formula: {f!r}")


def is_sentence(f: Formula) -> bool:
    return not free_variables(f)


def node_count(f: Formula) -> int:
    if isinstance(f, (Atom, Const)):
        return 1
    if isinstance(f, Not):
        return 1 + node_count(f.body)
    if isinstance(f, (And, Or)):
        return 1 + node_count(f.left) + node_count(f.right)
    return 1 + node_count(f.body)


def substitute(f: Formula, mapping: dict[str, str]) -> Formula:
    """Rename free variables; bound occurrences are left alone."""
    if isinstance(f, Atom):
        return Atom(mapping.get(f.left, f.left), f.rel, mapping.get(f.right, f.right))
    if isinstance(f, Const):
        return f
    if isinstance(f, Not):
        return Not(substitute(f.body, mapping))
    if isinstance(f, (And, Or)):
        return type(f)(substitute(f.left, mapping), substitute(f.right, mapping))
    inner = {k: v for k, v in mapping.items() if k != f.var}
    if f.var in inner.values():
        raise ValueError(f"renaming would capture bound variable {f.var}")
    return type(f)(f.var, substitute(f.body, inner))


def to_text(f: Formula, top: bool = True) -> str:
    """Canonical text: binary nodes fully parenthesized, nested quantifiers too."""
    if isinstance(f, Const):
        return "true" if f.value else "false"
    if isinstance(f, Atom):
        return f"{f.left} {f.rel} {f.right}"
    if isinstance(f, Not):
        inner = to_text(f.body, top=False)
        if isinstance(f.body, Atom):
            inner = f"({inner})"
        return "!" + inner
    if isinstance(f, And):
        return f"({to_text(f.left, False)} & {to_text(f.right, False)})"
    if isinstance(f, Or):
        return f"({to_text(f.left, False)} | {to_text(f.right, False)})"
    q = "A" if isinstance(f, Forall) else "E"
    text = f"{q} {f.var}. {to_text(f.body, True)}"
    return text if top else f"({text})"
