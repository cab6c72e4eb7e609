"""First-order logic over permutations as two linear orders."""

from .generate import random_sentence, sentence_battery
from .library import builtin, box_nonempty, omega, psi
from .parser import ParseError, UnboundVariableError, load_sentence, parse, parse_formula
from .semantics import CompiledFormula, evaluate, satisfying_positions
from .syntax import (
    And,
    Atom,
    Const,
    Exists,
    Forall,
    Formula,
    Not,
    Or,
    free_variables,
    is_sentence,
    node_count,
    quantifier_rank,
    to_text,
)

__all__ = [
    "And",
    "Atom",
    "CompiledFormula",
    "Const",
    "Exists",
    "Forall",
    "Formula",
    "Not",
    "Or",
    "ParseError",
    "UnboundVariableError",
    "box_nonempty",
    "builtin",
    "evaluate",
    "free_variables",
    "is_sentence",
    "load_sentence",
    "node_count",
    "omega",
    "parse",
    "parse_formula",
    "psi",
    "quantifier_rank",
    "random_sentence",
    "satisfying_positions",
    "sentence_battery",
    "to_text",
]
