"""Exact and Monte Carlo tools for first-order properties of random 321-avoiding permutations."""

from .catalan import ballot, ballot_row, descendants
from .ef import ef_win, perm_equivalent
from .perm import Permutation, enumerate_avoiders, insert_max, insertion_slots, tail_configuration
from .sampler import sample_avoider

__version__ = "0.1.0"

__all__ = [
    "Permutation",
    "ballot",
    "ballot_row",
    "descendants",
    "ef_win",
    "enumerate_avoiders",
    "insert_max",
    "insertion_slots",
    "perm_equivalent",
    "sample_avoider",
    "tail_configuration",
]
