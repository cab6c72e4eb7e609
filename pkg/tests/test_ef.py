from itertools import combinations, permutations

import pytest

from permlogic.ef import (
    EFSolver,
    RelationalStructure,
    SignatureMismatchError,
    ef_win,
    equiv_classes,
    is_strict_linear_order,
    linear_order_structure,
    linear_threshold,
    partial_isomorphism,
    perm_equivalent,
    permutation_structure,
)
from permlogic.fo import builtin, evaluate, sentence_battery
from permlogic.perm import Permutation, enumerate_avoiders

P = Permutation.parse


def naive_win(p, q, k, chosen=()):
    """Plain game tree on permutations, with replays allowed and no memo."""

    def ok(pairs):
        for (a1, b1) in pairs:
            for (a2, b2) in pairs:
                if (a1 == a2) != (b1 == b2):
                    return False
                if (a1 < a2) != (b1 < b2):
                    return False
                if (p[a1] < p[a2]) != (q[b1] < q[b2]):
                    return False
        return True

    if not ok(chosen):
        return False
    if k == 0:
        return True
    for a in range(1, p.n + 1):
        if not any(naive_win(p, q, k - 1, chosen + ((a, b),)) for b in range(1, q.n + 1)):
            return False
    for b in range(1, q.n + 1):
        if not any(naive_win(p, q, k - 1, chosen + ((a, b),)) for a in range(1, p.n + 1)):
            return False
    return True


def small_perms(n_max):
    return [Permutation(v) for n in range(1, n_max + 1) for v in permutations(range(1, n + 1))]


def test_structure_of_21():
    s = permutation_structure(P("21"))
    assert s.relation("<P") == {(1, 2)}
    assert s.relation("<V") == {(2, 1)}


def test_identity_orders_coincide():
    s = permutation_structure(Permutation.identity(5))
    assert s.relation("<P") == s.relation("<V")
    assert is_strict_linear_order(s, "<P") and is_strict_linear_order(s, "<V")


def test_structure_rejects_bad_pairs():
    with pytest.raises(ValueError):
        RelationalStructure(2, (("<", frozenset({(1, 3)})),))


def test_linear_order():
    s = linear_order_structure(3)
    assert len(s.relation("<")) == 3
    assert is_strict_linear_order(s)
    assert not is_strict_linear_order(RelationalStructure(2, (("<", frozenset({(1, 2), (2, 1)})),)))


def test_partial_isomorphism_examples():
    a, b = permutation_structure(P("21")), permutation_structure(P("12"))
    assert partial_isomorphism(a, b, [])
    lo = linear_order_structure(2)
    assert partial_isomorphism(lo, lo, [(1, 1), (2, 2)])
    assert not partial_isomorphism(a, b, [(1, 1), (2, 2)])
    assert not partial_isomorphism(a, a, [(1, 1), (2, 1)])


def test_signature_mismatch():
    with pytest.raises(SignatureMismatchError):
        ef_win(linear_order_structure(2), permutation_structure(P("12")), 1)


def test_ef_examples():
    assert ef_win(linear_order_structure(5), linear_order_structure(6), 2)
    assert not ef_win(linear_order_structure(1), linear_order_structure(2), 2)
    assert not ef_win(P("12"), P("21"), 2)
    assert ef_win(P("12"), P("21"), 1)


def test_k_zero_always_wins():
    assert ef_win(P("1"), P("4321"), 0)
    assert len(equiv_classes(list(enumerate_avoiders(3)), 0)) == 1


def test_classes_of_s2():
    assert len(equiv_classes([P("12"), P("21")], 2)) == 2


@pytest.mark.parametrize("k", [1, 2])
def test_solver_matches_naive_game(k):
    corpus = small_perms(3)
    for p in corpus:
        for q in corpus:
            assert ef_win(p, q, k) == naive_win(p, q, k), (p, q)


def test_solver_matches_naive_game_k3_sample():
    corpus = [P(x) for x in ("123", "132", "213", "2143", "1324", "2413", "3412", "1234", "12")]
    for p in corpus:
        for q in corpus:
            assert ef_win(p, q, 3) == naive_win(p, q, 3), (p, q)


def test_symmetry_and_monotonicity():
    corpus = [p for n in range(1, 6) for p in enumerate_avoiders(n)]
    for p, q in combinations(corpus[:40], 2):
        for k in (1, 2):
            w = ef_win(p, q, k)
            assert w == ef_win(q, p, k)
            if ef_win(p, q, k + 1):
                assert w


def test_isomorphic_copies():
    # relabel the domain of a permutation structure; the game must not notice
    p = P("2413")
    s = permutation_structure(p)
    sigma = {1: 3, 2: 1, 3: 4, 4: 2}
    copy = RelationalStructure(
        4, tuple((name, frozenset((sigma[a], sigma[b]) for a, b in pairs)) for name, pairs in s.relations)
    )
    for k in range(4):
        assert EFSolver(s, copy).duplicator_wins(k)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_linear_orders_above_threshold(k):
    sizes = range(2**k + 1, 2**k + 5)
    for m in sizes:
        for n in sizes:
            assert ef_win(linear_order_structure(m), linear_order_structure(n), k)


def test_linear_boundary_datum():
    # measured: L_m and L_n are k-equivalent for all m, n >= 2^k - 1
    assert ef_win(linear_order_structure(4), linear_order_structure(5), 2)
    assert ef_win(linear_order_structure(3), linear_order_structure(4), 2)
    assert not ef_win(linear_order_structure(2), linear_order_structure(3), 2)
    assert [linear_threshold(k) for k in (1, 2, 3)] == [1, 3, 7]


def test_interval_solver_matches_generic():
    for k in (1, 2, 3):
        for m in range(1, 6):
            for n in range(1, 6):
                a, b = linear_order_structure(m), linear_order_structure(n)
                generic = EFSolver(
                    RelationalStructure(m, a.relations), RelationalStructure(n, b.relations)
                ).duplicator_wins(k)
                assert generic == ef_win(a, b, k)


@pytest.mark.parametrize("k", [1, 2])
def test_soundness_small(k):
    battery = sentence_battery(k, 30, seed=11) + [builtin("phi2")] * (k >= 2)
    corpus = [p for n in range(1, 5) for p in enumerate_avoiders(n)]
    for p, q in combinations(corpus, 2):
        if perm_equivalent(p, q, k):
            for f in battery:
                assert evaluate(f, p) == evaluate(f, q)
