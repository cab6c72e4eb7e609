from collections import Counter
from fractions import Fraction
from statistics import NormalDist

import pytest

from permlogic.catalan import ballot, catalan
from permlogic.perm import IllegalSlotError, Permutation, enumerate_avoiders
from permlogic.rng import stream
from permlogic.sampler import all_runs, path_probability, q_distribution, replay, sample_avoider


def chi2_critical(df, alpha):
    # Wilson-Hilferty
    z = NormalDist().inv_cdf(1 - alpha)
    return df * (1 - 2 / (9 * df) + z * (2 / (9 * df)) ** 0.5) ** 3


def test_length_one():
    run = sample_avoider(1, stream(0))
    assert run.permutation == Permutation((1,)) and run.path == ()
    assert path_probability(run) == 1


def test_bad_length():
    with pytest.raises(ValueError):
        sample_avoider(0, stream(0))


def test_same_seed_same_output():
    a = [sample_avoider(30, stream(9, "s")).permutation for _ in range(5)]
    b = [sample_avoider(30, stream(9, "s")).permutation for _ in range(5)]
    assert a == b
    c = [sample_avoider(30, stream(9, "other")).permutation for _ in range(5)]
    assert a != c


@pytest.mark.parametrize("n", range(2, 13))
def test_path_probability_is_uniform(n):
    rng = stream(2024, "paths", n)
    for _ in range(500):
        run = sample_avoider(n, rng)
        assert replay(run.path) == run.permutation
        assert path_probability(run) == Fraction(1, catalan(n))


@pytest.mark.parametrize("n", range(1, 7))
def test_exhaustive_path_measure(n):
    total = Fraction(0)
    seen = {}
    for run, prob in all_runs(n):
        assert run.permutation not in seen
        seen[run.permutation] = prob
        total += prob
    assert total == 1
    assert set(seen) == set(enumerate_avoiders(n))
    assert set(seen.values()) == {Fraction(1, catalan(n))}


def test_forty_two_runs_at_five():
    assert sum(1 for _ in all_runs(5)) == 42


def test_replay_rejects_wrong_slot_count():
    with pytest.raises(IllegalSlotError):
        replay(((3, "R"),))


def test_inconsistent_run():
    run = sample_avoider(4, stream(1))
    bad = type(run)(5, None, run.permutation, run.path)
    with pytest.raises(ValueError):
        path_probability(bad)


def test_level_three_frequencies():
    rng = stream(7, "n3")
    counts = Counter(sample_avoider(3, rng).permutation for _ in range(100_000))
    assert len(counts) == 5
    for c in counts.values():
        assert abs(c / 100_000 - 0.2) < 0.005


def test_chi_square_level_six():
    rng = stream(8, "n6")
    samples = 1_000_000
    counts = Counter(sample_avoider(6, rng).permutation for _ in range(samples))
    expected = samples / 132
    stat = sum((counts[p] - expected) ** 2 / expected for p in enumerate_avoiders(6))
    assert stat < chi2_critical(131, 1e-3)


def test_q_distribution_exact():
    assert q_distribution(3) == {2: Fraction(2, 5), 3: Fraction(2, 5), 4: Fraction(1, 5)}
    for n in range(1, 31):
        d = q_distribution(n)
        assert sum(d.values()) == 1
        assert sum(r * p for r, p in d.items()) == Fraction(catalan(n + 1), catalan(n))


def test_q_distribution_large_n():
    d = q_distribution(200)
    for r in range(2, 7):
        assert abs(d[r] - Fraction(r - 1, 2**r)) < Fraction(1, 100)
        assert d[r] == Fraction(ballot(200, r), catalan(200))


def test_q_distribution_mc():
    exact = q_distribution(50)
    mc = q_distribution(50, "mc", 1_000_000, stream(5, "q"))
    assert sum(abs(float(exact[r]) - mc[r]) for r in exact) < 0.01


def test_q_distribution_errors():
    with pytest.raises(ValueError):
        q_distribution(501)
    with pytest.raises(ValueError):
        q_distribution(5, "mc")
    with pytest.raises(ValueError):
        q_distribution(5, "bogus")


def test_streams_need_seed():
    with pytest.raises(ValueError):
        stream(None)
