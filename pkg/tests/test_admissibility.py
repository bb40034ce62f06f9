import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from betadyn import (
    Beta,
    BudgetExceeded,
    count_admissible,
    enumerate_admissible,
    expansion_of_one,
    is_admissible,
    lex_compare,
)
from betadyn.admissibility import format_word, parse_word

from oracles import (
    coordinatewise_admissible,
    fibonacci,
    naive_enumerate,
    naive_is_admissible,
)

words = st.lists(st.integers(min_value=0, max_value=5), min_size=0, max_size=8)


# -- lexicographic order -----------------------------------------------------


def test_lex_examples():
    assert lex_compare((1, 0), (1, 1)) == -1
    assert lex_compare((1, 0, 1), (1, 0, 1)) == 0
    assert lex_compare((0, 5), (1, 0)) == -1
    assert lex_compare((1, 0), (1, 0, 0)) == -1  # shorter is less


@given(words, words)
def test_lex_antisymmetric(u, v):
    assert lex_compare(u, v) == -lex_compare(v, u)


@given(words, words, words)
@settings(max_examples=200)
def test_lex_transitive(u, v, w):
    triples = sorted([tuple(u), tuple(v), tuple(w)],
                     key=lambda t: (t + (-1,)))
    a, b, c = triples
    if lex_compare(a, b) <= 0 and lex_compare(b, c) <= 0:
        assert lex_compare(a, c) <= 0


@given(words)
def test_lex_reflexive(u):
    assert lex_compare(u, u) == 0


def test_word_parsing():
    assert parse_word("1,0,1") == (1, 0, 1)
    assert format_word((2, 0, 1)) == "2,0,1"
    assert parse_word("") == ()


# -- recognition -------------------------------------------------------------


def test_admissible_examples(b2, phi):
    assert is_admissible((1, 1, 0, 1), b2)
    assert not is_admissible((1, 1), phi)
    assert is_admissible((1, 0, 1, 0, 1), phi)


def test_admissible_rejects_bad_digits(b2):
    with pytest.raises(ValueError):
        is_admissible((1, -1), b2)
    with pytest.raises(ValueError):
        is_admissible((), b2)


@pytest.mark.parametrize("literal", ["2", "golden", "1.8", "pi"])
def test_admissible_agrees_with_naive(literal):
    beta = Beta.parse(literal)
    star = expansion_of_one(beta, 8).prefix(8)
    cap = star[0]
    rng = random.Random(literal)
    for _ in range(300):
        n = rng.randint(1, 8)
        w = tuple(rng.randint(0, cap) for _ in range(n))
        assert is_admissible(w, beta) == naive_is_admissible(w, star), w


# -- enumeration -------------------------------------------------------------


def test_enumerate_examples(b2, phi):
    assert list(enumerate_admissible(b2, 2)) == [(0, 0), (0, 1), (1, 0), (1, 1)]
    assert list(enumerate_admissible(phi, 2)) == [(0, 0), (0, 1), (1, 0)]
    assert list(enumerate_admissible(phi, 3)) == [
        (0, 0, 0), (0, 0, 1), (0, 1, 0), (1, 0, 0), (1, 0, 1)]


@pytest.mark.parametrize("literal,n", [("2", 5), ("golden", 7), ("1.8", 7), ("pi", 4)])
def test_enumerate_matches_naive_and_is_sorted(literal, n):
    beta = Beta.parse(literal)
    star = expansion_of_one(beta, n + 1).prefix(n)
    got = list(enumerate_admissible(beta, n))
    assert got == naive_enumerate(star[0], n, star)
    assert got == sorted(got)
    assert len(set(got)) == len(got)


def test_enumerate_budget(phi):
    with pytest.raises(BudgetExceeded) as err:
        list(enumerate_admissible(phi, 40, budget=100))
    assert err.value.projected > 100


def test_prefix_closure_and_zero_extension(phi, b18):
    for beta in (phi, b18):
        for w in enumerate_admissible(beta, 6):
            for k in range(1, 6):
                assert is_admissible(w[:k], beta)
            assert is_admissible(w + (0,), beta)


# -- counting ----------------------------------------------------------------


def test_count_examples(b2, phi):
    assert count_admissible(b2, 10).count == 1024
    assert count_admissible(phi, 5).count == 13
    got = count_admissible(phi, 20)
    assert got.count == 17711
    assert got.bounds_ok(phi)


def test_integer_base_count_is_power(b3):
    for n in (1, 4, 9):
        assert count_admissible(b3, n).count == 3 ** n


def test_count_methods_agree(b2, phi, b18, bpi):
    for beta in (b2, phi, b18, bpi):
        for n in (1, 3, 6, 9):
            auto = count_admissible(beta, n)
            brute = count_admissible(beta, n, "brute-force")
            assert auto.count == brute.count, (beta.literal, n)
            assert auto.method == "transfer-matrix"
            assert brute.method == "brute-force"


def test_count_matches_enumeration(phi, b18, bpi):
    for beta in (phi, b18, bpi):
        for n in (2, 5, 8):
            assert count_admissible(beta, n).count == \
                len(list(enumerate_admissible(beta, n)))


def test_fibonacci_recurrence(phi):
    counts = {n: count_admissible(phi, n).count for n in range(1, 21)}
    assert counts[1] == 2 and counts[2] == 3
    for n in range(3, 21):
        assert counts[n] == counts[n - 1] + counts[n - 2]
    assert counts[20] == fibonacci(22)


def test_bounds_hold_small(b2, b3, phi, b18, bpi):
    for beta in (b2, b3, phi, b18, bpi):
        for n in (1, 5, 10):
            assert count_admissible(beta, n).bounds_ok(beta), (beta.literal, n)


def test_silver_base_counts(silver):
    # 1 + sqrt(2): expansion of 1 is (2,1), periodized to (2,0).
    star = expansion_of_one(silver, 4)
    assert star.finite_expansion == (2, 1)
    assert star.period == (2, 0)
    assert count_admissible(silver, 1).count == 3
    c = count_admissible(silver, 12)
    assert c.bounds_ok(silver)
    assert c.count == count_admissible(silver, 12, "brute-force").count


def test_coordinatewise_reading_contradicts_counting_bound(phi):
    """The coordinatewise reading of the comparison already fails the lower
    counting bound at length 3 for the golden base, while the lexicographic
    reading satisfies it; (1,0,1) is the separating word."""
    star = expansion_of_one(phi, 4).prefix(3)
    lex_words = [w for w in naive_enumerate(1, 3, star)]
    coord_words = [w for w in __import__("itertools").product((0, 1), repeat=3)
                   if coordinatewise_admissible(w, star)]
    assert (1, 0, 1) in lex_words
    assert (1, 0, 1) not in coord_words
    phi_cubed = float(Beta.golden().enclosure(64)[0]) ** 3
    assert len(coord_words) < phi_cubed      # coordinatewise breaks the bound
    assert len(lex_words) >= phi_cubed       # lexicographic satisfies it
    assert len(lex_words) == count_admissible(phi, 3).count == 5


def test_large_count_via_matrix(phi):
    # Eventually periodic bases count in log time: depth 2000 stays exact.
    got = count_admissible(phi, 2000).count
    assert got == fibonacci(2002)


def test_undecided_finiteness_propagates():
    from fractions import Fraction
    from betadyn import UndecidedFiniteness

    def refine(bits):
        return (Fraction(2), Fraction(2) + Fraction(1, 1 << min(bits, 40)))

    beta = Beta.from_refiner(refine, 2, Fraction(9, 4), name="2+eps")
    with pytest.raises(UndecidedFiniteness):
        is_admissible((1, 0), beta)
    with pytest.raises(UndecidedFiniteness):
        count_admissible(beta, 3)


def test_preperiodic_base():
    # The square of the golden ratio: expansion of 1 is infinite with digits
    # 2,1,1,1,...: a one-digit preperiod before a one-digit period.
    beta = Beta.quadratic(1, -3, 1, 2, 3)
    star = expansion_of_one(beta, 8)
    assert star.finite_expansion is None
    assert star.preperiod == (2,) and star.period == (1,)
    assert star.prefix(6) == (2, 1, 1, 1, 1, 1)
    for n in (1, 2, 5, 9):
        fast = count_admissible(beta, n)
        slow = count_admissible(beta, n, "brute-force")
        assert fast.count == slow.count, n
        assert fast.bounds_ok(beta)
        assert fast.count == len(list(enumerate_admissible(beta, n)))
