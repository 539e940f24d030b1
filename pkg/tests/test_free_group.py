"""Tests for free_group.py"""
# pylint: disable=import-error
import random
import numpy as np
import pytest
from pytest_helper import main
from errors import GeneratorIndexError, RankMismatch, InputError
from free_group import (Word, reduce, apply_endo, power_endo, compose,
                        abelianization, make_endo, identity_endo, format_word,
                        format_endo, generator, identity_word, exponent_sums)

A, B = 1, 2
# phi: a -> ab, b -> ba
PHI = make_endo([[(A, 1), (B, 1)], [(B, 1), (A, 1)]])

def _random_word(rng, k, max_length):
    letters = [(rng.randint(1, k), rng.choice((1, -1)))
               for _ in range(rng.randint(0, max_length))]
    return Word(tuple(letters), k)

def _random_endo(rng, k, max_length):
    return make_endo([_random_word(rng, k, max_length).letters for _ in range(k)])

def test_reduce():
    """Tests free reduction on the basic examples."""
    assert reduce([(A, 1), (B, 1), (B, -1), (A, 1)], 2).letters == ((A, 1), (A, 1))
    assert reduce([(A, 1), (A, -1)], 2).is_identity()
    unchanged = [(A, 1), (B, 1), (A, -1)]
    assert reduce(unchanged, 2).letters == tuple(unchanged)
    # Cancellation can cascade.
    assert reduce([(A, 1), (B, 1), (B, -1), (A, -1)], 2).is_identity()
    with pytest.raises(GeneratorIndexError):
        reduce([(3, 1)], 2)
    with pytest.raises(InputError):
        reduce([(1, 2)], 2)

def test_reduce_properties():
    """Tests idempotence and that reduce(uv) depends on reduced u, v only."""
    rng = random.Random(11)
    for _ in range(200):
        raw = [(rng.randint(1, 3), rng.choice((1, -1))) for _ in range(rng.randint(0, 12))]
        once = reduce(raw, 3)
        assert reduce(once.letters, 3) == once
        assert len(once) <= len(raw)
        u, v = _random_word(rng, 3, 8), _random_word(rng, 3, 8)
        assert reduce(u.letters + v.letters, 3) == u * v

def test_apply_endo():
    """Tests substitution for phi: a -> ab, b -> ba."""
    assert format_word(apply_endo(PHI, Word(((A, 1), (B, 1)), 2))) == "abba"
    assert (format_word(apply_endo(PHI, Word(((A, 1), (B, -1)), 2)))
            == "aba^-1b^-1")
    assert apply_endo(PHI, identity_word(2)).is_identity()
    with pytest.raises(RankMismatch):
        apply_endo(PHI, identity_word(3))

def test_apply_endo_homomorphism():
    """Tests apply(uv) = apply(u) apply(v) and apply(w^-1) = apply(w)^-1."""
    rng = random.Random(5)
    for _ in range(100):
        phi = _random_endo(rng, 2, 4)
        u, v = _random_word(rng, 2, 6), _random_word(rng, 2, 6)
        assert apply_endo(phi, u * v) == apply_endo(phi, u) * apply_endo(phi, v)
        assert apply_endo(phi, u.inverse()) == apply_endo(phi, u).inverse()

def test_power_endo():
    """Tests phi^2 and phi^0."""
    square = power_endo(PHI, 2)
    assert format_word(square.images[0]) == "abba"
    assert format_word(square.images[1]) == "baab"
    assert power_endo(PHI, 0) == identity_endo(2)
    assert format_endo(power_endo(PHI, 0)) == "a->a, b->b"
    with pytest.raises(InputError):
        power_endo(PHI, -1)

def test_power_endo_composition():
    """Tests power(m + n) = power(m) o power(n)."""
    rng = random.Random(2)
    for _ in range(20):
        phi = _random_endo(rng, 2, 3)
        m, n = rng.randint(0, 3), rng.randint(0, 3)
        assert power_endo(phi, m + n) == compose(power_endo(phi, m),
                                                 power_endo(phi, n))

def test_abelianization():
    """Tests exponent-sum matrices and the derived-subgroup flag."""
    matrix, in_derived = abelianization(PHI)
    assert matrix.tolist() == [[1, 1], [1, 1]] and not in_derived
    commutators = make_endo([
        [(A, 1), (B, 1), (A, -1), (B, -1)],
        [(B, 1), (A, 1), (B, -1), (A, -1)]])
    matrix, in_derived = abelianization(commutators)
    assert matrix.tolist() == [[0, 0], [0, 0]] and in_derived
    matrix, _ = abelianization(identity_endo(3))
    assert matrix.tolist() == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]

def test_abelianization_anti_multiplicative():
    """Tests M(phi o psi) = M(psi) . M(phi)."""
    rng = random.Random(19)
    for _ in range(50):
        phi, psi = _random_endo(rng, 3, 4), _random_endo(rng, 3, 4)
        lhs, _ = abelianization(compose(phi, psi))
        rhs = np.dot(abelianization(psi)[0], abelianization(phi)[0])
        assert lhs.tolist() == rhs.tolist()

def test_formatting():
    """Tests the DSL printers and helpers."""
    word = Word(((A, 1), (B, -1), (A, 1)), 2)
    assert format_word(word) == "ab^-1a"
    assert str(word) == "ab^-1a"
    assert format_word(word, ("x", "y")) == "xy^-1x"
    assert format_endo(PHI) == "a->ab, b->ba"
    assert generator(2, 2, -1) == Word(((B, -1),), 2)
    assert exponent_sums(word) == [2, -1]
    assert len(word.inverse()) == 3 and (word * ~word).is_identity()
    with pytest.raises(RankMismatch):
        word * identity_word(3)

main(__name__, __file__)
