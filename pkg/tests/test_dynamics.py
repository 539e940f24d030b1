"""Tests for dynamics.py"""
# pylint: disable=import-error,invalid-name
import itertools
import random
import pytest
from pytest_helper import main
from errors import CapExceeded, BudgetExceeded, NotPeriodicModP, InputError
from free_group import make_endo
from local_ring import make_ring
from mat_group import tuple_of, identity_tuple
from dynamics import (detect_cycle, period_tower, search_periodic, iterate_map,
                      random_tuple, orbit)

A_ROWS, B_ROWS = [[5, 2], [2, 1]], [[1, 2], [2, 5]]
PHI = make_endo([[(1, 1), (2, 1)], [(2, 1), (1, 1)]])
EXAMPLE = tuple_of([A_ROWS, B_ROWS])

def _naive_cycle(phi, x0, limit):
    """(tail, period) by storing every state, or None past @limit states."""
    seen = dict()
    point = x0
    for step in range(limit + 1):
        key = point.encode()
        if key in seen:
            return seen[key], step - seen[key]
        seen[key] = step
        point = iterate_map(phi, point, 1)
    return None

def _random_positive_endo(rng, max_length):
    return make_endo([[(rng.randint(1, 2), 1) for _ in range(rng.randint(1, max_length))]
                      for _ in range(2)])

def test_detect_cycle_example():
    """Tests the period-6 orbit of (A, B) mod 5 and the fixed point (I, I)."""
    ring = make_ring(5, 1)
    record = detect_cycle(PHI, EXAMPLE.over(ring))
    assert (record.tail, record.period) == (0, 6)
    assert record.cycle_entry == EXAMPLE.over(ring)
    record = detect_cycle(PHI, identity_tuple(2, ring))
    assert (record.tail, record.period) == (0, 1)
    with pytest.raises(CapExceeded):
        detect_cycle(PHI, EXAMPLE.over(ring), cap=3)
    with pytest.raises(InputError):
        detect_cycle(PHI, EXAMPLE)

def test_detect_cycle_against_oracle():
    """Tests Brent against a store-all-states simulation on random orbits."""
    rng = random.Random(21)
    checked = 0
    for _ in range(60):
        phi = _random_positive_endo(rng, 3)
        ring = make_ring(rng.choice((2, 3, 5)), rng.randint(1, 2))
        x0 = random_tuple(ring, 2, rng)
        expected = _naive_cycle(phi, x0, 200)
        if expected is None or sum(expected) > 200:
            continue
        record = detect_cycle(phi, x0, cap=200)
        assert (record.tail, record.period) == expected
        assert record.cycle_entry == iterate_map(phi, x0, record.tail)
        for multiple in (1, 2, 3):
            entry = record.cycle_entry
            assert iterate_map(phi, entry, multiple * record.period) == entry
        checked += 1
    assert checked > 0

def _mul_mod(x, y, m):
    return ((x[0] * y[0] + x[1] * y[2]) % m, (x[0] * y[1] + x[1] * y[3]) % m,
            (x[2] * y[0] + x[3] * y[2]) % m, (x[2] * y[1] + x[3] * y[3]) % m)

def _plain_period(p, k):
    """Period of (A, B) under (U, V) -> (UV, VU) mod p^k, on plain int tuples."""
    m = p**k
    start = (tuple(c % m for row in A_ROWS for c in row),
             tuple(c % m for row in B_ROWS for c in row))
    point, steps = start, 0
    while True:
        point = (_mul_mod(point[0], point[1], m), _mul_mod(point[1], point[0], m))
        steps += 1
        if point == start:
            return steps

def test_period_tower_example():
    """Tests the tower 6, 12, 60, 300 of (A, B) at p = 5 against direct iteration."""
    expected = tuple(_plain_period(5, k) for k in range(1, 5))
    assert expected == (6, 12, 60, 300)
    assert period_tower(PHI, EXAMPLE, 5, 2).periods == expected[:2]
    tower = period_tower(PHI, EXAMPLE, 5, 4)
    assert tower.periods == expected
    assert tower.tails == (0, 0, 0, 0)
    assert tower.prime_to_p_parts() == (6, 12, 12, 12)
    assert tower.p_exponents() == (0, 0, 1, 2)
    assert tower.to_json() == dict({"p": 5, "K": 4, "periods": [6, 12, 60, 300]})
    assert period_tower(PHI, identity_tuple(2), 5, 3).periods == (1, 1, 1)

def test_period_tower_not_periodic():
    """Tests that a tail mod p is rejected."""
    squares = make_endo([[(1, 1), (1, 1)], [(2, 1), (2, 1)]])
    nilpotent = tuple_of([[[0, 1], [0, 0]], [[1, 0], [0, 1]]])
    with pytest.raises(NotPeriodicModP):
        period_tower(squares, nilpotent, 5, 2)

def test_tower_divisibility():
    """Tests l_k | l_(k+1) for random positive endos and cycle points."""
    rng = random.Random(1234)
    checked = 0
    for _ in range(100):
        phi = _random_positive_endo(rng, 4)
        p = rng.choice((3, 5))
        top = make_ring(p, 3)
        x0 = tuple_of([[[rng.randint(-9, 9) for _ in range(2)] for _ in range(2)]
                       for _ in range(2)])
        try:
            entry = detect_cycle(phi, x0.over(top), cap=1000).cycle_entry
            tower = period_tower(phi, entry, p, 3, cap=1000)
        except CapExceeded:
            continue
        for low, high in zip(tower.periods, tower.periods[1:]):
            assert high % low == 0
        checked += 1
    assert checked > 0

def _mul2(x, y):
    return ((x[0] * y[0] + x[1] * y[2]) % 2, (x[0] * y[1] + x[1] * y[3]) % 2,
            (x[2] * y[0] + x[3] * y[2]) % 2, (x[2] * y[1] + x[3] * y[3]) % 2)

def test_search_periodic_census():
    """Tests the exhaustive Z/2 census of nonsingular periodic pairs."""
    ring = make_ring(2, 1)
    found = search_periodic(PHI, ring, "exhaustive", nonsingular_only=True)
    # Oracle: plain tuples mod 2, iterated directly.
    units = [m for m in itertools.product(range(2), repeat=4)
             if (m[0] * m[3] - m[1] * m[2]) % 2]
    assert len(units) == 6
    expected = dict()
    for pair in itertools.product(units, repeat=2):
        point = pair
        for n in range(1, 37):
            point = (_mul2(point[0], point[1]), _mul2(point[1], point[0]))
            if point == pair:
                expected[pair[0] + pair[1]] = n
                break
    assert dict({point.encode(): period for point, period in found}) == expected
    assert (identity_tuple(2, ring), 1) in found
    assert [point.encode() for point, _ in found] == sorted(expected)

def test_search_periodic_modes():
    """Tests the budget, the seeded strategy and the singular points."""
    with pytest.raises(BudgetExceeded):
        search_periodic(PHI, make_ring(5, 1), "exhaustive", budget=10)
    ring = make_ring(5, 1)
    found = search_periodic(PHI, ring, "from_seeds", seeds=[EXAMPLE])
    assert len(found) == 6 and all(period == 6 for _, period in found)
    assert sorted(p.encode() for p in orbit(PHI, EXAMPLE.over(ring), 6)) == \
        [p.encode() for p, _ in found]
    everything = search_periodic(PHI, make_ring(2, 1), "exhaustive")
    nonsingular = search_periodic(PHI, make_ring(2, 1), "exhaustive",
                                  nonsingular_only=True)
    assert len(everything) > len(nonsingular)
    zero = tuple_of([[[0, 0], [0, 0]], [[0, 0], [0, 0]]], make_ring(2, 1))
    assert (zero, 1) in everything
    seeded = search_periodic(PHI, ring, "from_seeds", budget=5, seed=3)
    assert seeded == search_periodic(PHI, ring, "from_seeds", budget=5, seed=3)
    with pytest.raises(InputError):
        search_periodic(PHI, ring, "sideways")

main(__name__, __file__)
