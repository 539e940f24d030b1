"""Tests for stallings.py"""
# pylint: disable=import-error
import itertools
import random
import pytest
from pytest_helper import main
from errors import NotInjective, RankMismatch
from free_group import Word, make_endo
from stallings import (membership, expand, endo_rank, subgroup_rank,
                       require_injective, preimage, subgroup_graph)

A, B = 1, 2
AB = Word(((A, 1), (B, 1)), 2)
BA = Word(((B, 1), (A, 1)), 2)
PHI = make_endo([AB.letters, BA.letters])

def _all_words(k, max_length):
    """Every reduced word of length <= @max_length."""
    letters = [(i, s) for i in range(1, k + 1) for s in (1, -1)]
    words = [()]
    frontier = [()]
    for _ in range(max_length):
        frontier = [w + (l,) for w in frontier for l in letters
                    if not w or w[-1] != (l[0], -l[1])]
        words.extend(frontier)
    return [Word(w, k) for w in words]

def _bfs_subgroup(gens, max_length):
    """Elements of <gens> spelled by reduced products of <= @max_length gens."""
    rank = gens[0].rank
    symbols = [(i, s) for i in range(1, len(gens) + 1) for s in (1, -1)]
    values = dict({(i, 1): gens[i - 1] for i in range(1, len(gens) + 1)})
    values.update({(i, -1): gens[i - 1].inverse() for i in range(1, len(gens) + 1)})
    found = set({Word((), rank)})
    frontier = [((), Word((), rank))]
    for _ in range(max_length):
        frontier = [(spelled + (s,), value * values[s]) for spelled, value in frontier
                    for s in symbols if not spelled or spelled[-1] != (s[0], -s[1])]
        found.update(value for _, value in frontier)
    return found

def test_membership_examples():
    """Tests membership in <ab, ba>."""
    abba = AB * BA
    expression = membership([AB, BA], abba)
    assert expression == ((1, 1), (2, 1))
    assert expand(expression, [AB, BA]) == abba
    assert preimage(PHI, abba) == AB
    assert membership([AB, BA], Word(((A, 1),), 2)) is None
    assert membership([AB, BA], Word((), 2)) == ()
    assert membership([], Word((), 2)) == ()
    assert membership([], AB) is None
    with pytest.raises(RankMismatch):
        membership([AB], Word((), 3))

def _check_against_bfs(gens, words):
    in_bfs = _bfs_subgroup(gens, 6)
    for word in words:
        expression = membership(gens, word)
        if word in in_bfs:
            assert expression is not None, word
        if expression is not None:
            assert expand(expression, gens) == word
            if len(expression) <= 6:
                assert word in in_bfs

def test_membership_against_bfs():
    """Tests membership on all words of length <= 6 against BFS enumeration."""
    words = _all_words(2, 6)
    # For <ab, ba> every member of length <= 6 is a product of <= 3 gens.
    in_bfs = _bfs_subgroup([AB, BA], 6)
    for word in words:
        assert (membership([AB, BA], word) is not None) == (word in in_bfs)
    rng = random.Random(1)
    for _ in range(10):
        gens = []
        while len(gens) < 2:
            gen = Word(tuple((rng.randint(1, 2), rng.choice((1, -1)))
                             for _ in range(rng.randint(1, 4))), 2)
            if not gen.is_identity():
                gens.append(gen)
        _check_against_bfs(gens, words)

def test_folding_gauge():
    """Tests expressions for subgroups whose loops fold at the base."""
    gens = [Word(((A, 1), (A, 1), (B, 1)), 2), Word(((A, 1), (A, 1)), 2),
            Word(((A, 1), (B, -1), (A, -1)), 2)]
    group = _bfs_subgroup(gens, 4)
    for word in group:
        expression = membership(gens, word)
        assert expression is not None
        assert expand(expression, gens) == word

def test_ranks():
    """Tests endo_rank and subgroup_rank."""
    assert endo_rank(PHI) == (2, True)
    collapse = make_endo([[(A, 1)], [(A, 1)]])
    assert endo_rank(collapse) == (1, False)
    with pytest.raises(NotInjective):
        require_injective(collapse)
    square = make_endo([[(1, 1), (1, 1)]])
    assert endo_rank(square) == (1, True)
    conjugate = Word(((A, 1), (B, 1), (A, -1)), 2)
    assert subgroup_rank([Word(((A, 1),), 2), conjugate]) == 2
    assert subgroup_rank([Word(((A, 1),), 2), Word(((A, 1),), 2)]) == 1
    assert subgroup_rank([]) == 0
    # <a^2, a^3> = <a>
    assert subgroup_rank([Word(((A, 1),) * 2, 2), Word(((A, 1),) * 3, 2)]) == 1

def test_core_graph_is_folded():
    """Tests that core graphs are folded at both ends of every edge."""
    rng = random.Random(4)
    for _ in range(30):
        gens = [Word(tuple((rng.randint(1, 2), rng.choice((1, -1)))
                           for _ in range(rng.randint(1, 6))), 2) for _ in range(3)]
        graph = subgroup_graph(gens)
        for vertex in graph.vertices():
            labels = [(graph.edges[e][1], graph.edges[e][0] == vertex)
                      for e in graph.incident[vertex] if graph.edges[e][0] == vertex]
            assert len(labels) == len(set(labels))
            incoming = [graph.edges[e][1] for e in graph.incident[vertex]
                        if graph.edges[e][2] == vertex]
            assert len(incoming) == len(set(incoming))
            if vertex != graph.base:
                degree = sum((graph.edges[e][0] == vertex) + (graph.edges[e][2] == vertex)
                             for e in graph.incident[vertex])
                assert degree >= 2

def test_rank_counts():
    """Tests that the free rank never exceeds the number of generators."""
    rng = random.Random(9)
    for _ in range(30):
        count = rng.randint(1, 3)
        gens = [Word(tuple((rng.randint(1, 2), rng.choice((1, -1)))
                           for _ in range(rng.randint(1, 5))), 2) for _ in range(count)]
        assert subgroup_rank(gens) <= count
        for gen in gens:
            assert expand(membership(gens, gen), gens) == gen
        for pair in itertools.combinations(gens, 2):
            product = pair[0] * pair[1]
            assert expand(membership(gens, product), gens) == product

main(__name__, __file__)
