"""Tests for utils.py"""
# pylint: disable=import-error
from pytest_helper import main
from utils import Fix, real_hash, derive_seed, parallel_map

def _square(x):
    return x * x

def test_fix():
    """Tests that Fix calls the function until it returns False."""
    remaining = [3]
    def step():
        remaining[0] -= 1
        return remaining[0] > 0
    Fix(step)
    assert remaining[0] == 0

def test_real_hash_and_seeds():
    """Tests that hashes and derived seeds are deterministic and distinct."""
    assert real_hash("spindle") == real_hash("spindle")
    assert real_hash(dict({"a": 1, "b": 2})) == real_hash(dict({"b": 2, "a": 1}))
    assert real_hash([1, 2]) == real_hash((1, 2))
    assert derive_seed(0, 1) == derive_seed(0, 1)
    assert len({derive_seed(0, i) for i in range(100)}) == 100
    assert derive_seed(0, 1) != derive_seed(1, 1)

def test_parallel_map():
    """Tests that results come back in input order with and without a pool."""
    assert parallel_map(_square, range(6)) == [0, 1, 4, 9, 16, 25]
    assert parallel_map(_square, range(6), workers=2) == [0, 1, 4, 9, 16, 25]

main(__name__, __file__)
