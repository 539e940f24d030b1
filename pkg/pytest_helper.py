"""Lets each test file be executed directly, e.g. `python3 tests/test_hnn.py`.

Every test file ends with main(__name__, __file__).
"""
import sys
import pytest

def main(name, file_name):
    """Runs pytest on @file_name iff it is being executed as a script."""
    if name != "__main__":
        return
    sys.exit(pytest.main([file_name, "-q"] + sys.argv[1:]))
