"""Assorted helper functions shared by the Spindle modules."""
import hashlib
import logging
import multiprocessing

LOGGER = logging.getLogger(__name__)

def Fix(function, *args, **kwargs):
    """Applies @function repeatedly until it returns False.

    Used, e.g., by stallings.py to prune hanging vertices until none are left.
    """
    while function(*args, **kwargs):
        pass

def real_hash(item):
    """Returns a "cryptographically-secure-ish" hash of @item.

    Used to derive reproducible per-trial seeds from a campaign seed, so a
    failing trial can be re-run on its own.
    """
    if isinstance(item, str):
        return hashlib.sha224(item.encode()).hexdigest()
    if isinstance(item, dict):
        # NOTE: this assumes str(...) of the values is deterministic.
        return real_hash(str(sorted(item.items())))
    if isinstance(item, (tuple, list)):
        return real_hash(repr(tuple(item)))
    raise NotImplementedError

def derive_seed(seed, index):
    """Deterministic sub-seed number @index of campaign seed @seed."""
    return int(real_hash(dict({"seed": seed, "index": index}))[:12], 16)

def parallel_map(function, items, workers=1):
    """Maps @function over @items, in a process pool if @workers > 1.

    Results come back in input order, so callers merging them stay
    deterministic. @function must be picklable (module-level).
    """
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [function(item) for item in items]
    LOGGER.info("Fanning %d tasks out to %d workers.", len(items), workers)
    with multiprocessing.Pool(workers) as pool:
        return pool.map(function, items)
