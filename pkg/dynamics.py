"""Orbits of the word map phi_G on finite truncations.

Every forward orbit in a finite set is eventually periodic. detect_cycle finds
the tail and period of one orbit with Brent's algorithm (no orbit storage);
period_tower follows one integer point through Z/p, Z/p^2, ...; and
search_periodic collects periodic points either exhaustively or from a list of
starting points.
"""
import itertools
import logging
import random
from dataclasses import dataclass
from errors import (CapExceeded, BudgetExceeded, NotPeriodicModP, InputError,
                    NotAUnit)
from local_ring import make_ring
from mat_group import Mat2, MatTuple, phi_map
from utils import parallel_map

LOGGER = logging.getLogger(__name__)

DEFAULT_CAP = 10**7

@dataclass(frozen=True)
class OrbitRecord:
    """phi^(tail + period)(x0) = phi^tail(x0), both minimal."""
    tail: int
    period: int
    cycle_entry: MatTuple

def iterate_map(phi, point, n, adjugate=False):
    """phi_G applied @n times to @point."""
    for _ in range(n):
        point = phi_map(phi, point, adjugate)
    return point

def orbit(phi, point, n):
    """[point, phi(point), ..., phi^(n-1)(point)]."""
    points = []
    for _ in range(n):
        points.append(point)
        point = phi_map(phi, point)
    return points

def detect_cycle(phi, x0, cap=DEFAULT_CAP):
    """Brent cycle detection on the forward orbit of @x0.

    Raises CapExceeded when tail + period > @cap. The number of map
    evaluations spent finding the period is bounded by a constant times the
    tail plus the period, so the search is abandoned once it is clear the sum
    cannot fit under @cap.
    """
    if x0.ring is None:
        raise InputError("detect_cycle needs a point over a finite ring.")
    if cap < 1:
        raise InputError(f"cap must be >= 1, got {cap}.")
    hare_limit = 6 * cap + 6
    power, period = 1, 1
    tortoise, hare = x0, phi_map(phi, x0)
    steps = 1
    while tortoise != hare:
        if power == period:
            tortoise = hare
            power *= 2
            period = 0
        hare = phi_map(phi, hare)
        period += 1
        steps += 1
        if steps > hare_limit:
            raise CapExceeded(f"No cycle within {steps} steps (cap {cap}).")
    LOGGER.debug("Brent: period %d after %d steps.", period, steps)
    if period > cap:
        raise CapExceeded(f"Period {period} exceeds cap {cap}.")
    tortoise, hare = x0, iterate_map(phi, x0, period)
    tail = 0
    while tortoise != hare:
        tortoise = phi_map(phi, tortoise)
        hare = phi_map(phi, hare)
        tail += 1
        if tail + period > cap:
            raise CapExceeded(f"tail + period exceeds cap {cap}.")
    return OrbitRecord(tail, period, tortoise)

def _p_adic_split(value, p):
    """Returns (a, s) with value = a * p^s and p not dividing a."""
    exponent = 0
    while value % p == 0:
        value //= p
        exponent += 1
    return value, exponent

@dataclass(frozen=True)
class PeriodTower:
    """Minimal periods l_1, ..., l_K of one point mod p, ..., p^K.

    @tails[k - 1] is the pre-period at level k; only level 1 is required to
    be zero. Each l_k factors as a * p^s_k with a prime to p.
    """
    p: int
    periods: tuple
    tails: tuple

    def prime_to_p_parts(self):
        """The factors a of l_k = a * p^s_k."""
        return tuple(_p_adic_split(period, self.p)[0] for period in self.periods)

    def p_exponents(self):
        """The exponents s_k of l_k = a * p^s_k."""
        return tuple(_p_adic_split(period, self.p)[1] for period in self.periods)

    def to_json(self):
        """{p, K, periods}, the shape the periods command prints."""
        return dict({"p": self.p, "K": len(self.periods),
                     "periods": list(self.periods)})

def period_tower(phi, point, p, K, cap=DEFAULT_CAP, tau=1, modulus=None):
    """Minimal periods of @point reduced mod p^k for k = 1..@K.

    @point is an exact-integer MatTuple (or one at precision >= K); it is
    reduced once per level and iterated modularly from there.
    """
    if K < 1:
        raise InputError(f"K must be >= 1, got {K}.")
    periods, tails = [], []
    for k in range(1, K + 1):
        ring = make_ring(p, k, tau, modulus)
        record = detect_cycle(phi, point.over(ring), cap)
        if k == 1 and record.tail:
            raise NotPeriodicModP(
                f"Point mod {p} has tail {record.tail}; not periodic.")
        LOGGER.info("Level %d: period %d (tail %d).", k, record.period, record.tail)
        periods.append(record.period)
        tails.append(record.tail)
    return PeriodTower(p, tuple(periods), tuple(tails))

def all_tuples(ring, k):
    """Yields every point of M(2)^k over @ring."""
    elements = list(ring.elements())
    mats = [Mat2(*entries) for entries in itertools.product(elements, repeat=4)]
    for choice in itertools.product(mats, repeat=k):
        yield MatTuple(choice)

def random_tuple(ring, k, rng):
    """A uniformly random point of M(2)^k over @ring."""
    def _entry():
        return ring([rng.randrange(ring.pk) for _ in range(ring.tau)])
    return MatTuple(tuple(Mat2(_entry(), _entry(), _entry(), _entry())
                          for _ in range(k)))

def _cycle_from(args):
    """Worker: the cycle reached from one start, as [(point, period)]."""
    phi, start, cap = args
    try:
        record = detect_cycle(phi, start, cap)
    except NotAUnit:
        return []
    return [(point, record.period)
            for point in orbit(phi, record.cycle_entry, record.period)]

def _exhaustive_cycles(phi, starts, cap):
    """All cycle points reachable from @starts, sharing work across starts."""
    settled = set()
    found = []
    for start in starts:
        path, index = [], dict()
        point = start
        while True:
            key = point.encode()
            if key in settled:
                break
            if key in index:
                cycle = path[index[key]:]
                found.extend((member, len(cycle)) for member in cycle)
                break
            index[key] = len(path)
            path.append(point)
            if len(path) > cap:
                raise CapExceeded(f"Orbit longer than cap {cap}.")
            try:
                point = phi_map(phi, point)
            except NotAUnit:
                break
        settled.update(member.encode() for member in path)
    return found

def search_periodic(phi, ring, strategy="exhaustive", nonsingular_only=False,
                    budget=10**6, seeds=None, seed=0, workers=1, cap=DEFAULT_CAP):
    """Periodic points of phi_G over @ring, as (MatTuple, period) pairs.

    With strategy "exhaustive", every point of M(2)^k (or of GL(2)^k when
    @nonsingular_only) is advanced to its cycle; this needs
    |ring|^(4k) <= @budget. With "from_seeds", the given @seeds (or @budget
    random starts drawn from @seed) are advanced, in @workers processes.
    Starts whose orbit needs the inverse of a singular matrix are skipped.
    The result is sorted by encoding and free of duplicates.
    """
    k = phi.rank
    if strategy == "exhaustive":
        size = ring.size() ** (4 * k)
        if size > budget:
            raise BudgetExceeded(f"{size} starting points exceed budget {budget}.")
        starts = all_tuples(ring, k)
        if nonsingular_only:
            starts = (start for start in starts if start.all_unit_det())
        found = _exhaustive_cycles(phi, starts, cap)
    elif strategy == "from_seeds":
        if seeds is None:
            rng = random.Random(seed)
            seeds = [random_tuple(ring, k, rng) for _ in range(budget)]
        seeds = [start.over(ring) for start in seeds]
        if len(seeds) > budget:
            raise BudgetExceeded(f"{len(seeds)} seeds exceed budget {budget}.")
        jobs = [(phi, start, cap) for start in seeds]
        found = [pair for pairs in parallel_map(_cycle_from, jobs, workers)
                 for pair in pairs]
    else:
        raise InputError(f"Unknown search strategy {strategy!r}.")
    if nonsingular_only:
        found = [(point, period) for point, period in found
                 if point.all_unit_det()]
    unique = dict()
    for point, period in found:
        unique.setdefault(point.encode(), (point, period))
    LOGGER.info("Found %d periodic points over %s.", len(unique), ring)
    return [unique[key] for key in sorted(unique)]
