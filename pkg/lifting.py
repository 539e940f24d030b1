"""Jacobians of word maps and the p-adic lifting of periodic points.

Gradients are computed in forward mode: each of the 4k coordinates of the
starting point becomes a dual number carrying its own unit gradient, and the
ordinary word-map code in mat_group.py runs unchanged on them. Gradients are
numpy object arrays of RingElems, so the linear algebra below (products,
powers, comparisons) is numpy's.

The exponent of the recurrence is M * p^(k - 1) at level k; reports also
carry M * p^k, the weaker exponent that is implied by it.
"""
import logging
import math
import random
from dataclasses import dataclass
import numpy as np
from errors import (NotAUnit, NonUnitDeterminant, SingularJacobian,
                    OrderCapExceeded, CongruenceFailed, NotPeriodicModP,
                    InputError, RingMismatch)
from local_ring import RingElem, make_ring, unit_inverse
from mat_group import Mat2, MatTuple
from dynamics import (DEFAULT_CAP, detect_cycle, iterate_map, period_tower,
                      random_tuple)
from utils import derive_seed, parallel_map

LOGGER = logging.getLogger(__name__)

DEFAULT_ORDER_CAP = 10**4
DEFAULT_PRECISION = 6

class DualElem:
    """value + eps * grad with eps^2 = 0; grad is a vector of RingElems."""
    __slots__ = ("value", "grad")

    def __init__(self, value, grad):
        self.value = value
        self.grad = grad

    @property
    def ring(self):
        return self.value.ring

    def _lift(self, other):
        if isinstance(other, DualElem):
            if other.ring is not self.ring:
                raise RingMismatch("Dual numbers over different rings.")
            return other
        if isinstance(other, (int, RingElem)):
            zeros = np.array([self.ring.zero()] * len(self.grad), dtype=object)
            return DualElem(self.ring(other), zeros)
        return None

    def __add__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return DualElem(self.value + other.value, self.grad + other.grad)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return DualElem(self.value - other.value, self.grad - other.grad)

    def __rsub__(self, other):
        return self._lift(other) - self

    def __neg__(self):
        return DualElem(-self.value, -self.grad)

    def __mul__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return DualElem(self.value * other.value,
                        self.grad * other.value + other.grad * self.value)

    __rmul__ = __mul__

    def inverse(self):
        """(v + eps d)^-1 = v^-1 - eps v^-2 d."""
        try:
            inverse = unit_inverse(self.value)
        except NotAUnit as error:
            raise NonUnitDeterminant(f"{self.value!r} is not a unit.") from error
        return DualElem(inverse, -(self.grad * (inverse * inverse)))

    def is_unit(self):
        return self.value.is_unit()

    def __eq__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return self.value == other.value and all(self.grad == other.grad)

    __hash__ = None

    def __repr__(self):
        return f"DualElem({self.value!r}, {list(self.grad)})"

def _identity_matrix(ring, size):
    matrix = np.empty((size, size), dtype=object)
    for i in range(size):
        for j in range(size):
            matrix[i, j] = ring.one() if i == j else ring.zero()
    return matrix

def _matrix_power(matrix, n):
    """matrix^n for n >= 1 by repeated squaring."""
    result, base = None, matrix
    while n:
        if n & 1:
            result = base if result is None else np.dot(result, base)
        n >>= 1
        if n:
            base = np.dot(base, base)
    return result

def _matrix_key(matrix):
    return tuple(c for entry in matrix.flat for c in entry.coeffs)

def _reduce_matrix(matrix, ring):
    """Entrywise reduction of a RingElem matrix into @ring."""
    reduced = np.empty(matrix.shape, dtype=object)
    for index, entry in np.ndenumerate(matrix):
        reduced[index] = ring(entry.coeffs)
    return reduced

@dataclass(frozen=True, eq=False)
class JacobianMat:
    """matrix[i, j] = d(coordinate i of phi^iterate)/d(coordinate j) at base."""
    matrix: np.ndarray
    base: MatTuple
    endo: object
    iterate: int

    @property
    def ring(self):
        return self.base.ring

    def at_precision(self, k):
        """The Jacobian reduced to precision @k."""
        ring = self.ring.at_precision(k)
        return JacobianMat(_reduce_matrix(self.matrix, ring), self.base.over(ring),
                           self.endo, self.iterate)

    def is_identity(self):
        """True iff the matrix is the identity."""
        return _matrix_key(self.matrix) == _matrix_key(
            _identity_matrix(self.ring, len(self.matrix)))

    def apply(self, vector):
        """J . @vector for a sequence of RingElems."""
        return list(np.dot(self.matrix, np.array(list(vector), dtype=object)))

    def __matmul__(self, other):
        return np.dot(self.matrix, other.matrix)

def jacobian(phi, iterate, point, ring=None):
    """The Jacobian of phi_G^@iterate at @point, by forward accumulation.

    @point is reduced into @ring first if given. Coordinates are ordered
    (a1, b1, c1, d1, a2, ...).
    """
    if ring is not None:
        point = point.over(ring)
    ring = point.ring
    if ring is None:
        raise InputError("jacobian needs a point over a finite ring.")
    coordinates = point.coordinates()
    size = len(coordinates)
    duals = []
    for j, value in enumerate(coordinates):
        grad = np.array([ring.zero()] * size, dtype=object)
        grad[j] = ring.one()
        duals.append(DualElem(value, grad))
    dual_point = MatTuple(tuple(Mat2(*duals[4 * i:4 * i + 4])
                                for i in range(len(point))))
    dual_point = iterate_map(phi, dual_point, iterate)
    rows = [entry.grad for entry in dual_point.coordinates()]
    return JacobianMat(np.array(rows, dtype=object).reshape(size, size),
                       point, phi, iterate)

def matrix_rank(matrix, ring):
    """Rank over the residue field of a square matrix of RingElems."""
    if ring.k != 1:
        raise InputError("matrix_rank works over a precision-1 ring.")
    rows = [list(row) for row in matrix]
    size, rank = len(rows), 0
    for column in range(size):
        pivot = next((r for r in range(rank, size) if not rows[r][column].is_zero()),
                     None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        inverse = unit_inverse(rows[rank][column])
        rows[rank] = [entry * inverse for entry in rows[rank]]
        for r in range(size):
            if r != rank and not rows[r][column].is_zero():
                factor = rows[r][column]
                rows[r] = [a - factor * b for a, b in zip(rows[r], rows[rank])]
        rank += 1
    return rank

def _order_on(start, step, cap):
    """Least 1 <= r <= cap with step^r . start == start, else None.

    Baby-step giant-step on matrix hashes. @step must act invertibly on the
    column space of @start, so the powers step^r . start are purely periodic.
    """
    width = max(1, math.isqrt(cap))
    baby, current = dict(), start
    for i in range(width):
        if i and _matrix_key(current) == _matrix_key(start):
            return i
        baby.setdefault(_matrix_key(current), i)
        current = np.dot(step, current)
    giant = _matrix_power(step, width)
    current, j = start, 0
    while (j - 1) * width < cap:
        j += 1
        current = np.dot(giant, current)
        i = baby.get(_matrix_key(current))
        if i is not None:
            order = j * width - i
            return order if order <= cap else None
    return None

def jacobian_order(jac, cap=DEFAULT_ORDER_CAP):
    """Least r <= @cap with J^r = I, or None when no such r exists below cap.

    Raises SingularJacobian when J is not invertible mod p.
    """
    ring = jac.ring
    if ring.k != 1:
        jac = jac.at_precision(1)
        ring = jac.ring
    size = len(jac.matrix)
    rank = matrix_rank(jac.matrix, ring)
    if rank < size:
        raise SingularJacobian(f"Jacobian has rank {rank} < {size}.")
    return _order_on(_identity_matrix(ring, size), jac.matrix, cap)

def stable_jacobian_order(jac, cap=DEFAULT_ORDER_CAP):
    """Order of J on its eventual image P = J^N, N the dimension.

    This is the least r with J^(N + r) = J^N; it equals jacobian_order when J
    is invertible. Raises SingularJacobian only when J is nilpotent.
    """
    if jac.ring.k != 1:
        jac = jac.at_precision(1)
    size = len(jac.matrix)
    stable = _matrix_power(jac.matrix, size)
    if all(entry.is_zero() for entry in stable.flat):
        raise SingularJacobian("Jacobian is nilpotent.")
    return _order_on(stable, jac.matrix, cap)

def stable_exponent(phi, point, p, tau=1, on_variety=True,
                    order_cap=DEFAULT_ORDER_CAP, cap=DEFAULT_CAP):
    """M = l_1 * r: phi^M fixes @point mod p with tangent map identity.

    l_1 is the period of @point mod p. With @on_variety, r is the order of
    the tangent map on the eventual image of the map (the tangent space of
    the image variety); otherwise r is the strict order of the full Jacobian.
    """
    ring = make_ring(p, 1, tau)
    residue = point.over(ring)
    record = detect_cycle(phi, residue, cap)
    if record.tail:
        raise NotPeriodicModP(f"Point mod {p} has tail {record.tail}.")
    jac = jacobian(phi, record.period, residue)
    if on_variety:
        order = stable_jacobian_order(jac, order_cap)
    else:
        order = jacobian_order(jac, order_cap)
    if order is None:
        raise OrderCapExceeded(f"Jacobian order exceeds {order_cap}.")
    LOGGER.info("Stable exponent: %d * %d.", record.period, order)
    return record.period * order

@dataclass(frozen=True)
class DividedDiff:
    """alpha^(index), one residue per coordinate."""
    index: int
    alpha: tuple

    def is_zero(self):
        return all(entry.is_zero() for entry in self.alpha)

def _difference_quotient(after, before, power, residue_ring):
    """(after - before) / p^power mod p, coordinatewise; None if not divisible."""
    divisor = residue_ring.p**power
    quotient = []
    for new, old in zip(after.coordinates(), before.coordinates()):
        coeffs = (new - old).coeffs
        if any(c % divisor for c in coeffs):
            return None
        quotient.append(residue_ring([c // divisor for c in coeffs]))
    return tuple(quotient)

def divided_difference(phi, point, M, i, p, K=None, tau=1):
    """alpha^(i) = (phi^(M p^(i-1))(X) - X) / p^i mod p at precision @K."""
    K = i + 1 if K is None else K
    if K < i + 1:
        raise InputError(f"Need K >= i + 1, got K={K}, i={i}.")
    ring = make_ring(p, K, tau)
    start = point.over(ring)
    image = iterate_map(phi, start, M * p**(i - 1))
    alpha = _difference_quotient(image, start, i, ring.residue())
    if alpha is None:
        raise CongruenceFailed(
            f"phi^{M * p**(i - 1)}(X) is not X mod {p}^{i}; is M a period?")
    return DividedDiff(i, alpha)

@dataclass(frozen=True)
class RecurrenceLevel:
    """One row of verify_recurrence: does phi^exponent(X) = X mod p^k?"""
    k: int
    exponent: int
    theorem_exponent: int
    passed: bool

    def to_json(self):
        return dict({"k": self.k, "exponent": self.exponent,
                     "theorem_exponent": self.theorem_exponent,
                     "pass": self.passed})

def verify_recurrence(phi, point, M, p, K, tau=1):
    """Checks phi^(M p^(k-1))(X) = X mod p^k for k = 1..@K.

    Failures are returned as data, never raised.
    """
    report = []
    for k in range(1, K + 1):
        ring = make_ring(p, k, tau)
        start = point.over(ring)
        exponent = M * p**(k - 1)
        passed = iterate_map(phi, start, exponent) == start
        LOGGER.info("Recurrence at k=%d (exponent %d): %s", k, exponent, passed)
        report.append(RecurrenceLevel(k, exponent, M * p**k, passed))
    return report

def gradient_congruence_check(phi, A, Y, l, p, K, iterate=1, tau=1):
    """P(A + p^l Y) = P(A) + p^l grad P(A) . Y mod p^(l+1) for every coordinate P.

    P ranges over the coordinates of phi^@iterate.
    """
    if l < 1 or K < l + 1:
        raise InputError(f"Need l >= 1 and K >= l + 1; got l={l}, K={K}.")
    ring = make_ring(p, l + 1, tau)
    A, Y = A.over(ring), Y.over(ring)
    scale = p**l
    shifted = MatTuple(tuple(
        Mat2(*(a + y * scale for a, y in zip(mat_a.entries(), mat_y.entries())))
        for mat_a, mat_y in zip(A, Y)))
    lhs = iterate_map(phi, shifted, iterate).coordinates()
    base = iterate_map(phi, A, iterate).coordinates()
    step = jacobian(phi, iterate, A).apply(Y.coordinates())
    return all(left == value + delta * scale
               for left, value, delta in zip(lhs, base, step))

@dataclass(frozen=True)
class OrbitCongruence:
    """Checks on orbit points X'_j = phi^(jM)(Z) at precision 2.

    first_order[j]: phi^M(X'_j) = X'_j + p alpha; step_up[j]:
    phi^(pM)(X'_j) = X'_j.
    """
    M: int
    alpha: tuple
    first_order: tuple
    step_up: tuple

    @property
    def passed(self):
        return all(self.first_order) and all(self.step_up)

def orbit_congruence(phi, point, p, M, count=None, tau=1):
    """Runs the first-order and step-up congruences along the orbit of Z.

    Z = phi^(N M)(X) with N the number of coordinates; this moves the base
    point onto the image of the map, where the tangent map of phi^M is the
    identity once M is a stable exponent. alpha = (phi^M(Z) - Z)/p mod p.
    """
    count = p if count is None else count
    ring = make_ring(p, 3, tau)
    start = point.over(ring)
    settled = iterate_map(phi, start, 4 * len(start) * M)
    alpha = _difference_quotient(iterate_map(phi, settled, M), settled, 1,
                                 ring.residue())
    if alpha is None:
        raise CongruenceFailed(f"phi^{M} does not fix the point mod {p}.")
    low = make_ring(p, 2, tau)
    first_order, step_up = [], []
    orbit_point = settled
    for _ in range(count):
        image = iterate_map(phi, orbit_point, M)
        low_image, low_point = image.over(low), orbit_point.over(low)
        expected = [coordinate + low(a.coeffs) * p for coordinate, a
                    in zip(low_point.coordinates(), alpha)]
        first_order.append(low_image.coordinates() == expected)
        step_up.append(iterate_map(phi, low_point, p * M) == low_point)
        orbit_point = image
    return OrbitCongruence(M, alpha, tuple(first_order), tuple(step_up))

@dataclass(frozen=True)
class ScalingCheck:
    """Level k of check_p_scaling."""
    k: int
    applicable: bool
    holds: bool

def check_p_scaling(phi, point, p, K, cap=DEFAULT_CAP, tau=1):
    """If J(phi^(l_k)) = I mod p at a tail-free level k, then l_(k+1) | p l_k."""
    tower = period_tower(phi, point, p, K, cap, tau)
    residue = point.over(make_ring(p, 1, tau))
    checks = []
    for k in range(1, K):
        period = tower.periods[k - 1]
        applicable = (tower.tails[k - 1] == 0
                      and jacobian(phi, period, residue).is_identity())
        holds = (p * period) % tower.periods[k] == 0
        checks.append(ScalingCheck(k, applicable, holds or not applicable))
    return checks

@dataclass(frozen=True)
class FuzzReport:
    """Outcome of gradient_fuzz; @failures lists the per-trial seeds."""
    seed: int
    trials: int
    failures: tuple

def _fuzz_trial(args):
    phi, trial_seed, primes, max_l = args
    rng = random.Random(trial_seed)
    p = rng.choice(primes)
    l = rng.randint(1, max_l)
    ring = make_ring(p, l + 1)
    while True:
        A = random_tuple(ring, phi.rank, rng)
        Y = random_tuple(ring, phi.rank, rng)
        try:
            return gradient_congruence_check(phi, A, Y, l, p, l + 1)
        except NotAUnit:
            continue

def gradient_fuzz(phi, trials, primes=(3, 5, 7, 11), max_l=2, seed=0, workers=1):
    """Seeded campaign of gradient_congruence_check over random A, Y, p, l."""
    seeds = [derive_seed(seed, i) for i in range(trials)]
    jobs = [(phi, trial_seed, tuple(primes), max_l) for trial_seed in seeds]
    results = parallel_map(_fuzz_trial, jobs, workers)
    failures = tuple(s for s, ok in zip(seeds, results) if not ok)
    if failures:
        LOGGER.warning("%d of %d gradient trials failed.", len(failures), trials)
    return FuzzReport(seed, trials, failures)
