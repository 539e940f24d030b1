"""Truncated unramified local rings: Z/p^k and Galois rings GR(p^k, tau).

GR(p^k, tau) is (Z/p^k)[x] / (f) for a monic f of degree tau that is
irreducible mod p; its residue field is F_q with q = p^tau. Elements are
coefficient tuples (c_0, ..., c_{tau-1}) with entries in 0..p^k - 1.

Rings are memoized: make_ring(...) with the same parameters always returns the
same RingSpec object, and elements compare their rings by identity. Mixing
elements of different rings raises RingMismatch rather than coercing. Plain
Python ints are accepted as operands and read through the map Z -> ring.
"""
import functools
import itertools
import logging
from errors import (CompositeP, ReducibleModulus, MissingModulus, NotAUnit,
                    PrecisionIncrease, RingMismatch, InputError)

LOGGER = logging.getLogger(__name__)

# Monic moduli, low-degree coefficient first, irreducible mod p.
DEFAULT_MODULI = dict({
    (2, 2): (1, 1, 1),
    (3, 2): (1, 0, 1),
    (5, 2): (2, 0, 1),
    (7, 2): (1, 0, 1),
})

def is_prime(n):
    """Deterministic trial division; fine for the primes used at desk scale."""
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    divisor = 3
    while divisor * divisor <= n:
        if n % divisor == 0:
            return False
        divisor += 2
    return True

def _poly_mod(numerator, divisor, p):
    """Remainder of @numerator by monic @divisor over F_p (coefficient lists)."""
    remainder = [c % p for c in numerator]
    degree = len(divisor) - 1
    for top in range(len(remainder) - 1, degree - 1, -1):
        coefficient = remainder[top]
        if coefficient:
            for i, d in enumerate(divisor):
                remainder[top - degree + i] = (
                    remainder[top - degree + i] - coefficient * d) % p
    return remainder[:degree]

def is_irreducible_mod_p(modulus, p):
    """True iff monic @modulus has no monic factor of degree <= deg/2 over F_p.

    Exhaustive search over candidate factors; only meant for small degree.
    """
    degree = len(modulus) - 1
    for factor_degree in range(1, degree // 2 + 1):
        for lower in itertools.product(range(p), repeat=factor_degree):
            factor = list(lower) + [1]
            if not any(_poly_mod(modulus, factor, p)):
                return False
    return True

def find_modulus(p, tau):
    """Returns the lexicographically first monic irreducible of degree @tau."""
    if tau == 1:
        return None
    for lower in itertools.product(range(p), repeat=tau):
        candidate = tuple(lower) + (1,)
        if candidate[0] and is_irreducible_mod_p(candidate, p):
            return candidate
    raise AssertionError("F_p[x] always has irreducibles of every degree")

def make_ring(p, k, tau=1, modulus=None):
    """Returns the validated (and shared) RingSpec for GR(p^k, tau).

    @modulus is a sequence of tau + 1 integers, constant term first, and must
    be monic. For tau > 1 it may be omitted when (p, tau) has a default.
    """
    if p < 2 or k < 1 or tau < 1:
        raise InputError(f"Need p >= 2, k >= 1, tau >= 1; got {p}, {k}, {tau}.")
    if not is_prime(p):
        raise CompositeP(f"{p} is not prime.")
    if tau == 1:
        return _make_ring(p, k, 1, None)
    if modulus is None:
        if (p, tau) not in DEFAULT_MODULI:
            raise MissingModulus(f"No default modulus for p={p}, tau={tau}.")
        modulus = DEFAULT_MODULI[(p, tau)]
    modulus = tuple(int(c) % p**k for c in modulus)
    if len(modulus) != tau + 1 or modulus[-1] != 1:
        raise InputError(f"Modulus must be monic of degree {tau}: {modulus}.")
    if not is_irreducible_mod_p(modulus, p):
        raise ReducibleModulus(f"{modulus} is reducible mod {p}.")
    return _make_ring(p, k, tau, modulus)

@functools.lru_cache(maxsize=None)
def _make_ring(p, k, tau, modulus):
    """Memoized constructor; callers must validate first."""
    LOGGER.debug("New ring p=%d k=%d tau=%d modulus=%s", p, k, tau, modulus)
    return RingSpec(p, k, tau, modulus)

class RingSpec:
    """The ring GR(p^k, tau). Construct through make_ring(...) only."""
    def __init__(self, p, k, tau, modulus):
        self.p = p
        self.k = k
        self.tau = tau
        self.modulus = modulus
        self.pk = p**k
        self.q = p**tau

    def __call__(self, value):
        """Builds an element from an int, a coefficient sequence or an element."""
        if isinstance(value, RingElem):
            if value.ring is not self:
                raise RingMismatch(f"{value!r} does not live in {self}.")
            return value
        if isinstance(value, int):
            return RingElem(self, (value % self.pk,) + (0,) * (self.tau - 1))
        coeffs = tuple(int(c) % self.pk for c in value)
        if len(coeffs) != self.tau:
            raise InputError(f"Expected {self.tau} coefficients, got {coeffs}.")
        return RingElem(self, coeffs)

    def zero(self):
        """The additive identity."""
        return self(0)

    def one(self):
        """The multiplicative identity."""
        return self(1)

    def size(self):
        """Number of elements, p^(k*tau)."""
        return self.pk**self.tau

    def elements(self):
        """Yields every element, in coefficient-lexicographic order."""
        for coeffs in itertools.product(range(self.pk), repeat=self.tau):
            yield RingElem(self, coeffs)

    def at_precision(self, k):
        """The ring with the same p, tau and reduced modulus at precision @k."""
        return make_ring(self.p, k, self.tau, self.modulus)

    def residue(self):
        """The residue field F_q viewed as the precision-1 ring."""
        return self.at_precision(1)

    def __reduce__(self):
        """Unpickles onto the memoized instance, preserving identity."""
        return (make_ring, (self.p, self.k, self.tau, self.modulus))

    def __str__(self):
        if self.tau == 1:
            return f"Z/{self.pk}"
        return f"GR({self.p}^{self.k},{self.tau})"

    __repr__ = __str__

class RingElem:
    """An element of a RingSpec. Immutable."""
    __slots__ = ("ring", "coeffs")

    def __init__(self, ring, coeffs):
        self.ring = ring
        self.coeffs = coeffs

    def _coerce(self, other):
        """Brings @other into self.ring or raises RingMismatch."""
        if isinstance(other, RingElem):
            if other.ring is not self.ring:
                raise RingMismatch(f"Cannot combine {self.ring} and {other.ring}.")
            return other
        if isinstance(other, int):
            return self.ring(other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        pk = self.ring.pk
        return RingElem(self.ring, tuple((a + b) % pk for a, b
                                         in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        pk = self.ring.pk
        return RingElem(self.ring, tuple((a - b) % pk for a, b
                                         in zip(self.coeffs, other.coeffs)))

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other - self

    def __neg__(self):
        pk = self.ring.pk
        return RingElem(self.ring, tuple((-a) % pk for a in self.coeffs))

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        ring = self.ring
        if ring.tau == 1:
            return RingElem(ring, ((self.coeffs[0] * other.coeffs[0]) % ring.pk,))
        tau = ring.tau
        product = [0] * (2 * tau - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    product[i + j] += a * b
        modulus = ring.modulus
        for top in range(2 * tau - 2, tau - 1, -1):
            coefficient = product[top]
            if coefficient:
                for i in range(tau + 1):
                    product[top - tau + i] -= coefficient * modulus[i]
        return RingElem(ring, tuple(c % ring.pk for c in product[:tau]))

    __rmul__ = __mul__

    def __pow__(self, exponent):
        if exponent < 0:
            return unit_inverse(self) ** (-exponent)
        result, base = self.ring.one(), self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def is_zero(self):
        """True iff every coefficient is 0."""
        return not any(self.coeffs)

    def is_unit(self):
        """True iff the reduction mod p is nonzero in F_q."""
        p = self.ring.p
        return any(c % p for c in self.coeffs)

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ring(other)
        if not isinstance(other, RingElem):
            return NotImplemented
        return self.ring is other.ring and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.ring.pk, self.ring.tau, self.coeffs))

    def __str__(self):
        """Decimal string; coefficients joined by commas when tau > 1."""
        return ",".join(map(str, self.coeffs))

    def __repr__(self):
        return f"{self}@{self.ring}"

def arith(a, b, op):
    """Dispatches @op in {"add", "sub", "mul"} on two elements of one ring."""
    if not (isinstance(a, RingElem) and isinstance(b, RingElem)):
        raise InputError("arith expects two RingElems.")
    if a.ring is not b.ring:
        raise RingMismatch(f"Cannot combine {a.ring} and {b.ring}.")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise InputError(f"Unknown ring operation {op!r}.")

def unit_inverse(a):
    """Inverse of a unit: invert in F_q, then Newton-lift doubling precision."""
    ring = a.ring
    if not a.is_unit():
        raise NotAUnit(f"{a!r} is 0 mod {ring.p}.")
    if ring.tau == 1:
        guess = ring(pow(a.coeffs[0] % ring.p, -1, ring.p))
    else:
        residue = reduce_precision(a, 1)
        # F_q^* has order q - 1.
        guess = ring((residue ** (ring.q - 2)).coeffs)
    precision = 1
    while precision < ring.k:
        guess = guess * (2 - a * guess)
        precision *= 2
    assert a * guess == 1
    return guess

def reduce_precision(a, k):
    """The reduction map GR(p^K, tau) -> GR(p^k, tau) applied to @a."""
    ring = a.ring
    if k > ring.k:
        raise PrecisionIncrease(f"Cannot raise precision {ring.k} to {k}.")
    if k == ring.k:
        return a
    target = ring.at_precision(k)
    return RingElem(target, tuple(c % target.pk for c in a.coeffs))
