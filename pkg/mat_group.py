"""2x2 matrices over RingSpecs (or exact integers) and word maps on tuples.

Entries are duck-typed: Python ints (the exact case), local_ring.RingElem, or
lifting.DualElem all support +, -, * and mixing with ints. Inverse letters are
evaluated as adj(x) . det(x)^-1, or as plain adj(x) when adjugate=True, which
turns every word map into the polynomial map used on the matrix ring M(2)^k.
"""
import logging
from dataclasses import dataclass
from typing import NamedTuple
from errors import (RingMismatch, RankMismatch, DetNotUnit, NotAUnit,
                    NonUnitDeterminant, InputError)
from local_ring import RingElem, unit_inverse, reduce_precision

LOGGER = logging.getLogger(__name__)

def _ring_of(entry):
    return getattr(entry, "ring", None)

def _scalar_inverse(scalar):
    """Inverse of a determinant; raises NonUnitDeterminant / DetNotUnit."""
    if isinstance(scalar, int):
        if scalar not in (1, -1):
            raise DetNotUnit(f"Exact determinant {scalar} is not +-1.")
        return scalar
    if isinstance(scalar, RingElem):
        try:
            return unit_inverse(scalar)
        except NotAUnit as error:
            raise NonUnitDeterminant(f"det = {scalar!r} is not a unit.") from error
    return scalar.inverse()

@dataclass(frozen=True)
class Mat2:
    """The matrix [[a, b], [c, d]]."""
    a: object
    b: object
    c: object
    d: object

    def __post_init__(self):
        ring = _ring_of(self.a)
        for entry in (self.b, self.c, self.d):
            if _ring_of(entry) is not ring:
                raise RingMismatch("Matrix entries live in different rings.")

    @property
    def ring(self):
        """The RingSpec of the entries, or None for exact integers."""
        return _ring_of(self.a)

    def is_exact(self):
        """True iff the entries are Python integers."""
        return isinstance(self.a, int)

    def __mul__(self, other):
        if not isinstance(other, Mat2):
            return NotImplemented
        if self.ring is not other.ring:
            raise RingMismatch(f"Cannot multiply over {self.ring} and {other.ring}.")
        return Mat2(self.a * other.a + self.b * other.c,
                    self.a * other.b + self.b * other.d,
                    self.c * other.a + self.d * other.c,
                    self.c * other.b + self.d * other.d)

    def det(self):
        """ad - bc."""
        return self.a * self.d - self.b * self.c

    def adj(self):
        """The adjugate [[d, -b], [-c, a]]; adj(A) A = det(A) I."""
        return Mat2(self.d, -self.b, -self.c, self.a)

    def scale(self, scalar):
        """Multiplies every entry by @scalar."""
        return Mat2(self.a * scalar, self.b * scalar,
                    self.c * scalar, self.d * scalar)

    def inverse(self):
        """adj . det^-1; needs a unit determinant."""
        return self.adj().scale(_scalar_inverse(self.det()))

    def has_unit_det(self):
        """True iff the determinant is invertible (+-1 in the exact case)."""
        det = self.det()
        if isinstance(det, int):
            return det in (1, -1)
        return det.is_unit()

    def entries(self):
        """(a, b, c, d)."""
        return (self.a, self.b, self.c, self.d)

    def identity_like(self):
        """The identity matrix over the same entries' ring."""
        zero = self.a * 0
        return Mat2(zero + 1, zero, zero, zero + 1)

    def is_identity(self):
        """True iff this is the identity matrix."""
        return self == self.identity_like()

    def __str__(self):
        return f"[[{self.a}, {self.b}], [{self.c}, {self.d}]]"

def identity(ring=None):
    """The 2x2 identity over @ring, or over the integers if @ring is None."""
    if ring is None:
        return Mat2(1, 0, 0, 1)
    return Mat2(ring.one(), ring.zero(), ring.zero(), ring.one())

def matrix(rows, ring=None):
    """Builds a Mat2 from [[a, b], [c, d]] (ints or decimal strings)."""
    (a, b), (c, d) = rows
    values = [int(entry) for entry in (a, b, c, d)]
    if ring is not None:
        values = [ring(value) for value in values]
    return Mat2(*values)

def mat_over(mat, ring):
    """Reduces @mat into @ring: from exact integers or a higher precision."""
    if mat.is_exact():
        return Mat2(*(ring(entry) for entry in mat.entries()))
    source = mat.ring
    if (source.p, source.tau) != (ring.p, ring.tau):
        raise RingMismatch(f"Cannot reduce {source} to {ring}.")
    reduced = Mat2(*(reduce_precision(entry, ring.k) for entry in mat.entries()))
    if reduced.ring is not ring:
        raise RingMismatch(f"Reduction of {source} landed outside {ring}.")
    return reduced

class Basic(NamedTuple):
    """Result of mat_basic."""
    product: Mat2
    det: object
    adj: Mat2

def mat_basic(lhs, rhs):
    """A . B together with det(A) and adj(A)."""
    return Basic(lhs * rhs, lhs.det(), lhs.adj())

@dataclass(frozen=True)
class MatTuple:
    """A point (g_1, ..., g_k) of M(2)^k, i.e. 4k affine coordinates."""
    mats: tuple

    def __post_init__(self):
        mats = tuple(self.mats)
        if not mats:
            raise InputError("A MatTuple needs at least one matrix.")
        ring = mats[0].ring
        for mat in mats:
            if mat.ring is not ring:
                raise RingMismatch("All matrices of a tuple must share a ring.")
        object.__setattr__(self, "mats", mats)

    @property
    def ring(self):
        """The common ring, or None for exact integers."""
        return self.mats[0].ring

    def __len__(self):
        return len(self.mats)

    def __getitem__(self, index):
        return self.mats[index]

    def __iter__(self):
        return iter(self.mats)

    def over(self, ring):
        """Entrywise reduction into @ring."""
        return MatTuple(tuple(mat_over(mat, ring) for mat in self.mats))

    def coordinates(self):
        """The 4k coordinates in order (a1, b1, c1, d1, a2, ...)."""
        return [entry for mat in self.mats for entry in mat.entries()]

    def encode(self):
        """A sortable, hashable integer encoding."""
        if self.ring is None:
            return tuple(self.coordinates())
        return tuple(c for entry in self.coordinates() for c in entry.coeffs)

    def all_unit_det(self):
        """True iff every matrix has a unit determinant."""
        return all(mat.has_unit_det() for mat in self.mats)

    def __str__(self):
        return "(" + ", ".join(map(str, self.mats)) + ")"

def tuple_of(rows_list, ring=None):
    """MatTuple from a list of [[a, b], [c, d]]."""
    return MatTuple(tuple(matrix(rows, ring) for rows in rows_list))

def identity_tuple(k, ring=None):
    """(I, ..., I)."""
    return MatTuple((identity(ring),) * k)

def eval_word(word, assignment, adjugate=False):
    """Evaluates @word at the matrices of @assignment.

    Inverse letters use adj(x) det(x)^-1, which needs a unit determinant (only
    checked for generators that actually occur inverted). With @adjugate they
    use adj(x) alone. The empty word evaluates to the identity.
    """
    if len(assignment) != word.rank:
        raise RankMismatch(
            f"Word of rank {word.rank} evaluated at {len(assignment)} matrices.")
    inverses = dict()
    result = None
    for index, sign in word.letters:
        mat = assignment[index - 1]
        if sign == -1:
            if index not in inverses:
                inverses[index] = mat.adj() if adjugate else mat.inverse()
            mat = inverses[index]
        result = mat if result is None else result * mat
    if result is None:
        return assignment[0].identity_like()
    return result

def phi_map(phi, point, adjugate=False):
    """The word map phi_G: (g_i) -> (w_i(g))."""
    return MatTuple(tuple(eval_word(image, point, adjugate)
                          for image in phi.images))

def freeness_check(mats, length):
    """Searches for a nonempty reduced word of length <= @length equal to I.

    @mats must be exact integer matrices with determinant +-1. Returns
    (True, None) if none exists, else (False, shortest witness word) where
    the witness letters index into @mats.
    """
    # Imported here: free_group does not depend on matrices.
    from free_group import Word
    for mat in mats:
        if not mat.is_exact():
            raise InputError("freeness_check works over the integers.")
        if mat.det() not in (1, -1):
            raise DetNotUnit(f"det {mat.det()} of {mat} is not +-1.")
    rank = len(mats)
    letters = [(i, sign) for i in range(1, rank + 1) for sign in (1, -1)]
    values = dict({(i, 1): mats[i - 1] for i in range(1, rank + 1)})
    values.update({(i, -1): mats[i - 1].inverse() for i in range(1, rank + 1)})
    level = [((letter,), values[letter]) for letter in letters]
    for current_length in range(1, length + 1):
        for spelled, product in level:
            if product.is_identity():
                LOGGER.info("Relation of length %d found.", current_length)
                return False, Word(spelled, rank)
        if current_length == length:
            break
        level = [(spelled + (letter,), product * values[letter])
                 for spelled, product in level for letter in letters
                 if letter != (spelled[-1][0], -spelled[-1][1])]
    return True, None

def matrix_to_json(mat):
    """[[a, b], [c, d]] with decimal-string entries (lists for tau > 1)."""
    def _entry(value):
        if isinstance(value, int):
            return str(value)
        if value.ring.tau == 1:
            return str(value.coeffs[0])
        return [str(c) for c in value.coeffs]
    return [[_entry(mat.a), _entry(mat.b)], [_entry(mat.c), _entry(mat.d)]]

def matrix_from_json(rows, ring=None):
    """Inverse of matrix_to_json."""
    def _entry(value):
        if isinstance(value, list):
            if ring is None:
                raise InputError("Coefficient lists need a ring.")
            return ring([int(c) for c in value])
        return ring(int(value)) if ring is not None else int(value)
    (a, b), (c, d) = rows
    return Mat2(_entry(a), _entry(b), _entry(c), _entry(d))
