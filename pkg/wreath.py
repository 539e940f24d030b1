"""Wreath products G wr C_l and the homomorphisms nu: HNN_phi(F_k) -> G wr C_l.

An element is (f, s) with f a length-l vector of matrices and s mod l, and

    (f, s) . (f', s') = (j -> f(j) f'(j + s), s + s').

For a point g whose phi_G-orbit g^(0), ..., g^(l-1) is a cycle, nu sends
t -> ((I, ..., I), 1) and x_i -> (j -> i-th matrix of g^(j), 0). With the
product above, conjugating by nu(t) shifts the vector one step along the
orbit, which is exactly the defining relation t x_i t^-1 = phi(x_i).

Separation tries nu at increasing precision p, p^2, ... and packages the first
non-neutral image as a Certificate that third parties can re-check.
"""
import functools
import logging
from dataclasses import dataclass, field
from errors import (NotPeriodic, RelationCheckFailed, EndoMismatch, InputError,
                    IdentityElement, SchemaMismatch, VerificationFailed,
                    RingMismatch, NonUnitDeterminant)
from free_group import format_endo
from local_ring import make_ring, reduce_precision
from mat_group import Mat2, MatTuple, identity, matrix_to_json, matrix_from_json
from dynamics import DEFAULT_CAP, detect_cycle, orbit
from hnn import T, from_word, format_hnn_word, normal_form
from stallings import require_injective
from utils import parallel_map

LOGGER = logging.getLogger(__name__)

CERTIFICATE_VERSION = 1

@dataclass(frozen=True)
class WreathElem:
    """(f, shift) in G wr C_l, l = len(f)."""
    f: tuple
    shift: int

    def __post_init__(self):
        f = tuple(self.f)
        if not f:
            raise InputError("A wreath element needs l >= 1 coordinates.")
        object.__setattr__(self, "f", f)
        object.__setattr__(self, "shift", self.shift % len(f))

    @property
    def l(self):
        return len(self.f)

    def __mul__(self, other):
        return wreath_mul(self, other)

def wreath_mul(lhs, rhs):
    """(f, s) . (f', s') = (j -> f(j) f'(j + s mod l), s + s')."""
    if lhs.l != rhs.l:
        raise InputError(f"Cannot multiply in C_{lhs.l} and C_{rhs.l}.")
    if lhs.f[0].ring is not rhs.f[0].ring:
        raise RingMismatch("Wreath elements over different rings.")
    l, s = lhs.l, lhs.shift
    return WreathElem(tuple(lhs.f[j] * rhs.f[(j + s) % l] for j in range(l)),
                      s + rhs.shift)

def wreath_inverse(elem):
    """(f, s)^-1 = (j -> f(j - s)^-1, -s)."""
    l, s = elem.l, elem.shift
    return WreathElem(tuple(elem.f[(j - s) % l].inverse() for j in range(l)), -s)

def neutral(l, ring=None):
    """((I, ..., I), 0)."""
    return WreathElem((identity(ring),) * l, 0)

def is_neutral(elem):
    """True iff @elem is the neutral element."""
    return elem.shift == 0 and all(mat.is_identity() for mat in elem.f)

def reduce_wreath(elem, k, l_k):
    """The map from a higher level to level @k with period @l_k.

    Entries are reduced mod p^k, the vector is cut to its first l_k
    coordinates and the shift is read mod l_k. This is a homomorphism on the
    images of nu, whose vectors are l_k-periodic mod p^k.
    """
    if elem.l % l_k:
        raise InputError(f"Period {l_k} does not divide {elem.l}.")
    reduced = tuple(Mat2(*(reduce_precision(entry, k) for entry in mat.entries()))
                    for mat in elem.f[:l_k])
    return WreathElem(reduced, elem.shift % l_k)

@dataclass(frozen=True)
class NuHom:
    """nu for one endo at one level: images of t and of x_1..x_k."""
    endo: object
    level: int
    ring: object
    period: int
    orbit: tuple
    t_image: WreathElem
    x_images: tuple
    _inverses: dict = field(default_factory=dict, compare=False, repr=False)

    def letter_image(self, index, sign):
        """nu(x_index^sign); index 0 is t."""
        if sign == 1:
            return self.t_image if index == T else self.x_images[index - 1]
        key = index
        if key not in self._inverses:
            self._inverses[key] = wreath_inverse(self.letter_image(index, 1))
        return self._inverses[key]

def build_nu(phi, g, ring=None, cap=DEFAULT_CAP):
    """nu for the periodic point @g (reduced into @ring when given).

    Validates t nu(x_i) t^-1 = nu(phi(x_i)) for every i before returning.
    """
    require_injective(phi)
    if ring is not None:
        g = g.over(ring)
    ring = g.ring
    if ring is None:
        raise InputError("build_nu needs a point over a finite ring.")
    if not g.all_unit_det():
        raise NonUnitDeterminant("nu needs invertible matrices.")
    record = detect_cycle(phi, g, cap)
    if record.tail:
        raise NotPeriodic(f"Point over {ring} has tail {record.tail}.")
    l = record.period
    points = tuple(orbit(phi, g, l))
    t_image = WreathElem((identity(ring),) * l, 1)
    x_images = tuple(WreathElem(tuple(point[i] for point in points), 0)
                     for i in range(phi.rank))
    nu = NuHom(phi, ring.k, ring, l, points, t_image, x_images)
    t_inverse = wreath_inverse(t_image)
    for i, image in enumerate(phi.images):
        lhs = t_image * x_images[i] * t_inverse
        if lhs != nu_eval(nu, from_word(image, phi)):
            raise RelationCheckFailed(f"Relation fails for generator {i + 1}.")
    LOGGER.info("Built nu over %s with period %d.", ring, l)
    return nu

def nu_eval(nu, word):
    """nu(@word) as a product of letter images."""
    if word.endo != nu.endo:
        raise EndoMismatch(f"{word.endo} vs {nu.endo}.")
    result = neutral(nu.period, nu.ring)
    for index, sign in word.letters:
        result = result * nu.letter_image(index, sign)
    return result

@functools.lru_cache(maxsize=256)
def nu_at(phi, g0, p, k, tau=1, modulus=None):
    """Cached build_nu for the exact point @g0 mod p^k."""
    return build_nu(phi, g0, make_ring(p, k, tau, modulus))

def _evidence(elem):
    """Why @elem is not neutral: its shift, or a first differing entry."""
    if elem.shift:
        return dict({"shift": elem.shift})
    for j, mat in enumerate(elem.f):
        expected = mat.identity_like().entries()
        for position, (entry, unit) in enumerate(zip(mat.entries(), expected)):
            if entry != unit:
                return dict({"index": j, "entry": [position // 2, position % 2],
                             "value": str(entry)})
    return None

def _is_int(value):
    return isinstance(value, int) and not isinstance(value, bool)

def _evidence_types_ok(evidence):
    if "shift" in evidence:
        return _is_int(evidence["shift"])
    entry = evidence["entry"]
    return (_is_int(evidence["index"]) and isinstance(evidence["value"], str)
            and isinstance(entry, list) and len(entry) == 2
            and all(map(_is_int, entry)))

def _coefficient_ok(value):
    if _is_int(value):
        return True
    if not isinstance(value, str):
        return False
    try:
        int(value)
    except ValueError:
        return False
    return True

def _matrix_json_ok(rows):
    """[[a, b], [c, d]] with integer (or integer-list) entries."""
    if not isinstance(rows, list) or len(rows) != 2:
        return False
    for row in rows:
        if not isinstance(row, list) or len(row) != 2:
            return False
        for value in row:
            coeffs = value if isinstance(value, list) else [value]
            if not coeffs or not all(map(_coefficient_ok, coeffs)):
                return False
    return True

@dataclass(frozen=True)
class Certificate:
    """A witness that an element of HNN_phi(F_k) is not the identity."""
    element: str
    endo: str
    p: int
    tau: int
    level: int
    period: int
    evidence: dict = field(compare=False)
    g0: tuple
    modulus: tuple = None
    seed: int = None
    version: int = CERTIFICATE_VERSION

    def to_json(self):
        """The version-1 JSON object."""
        return dict({
            "element": self.element, "endo": self.endo, "p": self.p,
            "tau": self.tau, "level": self.level, "period": self.period,
            "evidence": dict(self.evidence), "g0": [list(map(list, rows))
                                                    for rows in self.g0],
            "modulus": None if self.modulus is None else list(self.modulus),
            "seed": self.seed, "version": self.version,
        })

    @staticmethod
    def from_json(obj):
        """Inverse of to_json; raises SchemaMismatch on malformed input."""
        if not isinstance(obj, dict) or obj.get("version") != CERTIFICATE_VERSION:
            raise SchemaMismatch("Certificate version must be 1.")
        required = ("element", "endo", "p", "tau", "level", "period",
                    "evidence", "g0")
        missing = [key for key in required if key not in obj]
        if missing:
            raise SchemaMismatch(f"Certificate is missing {missing}.")
        evidence = obj["evidence"]
        if not isinstance(evidence, dict) or not (
                set(evidence) == {"shift"}
                or set(evidence) == {"index", "entry", "value"}):
            raise SchemaMismatch(f"Bad evidence {evidence!r}.")
        if not _evidence_types_ok(evidence):
            raise SchemaMismatch(f"Bad evidence types {evidence!r}.")
        if not isinstance(obj["g0"], list) or not all(map(_matrix_json_ok, obj["g0"])):
            raise SchemaMismatch(f"g0 is not a list of 2x2 matrices: {obj['g0']!r}.")
        modulus = obj.get("modulus")
        try:
            return Certificate(
                str(obj["element"]), str(obj["endo"]), int(obj["p"]),
                int(obj["tau"]), int(obj["level"]), int(obj["period"]),
                dict(evidence),
                tuple(tuple(tuple(row) for row in rows) for rows in obj["g0"]),
                None if modulus is None else tuple(int(c) for c in modulus),
                obj.get("seed"))
        except (TypeError, ValueError) as error:
            raise SchemaMismatch(f"Malformed certificate: {error}") from error

    def ring(self):
        """The ring of the stated level."""
        return make_ring(self.p, self.level, self.tau, self.modulus)

    def point(self):
        """g0 as an exact MatTuple."""
        return MatTuple(tuple(matrix_from_json(rows) for rows in self.g0))

def certify(word, nu, g0, seed=None):
    """A Certificate for @word at nu's level, or None if nu(word) is neutral."""
    image = nu_eval(nu, word)
    evidence = _evidence(image)
    if evidence is None:
        return None
    ring = nu.ring
    return Certificate(format_hnn_word(word), format_endo(word.endo), ring.p,
                       ring.tau, nu.level, nu.period, evidence,
                       tuple(tuple(map(tuple, matrix_to_json(mat))) for mat in g0),
                       ring.modulus, seed)

def _direct_image(points, word, l):
    """nu(word) coordinate by coordinate, straight from the orbit table.

    Coordinate j of a product collects each x-letter evaluated at orbit
    position j plus the t-exponent read so far.
    """
    f = []
    for j in range(l):
        product, offset = None, 0
        for index, sign in word.letters:
            if index == T:
                offset += sign
                continue
            mat = points[(j + offset) % l][index - 1]
            mat = mat if sign == 1 else mat.inverse()
            product = mat if product is None else product * mat
        f.append(product if product is not None else points[0][0].identity_like())
    shift = sum(sign for index, sign in word.letters if index == T)
    return WreathElem(tuple(f), shift)

def verify(certificate, phi, word):
    """Re-checks @certificate for the parsed @phi and @word from scratch.

    Raises VerificationFailed unless the image at the stated level is
    non-neutral and agrees with the recorded period and evidence.
    """
    if format_endo(phi) != certificate.endo or format_hnn_word(word) != certificate.element:
        raise VerificationFailed("Certificate text does not match its inputs.")
    ring = certificate.ring()
    g = certificate.point().over(ring)
    record = detect_cycle(phi, g)
    if record.tail or record.period != certificate.period:
        raise VerificationFailed(
            f"Period {record.period} (tail {record.tail}) != {certificate.period}.")
    image = _direct_image(orbit(phi, g, record.period), word, record.period)
    if is_neutral(image):
        raise VerificationFailed("The element maps to the neutral element.")
    evidence = certificate.evidence
    if "shift" in evidence:
        if evidence["shift"] != image.shift or not image.shift:
            raise VerificationFailed(f"Shift is {image.shift}, not {evidence['shift']}.")
        return True
    j, (row, column) = evidence["index"], evidence["entry"]
    if not 0 <= j < image.l or row not in (0, 1) or column not in (0, 1):
        raise VerificationFailed(f"Evidence position {j}, {row}, {column} is invalid.")
    entry = image.f[j].entries()[2 * row + column]
    unit = 1 if row == column else 0
    if str(entry) != str(evidence["value"]) or entry == unit:
        raise VerificationFailed(f"Entry is {entry}, not a non-identity {evidence['value']}.")
    return True

def _separate_entry(args):
    """Worker: the lowest level of one schedule entry separating @word."""
    word, (p, tau, max_level), g0, seed = args
    for level in range(1, max_level + 1):
        nu = nu_at(word.endo, g0, p, level, tau)
        certificate = certify(word, nu, g0, seed)
        LOGGER.info("p=%d tau=%d level %d: %s", p, tau, level,
                    "separated" if certificate else "neutral")
        if certificate is not None:
            return certificate
    return None

def separate(word, schedule, g0, seed=None, workers=1):
    """The lowest-level Certificate for @word over @schedule, or None.

    @schedule is a list of (p, tau, max level). Entries are tried in parallel;
    among successes the lowest level wins, ties going to the earlier entry.
    None means inconclusive, not that @word is the identity.
    """
    if normal_form(word).is_identity():
        raise IdentityElement(f"{format_hnn_word(word)} is the identity.")
    jobs = [(word, tuple(entry), g0, seed) for entry in schedule]
    found = [(certificate.level, position, certificate) for position, certificate
             in enumerate(parallel_map(_separate_entry, jobs, workers))
             if certificate is not None]
    if not found:
        LOGGER.info("Separation of %s inconclusive.", format_hnn_word(word))
        return None
    return min(found, key=lambda item: item[:2])[2]
