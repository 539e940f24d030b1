"""Exceptions raised by Spindle.

Everything derives from SpindleError. Problems with caller-provided input also
derive from ValueError (via InputError) so the CLI can map them to exit code 2.
Conditions that can only arise from a bug are asserted instead.
"""

class SpindleError(Exception):
    """Base class for all errors raised by this package."""

class InputError(SpindleError, ValueError):
    """The caller handed us something malformed or out of range."""

class GeneratorIndexError(InputError):
    """A letter refers to a generator outside 1..k."""

class RankMismatch(InputError):
    """Two objects over free groups of different rank were combined."""

class EndoMismatch(InputError):
    """Two HNN words over different endomorphisms were compared."""

class NotInjective(InputError):
    """An operation requiring an injective endomorphism got one that is not."""

class RingMismatch(InputError):
    """Elements of different rings (or wreath products) were combined."""

class CompositeP(InputError):
    """The characteristic p handed to make_ring is not prime."""

class ReducibleModulus(InputError):
    """The Galois-ring modulus is reducible modulo p."""

class MissingModulus(InputError):
    """No modulus was given for tau > 1 and no default is known."""

class PrecisionIncrease(InputError):
    """reduce_precision was asked to raise the precision."""

class DetNotUnit(InputError):
    """An exact integer matrix has determinant other than +1 or -1."""

class DSLSyntaxError(InputError):
    """Text does not match the endomorphism / word grammar."""

class MissingImage(InputError):
    """A generator was referenced but never given an image."""

class UnknownGenerator(InputError):
    """A right-hand side uses a symbol never defined on a left-hand side."""

class SchemaMismatch(InputError):
    """Certificate JSON is not schema version 1."""

class IdentityElement(InputError):
    """Asked to separate the identity element."""

class NotAUnit(SpindleError, ArithmeticError):
    """Tried to invert a ring element that is zero modulo p."""

class NonUnitDeterminant(NotAUnit):
    """A matrix had to be inverted but its determinant is not a unit."""

class CapExceeded(SpindleError):
    """An orbit did not close up within the iteration cap."""

class BudgetExceeded(SpindleError):
    """An exhaustive search would visit more points than the budget allows."""

class OrderCapExceeded(SpindleError):
    """The multiplicative order of a Jacobian exceeds the cap."""

class NotPeriodic(SpindleError):
    """A point expected to be periodic has a nonzero tail."""

class NotPeriodicModP(NotPeriodic):
    """The reduction mod p of a point is not periodic."""

class SingularJacobian(SpindleError):
    """A Jacobian that must be invertible is singular mod p."""

class CongruenceFailed(SpindleError):
    """A divided difference was requested where p^i does not divide."""

class RelationCheckFailed(SpindleError):
    """A freshly built homomorphism violates a defining relation."""

class VerificationFailed(SpindleError):
    """A certificate does not re-verify."""
