"""Exception hierarchy shared by every sigmadic module.

Each exception carries a stable machine-readable ``code`` so the command
line front end can map failures to exit codes and report the category
without string matching on messages.
"""

from __future__ import annotations


class SigmadicError(Exception):
    """Base class for all domain errors raised by this package."""

    code = "error"


class MixedField(SigmadicError):
    """Operands belong to two different field or ring descriptors."""

    code = "mixed-field"


class DivisionByZero(SigmadicError):
    """Inversion or exact division by the zero element of a field."""

    code = "division-by-zero"


class AllCoefficientsZero(SigmadicError):
    """A linearized equation was posed with every coefficient zero."""

    code = "all-coefficients-zero"


class NonUnitInverse(SigmadicError):
    """Inverse requested for an element of positive valuation."""

    code = "non-unit-inverse"


class PrecisionLoss(SigmadicError):
    """An operation would produce an element of negative valuation.

    Work happens in the valuation ring at a fixed absolute precision, so
    results that leave the ring are reported instead of silently wrapped.
    """

    code = "precision-loss"


class InsufficientPrecision(SigmadicError):
    """The working precision cannot support the requested observation.

    Raised e.g. when a leading term at level m needs m+1 unit digits past
    the valuation of the argument but the ring only stores N digits.
    """

    code = "insufficient-precision"


class TruncationUnsound(SigmadicError):
    """A truncated series was evaluated at a point where dropped
    monomials could still contribute above the working precision."""

    code = "truncation-unsound"


class NotRegular(SigmadicError):
    """Weierstrass division/preparation asked for with a divisor that is
    not regular in the chosen variable."""

    code = "not-regular"


class QuotientSingularity(SigmadicError):
    """A formal quotient was differentiated at a vanishing denominator."""

    code = "quotient-singularity"


class ZeroGradient(SigmadicError):
    """Every formal partial derivative vanishes at the expansion point."""

    code = "zero-gradient"


class ConfigRejected(SigmadicError):
    """A proposed Hensel configuration failed verification.

    ``witness`` holds the concrete refutation: either the valuation
    inequality that failed or a sampled pair violating the linear
    approximation bound.
    """

    code = "config-rejected"

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class ResidueUnsolvable(SigmadicError):
    """The residue equation of a Hensel step has no root in the working
    residue field.

    The equation always has a root after a finite base change, so
    ``extension_required`` is set; enlarging the field is an explicit
    operation left to the caller, never performed implicitly.
    """

    code = "residue-unsolvable"

    def __init__(self, message: str, extension_required: bool = True):
        super().__init__(message)
        self.extension_required = extension_required


class StalledProgress(SigmadicError):
    """A Hensel iteration failed to increase the residual valuation or
    exceeded its step budget."""

    code = "stalled-progress"


class ParseError(SigmadicError):
    """Syntax error in a textual term, with position and expectations.

    ``position`` is a 1-based column into the source text.  ``expected``
    is the set of token descriptions that would have been legal.
    """

    code = "syntax-error"

    def __init__(self, message: str, position: int, expected=()):
        super().__init__(message)
        self.position = position
        self.expected = frozenset(expected)
