"""Exception hierarchy shared by every engine module."""


class RelcalcError(Exception):
    """Base class for all engine errors."""

    code = "error"


class InputError(RelcalcError):
    """Malformed or inconsistent input (bad rational, bad geometry, ...)."""

    code = "input"


class SpaceMismatch(InputError):
    code = "space-mismatch"


class NegativeEpsilon(InputError):
    code = "negative-epsilon"


class PointOutsideSpace(InputError):
    code = "point-outside-space"


class NonClosedRestriction(InputError):
    code = "non-closed-restriction"


class DomainNotDense(InputError):
    code = "domain-not-dense"


class NotContinuous(InputError):
    code = "not-continuous"


class NotTotal(InputError):
    code = "not-total"


class DimensionMismatch(InputError):
    code = "dimension-mismatch"


class ResolutionTooLarge(InputError):
    code = "resolution-too-large"


class CellLimitExceeded(InputError):
    code = "cell-limit"


class Refusal(RelcalcError):
    """The engine declines an operation whose preconditions fail on valid input."""

    code = "refusal"


class NotSuitable(Refusal):
    code = "not-suitable"

    def __init__(self, message, which=None):
        super().__init__(message)
        self.which = which


class NotIsomorphism(Refusal):
    code = "not-isomorphism"


class MinimalError(Refusal):
    """No unique closed subrelation minimal for the first projection.

    ``witness`` is an ``Interval`` of the source space where the failure shows.
    """

    code = "minimal"
    kind = "Minimal"

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NotFullDomain(MinimalError):
    code = "not-full-domain"
    kind = "NotFullDomain"


class NonUniqueMinimal(MinimalError):
    code = "non-unique-minimal"
    kind = "NonUniqueMinimal"


class Unreachable(RelcalcError):
    """An existence guarantee failed; indicates an engine bug."""

    code = "unreachable"
