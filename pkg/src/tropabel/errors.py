"""Exception taxonomy shared by the library and the CLI.

Exit codes (used by the CLI):
  2  bad inputs (malformed JSON, unknown ids, violated preconditions)
  3  a guard or search tripped (enumeration too large, oracle found zero or
     several survivors, lattice denominator escape)
  4  an internal invariant that should be unfalsifiable was falsified; the
     payload carries the falsifying instance
"""


class TropabelError(Exception):
    """Base class; carries an optional structured detail payload."""

    exit_code = 1

    def __init__(self, message, detail=None):
        super().__init__(message)
        self.detail = dict(detail) if detail else {}


class InputError(TropabelError):
    exit_code = 2


class UnsupportedInputError(InputError):
    """Well-formed input outside the supported class (e.g. bridged graphs
    handed to the witness scan)."""


class GuardError(TropabelError):
    exit_code = 3


class EnumerationGuardError(GuardError):
    """An exhaustive scan would exceed the configured size guard."""


class OracleFailure(GuardError):
    """The brute-force oracle found zero or more than one survivor."""


class DenominatorEscape(GuardError):
    """The lattice search failed at N and at the 2N retry."""


class InternalInvariantError(TropabelError):
    exit_code = 4


class ConventionError(InternalInvariantError):
    """A post-verified output failed verification; the orientation/sign
    convention would be wrong.  Must never fire on valid inputs."""


class LemmaViolationError(InternalInvariantError):
    """A 2/3-hemisphere intersection matched neither classification case."""


class ClosureViolationError(InternalInvariantError):
    """A family expected to be intersection-closed was not."""


class NonTerminationError(InternalInvariantError):
    """An iteration guard was exceeded and no fallback was possible."""
