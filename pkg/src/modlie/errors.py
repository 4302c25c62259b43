"""Exception hierarchy shared across the package.

The CLI maps these onto exit codes: ValidationError -> 2,
CapExceededError -> 3, VerificationError -> 4.
"""


class ModlieError(Exception):
    """Base class for all package errors."""


class ValidationError(ModlieError):
    """Input data violates a structural invariant (bad bracket table, bad p-map, ...)."""


class CapExceededError(ModlieError):
    """A configured resource cap (field size, enumeration size, dimension) was hit."""


class MeataxeInconclusiveError(CapExceededError):
    """The randomized irreducibility test hit its iteration cap without a decision."""


class VerificationError(ModlieError):
    """An internal cross-check failed; this signals a bug, never bad user input."""


class NonScalarActionError(ModlieError):
    """x^p - x^[p] did not act as a scalar; the coefficient field is too small."""
