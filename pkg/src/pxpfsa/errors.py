"""Exception taxonomy shared across the package.

The CLI maps these onto exit codes: configuration-type failures exit with 2,
capacity failures with 3.
"""


class PxpError(Exception):
    """Base class for all package errors."""


class SizeError(PxpError):
    """System size outside the supported enumeration range."""


class ConfigurationError(PxpError):
    """Invalid model configuration: bad tag, incompatible scheme, term not
    applicable at this size, or a split with no defined ladder form."""


class InputError(PxpError):
    """Ill-formed numerical input (non-normalized state, dimension mismatch,
    non-orthonormal basis, series too short)."""


class CapacityError(PxpError):
    """Request exceeds the dense-solver guard."""


class DomainError(PxpError):
    """Closed-form expression evaluated outside its domain of validity."""


class FitError(PxpError):
    """Degenerate input to a fitting routine."""
