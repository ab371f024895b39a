"""Exception hierarchy for the kernel.

Every mathematically meaningful failure gets its own class so that callers
(and the CLI/service layer) can map failures to exit codes and certificates
without string matching.
"""


class KernelError(Exception):
    """Base class for all kernel errors."""


class InputError(KernelError):
    """Malformed or inconsistent input (exit code 2 territory)."""


class ParseError(InputError):
    def __init__(self, message, position=None, location=None):
        self.position = position
        self.location = location
        super().__init__(message)


class SchemaError(InputError):
    def __init__(self, message, location=None):
        self.location = location
        super().__init__(message)


# -- groups ------------------------------------------------------------

class NotLatinSquare(InputError):
    pass


class NoIdentity(InputError):
    pass


class NoInverse(InputError):
    pass


class NotAssociative(InputError):
    pass


class NotASubgroup(InputError):
    pass


class NotAUnionOfCosets(InputError):
    pass


# -- cohomology --------------------------------------------------------

class NotACocycle(InputError):
    pass


class NoSolution(KernelError):
    """A linear solve guaranteed to succeed did not; signals a kernel bug."""


class InternalInconsistency(KernelError):
    """An invariant that must hold by theory failed; signals a kernel bug."""


# -- conformal / matrix model -------------------------------------------

class NotHomogeneous(InputError):
    pass


class NotInvertibleOverPolyRing(InputError):
    pass


class NotDegreeE(InputError):
    pass


class CocyclesNotCohomologous(InputError):
    pass


class SingularMatrix(InputError):
    pass


# -- structure theory ----------------------------------------------------

class NotSemisimple(KernelError):
    def __init__(self, message, certificate=None):
        self.certificate = certificate
        super().__init__(message)


class NotIrreducible(KernelError):
    def __init__(self, message, certificate=None):
        self.certificate = certificate
        super().__init__(message)


class SplitFieldRequired(KernelError):
    """A construction needs an extension of Q; the kernel never approximates."""


class VerificationFailed(KernelError):
    """Recovered or supplied structure data failed an exact re-check."""


class ClosureBoundExceeded(KernelError):
    """Ideal-closure iteration did not stabilize within the configured bound."""
