"""Exception hierarchy.

Every error raised by the package derives from :class:`OrthoCartanError` so
callers (the CLI in particular) can separate usage problems from failed
mathematical checks.
"""


class OrthoCartanError(Exception):
    """Base class for all package errors."""


class ParameterError(OrthoCartanError, ValueError):
    """Invalid family, size or option combination."""


class DimensionError(OrthoCartanError, ValueError):
    """Shapes or ambient dimensions do not match."""


class StructureError(OrthoCartanError, ValueError):
    """A matrix does not have the structure it was declared to have."""


class SearchFailure(OrthoCartanError, RuntimeError):
    """Rejection sampling exhausted its retry budget."""


class DecompositionError(OrthoCartanError, RuntimeError):
    """Root-space decomposition could not be certified."""


class ConjugationError(OrthoCartanError, RuntimeError):
    """No structure-preserving conjugator was found within tolerance."""


class NormalizerError(OrthoCartanError, RuntimeError):
    """A group element does not normalize the given Cartan subalgebra."""


class InfeasibleError(OrthoCartanError, RuntimeError):
    """The bracket equation [a, b] = x has no solution within tolerance."""


class NonConvergenceError(OrthoCartanError, RuntimeError):
    """The descent hit its iteration cap; ``trace`` holds the partial run."""

    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = trace
