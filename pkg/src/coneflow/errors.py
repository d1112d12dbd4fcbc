"""Exception hierarchy shared across the toolkit."""


class ConeflowError(Exception):
    """Base class for all errors raised by this package."""


class DimensionError(ConeflowError):
    """Vector/matrix dimensions do not match the declared state dimension."""


class DegenerateConeError(ConeflowError):
    """The quadratic form has an eigenvalue too close to zero."""


class EmptyStratumError(ConeflowError):
    """The requested cone stratum contains no directions to sample."""


class ParseError(ConeflowError):
    """Syntax or declaration error in a vector-field expression.

    Carries 1-based ``line`` and ``column`` of the offending token.
    """

    def __init__(self, message, line=None, column=None):
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)
        self.line = line
        self.column = column


class EvaluationError(ConeflowError):
    """Runtime failure while evaluating a field (division by zero, bad power,
    unbound parameter, non-finite result)."""


class UnknownSystemError(ConeflowError):
    """Requested builtin system name is not registered."""


class ConfigError(ConeflowError):
    """Malformed run-configuration file."""


class IntegrationError(ConeflowError):
    """Adaptive stepper failed (step-size underflow or non-finite state)."""


class NewtonError(ConeflowError):
    """Newton iteration failed to converge."""


class SingularJacobianError(ConeflowError):
    """Jacobian (or fast-block Jacobian) is singular at the requested point."""


class OnManifoldError(ConeflowError):
    """Initial condition already lies on the slow manifold to tolerance."""


class SectionError(ConeflowError):
    """Poincare section failure: no crossing found or tangential crossing."""


class RefinementError(ConeflowError):
    """Periodic-orbit refinement did not converge."""


class BasePointMismatchError(ConeflowError):
    """Chord-flow composition pieces do not share their junction points."""
