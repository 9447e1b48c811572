"""Exception types shared across the package."""


class FraclapError(Exception):
    """Base class for all package-specific failures."""


class DomainError(FraclapError, ValueError):
    """An argument lies outside the mathematical domain of the operation."""


class ShapeError(FraclapError, ValueError):
    """Incompatible meshes or array shapes."""


class NonIntegrableError(DomainError):
    """Endpoint behavior too singular for the requested integral."""


class TraceUndefinedError(DomainError):
    """Trace requested in a parameter regime where it does not exist (alpha*p <= 1)."""


class TraceSingularError(FraclapError):
    """Trace requested at an endpoint where the function is singular."""


class TraceNotConvergedError(FraclapError):
    """Endpoint extrapolants disagree beyond tolerance."""


class DecompositionError(FraclapError):
    """Singular/regular splitting did not stabilize."""


class CoercivityError(FraclapError):
    """A constrained stiffness matrix that should be positive definite is not."""


class AssemblyError(FraclapError):
    """Assembled matrices are indefinite or otherwise inconsistent."""


class ExpectedKernelError(FraclapError):
    """The assembled operator has the known near-null direction; a reduced space is required."""


class NormGateError(DomainError):
    """The seminorm is not a norm for these parameters, so the solve is rejected."""


class ConvergenceError(FraclapError):
    """An iterative solver stopped without meeting its tolerances."""


class SpecificationError(FraclapError):
    """A user-supplied energy density violates its structural contract."""
