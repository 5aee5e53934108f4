"""Exception types shared across the package.

The CLI maps these onto exit codes: scenario/comparison definition
problems exit with 2, simulation divergence with 3.
"""


class PinnetError(Exception):
    """Base class for all package-specific errors."""


class InvalidSizeError(PinnetError, ValueError):
    """A topology constructor was given inconsistent or too-small sizes."""


class ContractViolationError(PinnetError, ValueError):
    """An input violates a documented precondition (e.g. asymmetric matrix)."""


class NumericalFailureError(PinnetError, RuntimeError):
    """An iterative numerical routine failed to converge within its cap."""


class BoundUndefinedError(PinnetError, ValueError):
    """An analytic gain bound was requested outside its domain of validity."""


class BoundaryCaseError(PinnetError, RuntimeError):
    """A definiteness test sits on a knife edge and the outcome is indeterminate."""


class RegionShapeError(PinnetError, RuntimeError):
    """A stability-threshold search found no sign change in its bracket."""


class InvalidDomainError(PinnetError, ValueError):
    """A sampling domain is empty or degenerate."""


class DivergenceError(PinnetError, RuntimeError):
    """Integration produced a non-finite state.

    Attributes
    ----------
    time : float
        Simulation time at which the first non-finite value appeared.
    """

    def __init__(self, time: float):
        super().__init__(f"state diverged (non-finite) at t={time:.6g}")
        self.time = time


class ScenarioDefinitionError(PinnetError, ValueError):
    """A scenario file or definition is internally inconsistent."""


class ComparisonDefinitionError(ScenarioDefinitionError):
    """A comparison request mixes incompatible scenarios."""
